"""Reading and writing recordings, annotations, feature tables and models.

File formats
------------
Recording CSV::

    # sample_rate_hz=256
    Fp1,Fp2,Cz
    12.5,-3.25,0.5
    ...

Annotation CSV, one event per line (``#`` lines are comments)::

    channel,onset_s,duration_s,label

Feature table CSV::

    channel,start_index,mu,sigma,nu,label

Model file: JSON object with keys ``version``, ``scaling``, ``k``,
``metric``, ``vote``, ``features`` and ``labels``.

Floats are written with 17 significant digits so every value round-trips.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    EmptyDataset,
    InconsistentRowWidth,
    IoFailure,
    MalformedHeader,
    MalformedLine,
    MissingFile,
    NegativeOnset,
    NonNumericSample,
    NonPositiveSampleRate,
    SchemaViolation,
    UnknownChannel,
    UnknownLabel,
    UnsupportedVersion,
)

MODEL_VERSION = "v1"
LABELS = (0, 1)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def validate_channel_name(name: str) -> str:
    if not isinstance(name, str) or not name or any(c.isspace() for c in name):
        raise MalformedHeader(f"invalid channel name {name!r}")
    return name


def validate_label(value) -> int:
    try:
        label = int(value)
    except (TypeError, ValueError):
        raise UnknownLabel(f"label must be 0 or 1, got {value!r}") from None
    if label not in LABELS or (isinstance(value, float) and value != label):
        raise UnknownLabel(f"label must be 0 or 1, got {value!r}")
    return label


@dataclass(frozen=True, eq=False)
class Recording:
    """Multichannel signal: ``data`` is (N samples) x (M channels), in mV."""

    sample_rate_hz: float
    channels: Tuple[str, ...]
    data: np.ndarray

    def __post_init__(self):
        rate = float(self.sample_rate_hz)
        if not (math.isfinite(rate) and rate > 0):
            raise NonPositiveSampleRate(f"sample rate must be positive, got {self.sample_rate_hz!r}")
        channels = tuple(validate_channel_name(c) for c in self.channels)
        if len(set(channels)) != len(channels):
            dupes = sorted({c for c in channels if channels.count(c) > 1})
            raise MalformedHeader(f"duplicate channel names: {', '.join(dupes)}")
        data = np.array(self.data, dtype=np.float64)
        if data.ndim == 1:
            data = data[:, None]
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise InconsistentRowWidth(f"data must be a non-empty N x M matrix, got shape {data.shape}")
        if data.shape[1] != len(channels):
            raise InconsistentRowWidth(
                f"{len(channels)} channel names but {data.shape[1]} data columns"
            )
        if not np.all(np.isfinite(data)):
            raise NonNumericSample(*_first_nonfinite(data))
        data.setflags(write=False)
        object.__setattr__(self, "sample_rate_hz", rate)
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "data", data)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz

    def channel(self, name: str) -> np.ndarray:
        try:
            idx = self.channels.index(name)
        except ValueError:
            raise UnknownChannel(f"no channel named {name!r}") from None
        return self.data[:, idx]

    def __eq__(self, other):
        if not isinstance(other, Recording):
            return NotImplemented
        return (self.sample_rate_hz == other.sample_rate_hz
                and self.channels == other.channels
                and np.array_equal(self.data, other.data))


def _first_nonfinite(data):
    r, c = np.argwhere(~np.isfinite(data))[0]
    return int(r) + 1, int(c) + 1, repr(float(data[r, c]))


@dataclass(frozen=True)
class Annotation:
    channel: str
    onset_s: float
    duration_s: float
    label: int

    def __post_init__(self):
        validate_channel_name(self.channel)
        if not (math.isfinite(self.onset_s) and math.isfinite(self.duration_s)):
            raise MalformedLine("onset and duration must be finite")
        if self.onset_s < 0:
            raise NegativeOnset(f"onset must be non-negative, got {self.onset_s!r}")
        if self.duration_s <= 0:
            raise MalformedLine(f"duration must be positive, got {self.duration_s!r}")
        object.__setattr__(self, "label", validate_label(self.label))

    @property
    def end_s(self) -> float:
        return self.onset_s + self.duration_s


def check_annotations(annotations: Iterable[Annotation], recording: Recording) -> None:
    """Ensure every annotation names a channel of ``recording`` and ends
    before the recording does."""
    for a in annotations:
        if a.channel not in recording.channels:
            raise UnknownChannel(f"annotation refers to unknown channel {a.channel!r}")
        if a.end_s > recording.duration_s * (1 + 1e-12):
            raise MalformedLine(
                f"annotation {a} ends at {a.end_s} s, after the recording ({recording.duration_s} s)"
            )


# --- recordings ----------------------------------------------------------

def _read_lines(path) -> List[str]:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    try:
        return path.read_text().splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _parse_rate(line: str) -> float:
    body = line.lstrip("#").strip()
    key, sep, value = body.partition("=")
    if not sep or key.strip() != "sample_rate_hz":
        raise MalformedHeader(f"expected '# sample_rate_hz=<value>', got {line!r}")
    try:
        rate = float(value)
    except ValueError:
        raise MalformedHeader(f"sample rate is not a number: {value.strip()!r}") from None
    if not (math.isfinite(rate) and rate > 0):
        raise NonPositiveSampleRate(f"sample rate must be positive, got {value.strip()!r}")
    return rate


def load_recording(path, format: str = "csv") -> Recording:
    """Load a recording CSV.

    Raises
    ------
    MissingFile, MalformedHeader, NonNumericSample, InconsistentRowWidth,
    NonPositiveSampleRate
    """
    if format != "csv":
        raise ValueError(f"unsupported recording format {format!r}")
    lines = _read_lines(path)
    if len(lines) < 2 or not lines[0].startswith("#"):
        raise MalformedHeader(f"{path}: missing '# sample_rate_hz=' line or channel header")
    rate = _parse_rate(lines[0])
    channels = [c.strip() for c in lines[1].split(",")]
    if any(not c for c in channels):
        raise MalformedHeader(f"{path}: empty channel name in header")
    seen = set()
    for c in channels:
        validate_channel_name(c)
        if c in seen:
            raise MalformedHeader(f"{path}: duplicate channel name {c!r}")
        seen.add(c)

    rows = []
    for lineno, line in enumerate(lines[2:], start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(channels):
            raise InconsistentRowWidth(
                f"{path}: data row {lineno} has {len(cells)} values, expected {len(channels)}"
            )
        row = []
        for col, cell in enumerate(cells, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise NonNumericSample(lineno, col, cell) from None
            if not math.isfinite(v):
                raise NonNumericSample(lineno, col, cell)
            row.append(v)
        rows.append(row)
    if not rows:
        raise InconsistentRowWidth(f"{path}: no data rows")
    return Recording(rate, tuple(channels), np.array(rows, dtype=np.float64))


def save_recording(recording: Recording, path) -> None:
    out = [f"# sample_rate_hz={fmt(recording.sample_rate_hz)}", ",".join(recording.channels)]
    out.extend(",".join(fmt(v) for v in row) for row in recording.data)
    _write_text(path, "\n".join(out) + "\n")


# --- annotations ---------------------------------------------------------

def load_annotations(path) -> List[Annotation]:
    """Read ``channel,onset_s,duration_s,label`` records in file order.

    A leading ``channel,onset_s,duration_s,label`` header line is accepted.
    """
    result = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        cells = [c.strip() for c in text.split(",")]
        if cells == ["channel", "onset_s", "duration_s", "label"]:
            continue
        if len(cells) != 4:
            raise MalformedLine(f"{path}:{lineno}: expected 4 fields, got {len(cells)}")
        channel, onset, duration, label = cells
        try:
            onset_s, duration_s = float(onset), float(duration)
        except ValueError:
            raise MalformedLine(f"{path}:{lineno}: onset/duration not numeric") from None
        if label not in ("0", "1"):
            raise UnknownLabel(f"{path}:{lineno}: label must be 0 or 1, got {label!r}")
        try:
            result.append(Annotation(channel, onset_s, duration_s, int(label)))
        except MalformedHeader as exc:
            raise MalformedLine(f"{path}:{lineno}: {exc}") from None
        except NegativeOnset as exc:
            raise NegativeOnset(f"{path}:{lineno}: {exc}") from None
    return result


def save_annotations(annotations: Sequence[Annotation], path) -> None:
    out = ["channel,onset_s,duration_s,label"]
    out.extend(f"{a.channel},{fmt(a.onset_s)},{fmt(a.duration_s)},{a.label}" for a in annotations)
    _write_text(path, "\n".join(out) + "\n")


# --- feature tables ------------------------------------------------------

FEATURE_COLUMNS = ("channel", "start_index", "mu", "sigma", "nu", "label")


@dataclass
class FeatureTable:
    """One row per fitted segment; ``labels`` entries are ``None`` when the
    segment is unlabeled."""

    channels: List[str] = field(default_factory=list)
    start_indices: List[int] = field(default_factory=list)
    features: List[Tuple[float, float, float]] = field(default_factory=list)
    labels: List[Optional[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.features)

    def append(self, channel, start_index, params, label=None):
        self.channels.append(channel)
        self.start_indices.append(int(start_index))
        self.features.append(tuple(float(v) for v in params))
        self.labels.append(None if label is None else validate_label(label))

    @property
    def is_labeled(self) -> bool:
        return len(self) > 0 and all(lab is not None for lab in self.labels)

    def matrix(self) -> np.ndarray:
        return np.array(self.features, dtype=float).reshape(len(self), 3)


def save_feature_table(table: FeatureTable, path) -> None:
    out = [",".join(FEATURE_COLUMNS)]
    for ch, start, (mu, sigma, nu), lab in zip(
        table.channels, table.start_indices, table.features, table.labels
    ):
        out.append(f"{ch},{start},{fmt(mu)},{fmt(sigma)},{fmt(nu)},{'' if lab is None else lab}")
    _write_text(path, "\n".join(out) + "\n")


def load_feature_table(path) -> FeatureTable:
    lines = _read_lines(path)
    if not lines or tuple(c.strip() for c in lines[0].split(",")) != FEATURE_COLUMNS:
        raise SchemaViolation(f"{path}: expected header {','.join(FEATURE_COLUMNS)}")
    table = FeatureTable()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(FEATURE_COLUMNS):
            raise SchemaViolation(f"{path}:{lineno}: expected {len(FEATURE_COLUMNS)} fields")
        try:
            params = [float(c) for c in cells[2:5]]
            start = int(cells[1])
        except ValueError:
            raise SchemaViolation(f"{path}:{lineno}: non-numeric field") from None
        if not all(math.isfinite(v) for v in params):
            raise SchemaViolation(f"{path}:{lineno}: non-finite feature")
        label = None
        if cells[5]:
            if cells[5] not in ("0", "1"):
                raise UnknownLabel(f"{path}:{lineno}: label must be 0 or 1, got {cells[5]!r}")
            label = int(cells[5])
        table.append(cells[0], start, params, label)
    return table


# --- models --------------------------------------------------------------

def save_model(dataset, scaling, hyper, path) -> None:
    """Write a trained classifier as a versioned JSON document.

    ``dataset`` is a :class:`swdknn.knn.LabeledDataset`, ``scaling`` a
    :class:`swdknn.knn.ScalingSpec` and ``hyper`` a
    :class:`swdknn.knn.KnnConfig`.
    """
    if dataset is None or len(dataset) == 0:
        raise EmptyDataset("refusing to save a model with no training vectors")
    doc = {
        "version": MODEL_VERSION,
        "scaling": {
            "mode": scaling.mode,
            "means": [float(v) for v in scaling.means],
            "stds": [float(v) for v in scaling.stds],
        },
        "k": int(hyper.k),
        "metric": hyper.metric,
        "vote": hyper.vote,
        "n_entries": len(dataset),
        "features": [[float(v) for v in row] for row in dataset.features],
        "labels": [int(v) for v in dataset.labels],
    }
    _write_text(path, json.dumps(doc, indent=1) + "\n")


def load_model(path):
    """Inverse of :func:`save_model`; returns ``(dataset, scaling, config)``."""
    from .knn import KnnConfig, LabeledDataset, ScalingSpec

    try:
        doc = json.loads("\n".join(_read_lines(path)))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"{path}: not a valid model document ({exc})") from None
    if not isinstance(doc, dict) or "version" not in doc:
        raise SchemaViolation(f"{path}: missing version tag")
    if doc["version"] != MODEL_VERSION:
        raise UnsupportedVersion(f"{path}: unsupported model version {doc['version']!r}")
    required = ("scaling", "k", "metric", "vote", "features", "labels")
    missing = [key for key in required if key not in doc]
    if missing:
        raise SchemaViolation(f"{path}: missing fields {missing}")
    try:
        sc = doc["scaling"]
        scaling = ScalingSpec(sc["mode"], tuple(sc["means"]), tuple(sc["stds"]))
        dataset = LabeledDataset(doc["features"], doc["labels"])
        config = KnnConfig(k=int(doc["k"]), metric=doc["metric"], vote=doc["vote"], scaling=scaling)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"{path}: {exc}") from None
    if doc.get("n_entries", len(dataset)) != len(dataset):
        raise SchemaViolation(f"{path}: n_entries does not match the stored vectors")
    return dataset, scaling, config
