"""Non-overlapping rectangular segmentation and segment labeling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .exceptions import WindowLargerThanSignal
from .signal_io import Annotation, Recording

MIN_WINDOW = 8


@dataclass(frozen=True)
class WindowSpec:
    window_len_samples: int = 256

    def __post_init__(self):
        w = self.window_len_samples
        if isinstance(w, bool) or int(w) != w or w < MIN_WINDOW:
            raise ValueError(f"window length must be an integer >= {MIN_WINDOW}, got {w!r}")


@dataclass(frozen=True, eq=False)
class Segment:
    channel: str
    start_index: int
    samples: np.ndarray

    def __len__(self) -> int:
        return len(self.samples)


def segment_channel(recording: Recording, channel: str, spec: WindowSpec) -> List[Segment]:
    """Tile one channel into ``N // W`` windows ``[i*W, (i+1)*W)``.

    The ragged tail (fewer than ``W`` samples) is dropped. Segment samples
    are read-only views into the recording.
    """
    x = recording.channel(channel)
    w = int(spec.window_len_samples)
    n = x.shape[0]
    if w > n:
        raise WindowLargerThanSignal(
            f"window of {w} samples is longer than channel {channel!r} ({n} samples)"
        )
    return [Segment(channel, i * w, x[i * w:(i + 1) * w]) for i in range(n // w)]


def coverage_fraction(segment: Segment, annotations: Sequence[Annotation],
                      sample_rate_hz: float) -> float:
    """Fraction of the segment's time span covered by label-1 annotations
    on the segment's channel (overlapping annotations are merged first)."""
    t0 = segment.start_index / sample_rate_hz
    t1 = (segment.start_index + len(segment)) / sample_rate_hz
    spans = sorted(
        (max(a.onset_s, t0), min(a.end_s, t1))
        for a in annotations
        if a.label == 1 and a.channel == segment.channel
    )
    covered = 0.0
    cur_lo = cur_hi = None
    for lo, hi in spans:
        if hi <= lo:
            continue
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                covered += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        covered += cur_hi - cur_lo
    return covered / (t1 - t0)


def label_segment(segment: Segment, annotations: Sequence[Annotation],
                  sample_rate_hz: float, overlap_threshold: float = 0.5) -> int:
    """1 if label-1 annotations cover at least ``overlap_threshold`` of the
    segment, else 0."""
    if not 0 < overlap_threshold <= 1:
        raise ValueError(f"overlap_threshold must lie in (0, 1], got {overlap_threshold!r}")
    frac = coverage_fraction(segment, annotations, sample_rate_hz)
    # absorb rounding from converting sample indices to seconds
    return int(frac >= overlap_threshold - 1e-12)


def concat_segments(segments: Sequence[Segment]) -> np.ndarray:
    if not segments:
        return np.empty(0)
    return np.concatenate([s.samples for s in segments])
