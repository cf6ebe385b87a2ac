"""Exhaustive k-nearest-neighbors classification of 3-D feature vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .exceptions import (
    EmptyDataset,
    KTooLarge,
    NonFiniteQuery,
    ZeroVarianceDimension,
)
from .signal_io import validate_label

SCALING_MODES = ("none", "zscore")
METRICS = ("euclidean",)
VOTES = ("equal_weight",)
N_FEATURES = 3


@dataclass(frozen=True)
class ScalingSpec:
    mode: str = "none"
    means: Tuple[float, ...] = ()
    stds: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.mode not in SCALING_MODES:
            raise ValueError(f"unknown scaling mode {self.mode!r}")
        object.__setattr__(self, "means", tuple(float(v) for v in self.means))
        object.__setattr__(self, "stds", tuple(float(v) for v in self.stds))
        if self.mode == "zscore":
            if len(self.means) != N_FEATURES or len(self.stds) != N_FEATURES:
                raise ValueError("zscore scaling needs one mean and one std per feature")
            if not all(s > 0 for s in self.stds):
                raise ZeroVarianceDimension("zscore standard deviations must be positive")

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.mode == "none":
            return x
        return (x - np.array(self.means)) / np.array(self.stds)


@dataclass(frozen=True)
class KnnConfig:
    k: int = 1
    metric: str = "euclidean"
    vote: str = "equal_weight"
    scaling: ScalingSpec = field(default_factory=ScalingSpec)

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if self.metric not in METRICS:
            raise ValueError(f"unsupported metric {self.metric!r}")
        if self.vote not in VOTES:
            raise ValueError(f"unsupported vote {self.vote!r}")


class LabeledDataset:
    """Training vectors with binary labels. Immutable once built."""

    def __init__(self, features, labels):
        feats = np.array(features, dtype=float)
        if feats.size == 0:
            raise EmptyDataset("a labeled dataset needs at least one vector")
        if feats.ndim != 2 or feats.shape[1] != N_FEATURES:
            raise ValueError(f"features must be an (n, {N_FEATURES}) array, got shape {feats.shape}")
        if not np.all(np.isfinite(feats)):
            raise ValueError("features must be finite")
        labs = np.array([validate_label(v) for v in labels], dtype=np.int64)
        if labs.shape[0] != feats.shape[0]:
            raise ValueError(f"{feats.shape[0]} feature vectors but {labs.shape[0]} labels")
        feats.setflags(write=False)
        labs.setflags(write=False)
        self._features = feats
        self._labels = labs

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    def __len__(self) -> int:
        return self._features.shape[0]

    def __eq__(self, other):
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (np.array_equal(self._features, other._features)
                and np.array_equal(self._labels, other._labels))

    def class_counts(self) -> dict:
        return {lab: int(np.sum(self._labels == lab)) for lab in (0, 1)}


@dataclass(frozen=True)
class Prediction:
    label: int
    neighbor_indices: Tuple[int, ...]
    neighbor_distances: Tuple[float, ...]


def fit_scaling(features, mode: str = "none") -> ScalingSpec:
    """Scaling statistics from training features only.

    ``zscore`` uses the sample standard deviation (``ddof=1``).
    """
    if mode not in SCALING_MODES:
        raise ValueError(f"unknown scaling mode {mode!r}")
    x = np.asarray(features, dtype=float)
    if x.size == 0:
        raise EmptyDataset("cannot fit scaling on an empty feature set")
    if mode == "none":
        return ScalingSpec()
    if x.shape[0] < 2:
        raise ZeroVarianceDimension("zscore needs at least two vectors")
    stds = x.std(axis=0, ddof=1)
    if np.any(stds <= 0):
        dims = [int(i) for i in np.flatnonzero(stds <= 0)]
        raise ZeroVarianceDimension(f"feature dimension(s) {dims} are constant")
    return ScalingSpec("zscore", tuple(x.mean(axis=0)), tuple(stds))


def _distances(q: np.ndarray, train: np.ndarray) -> np.ndarray:
    diff = train - q
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _vote(labels: np.ndarray) -> int:
    counts = np.bincount(labels, minlength=2)
    if counts[0] == counts[1]:
        return int(labels[0])
    return int(np.argmax(counts))


def _predict(q: np.ndarray, train: np.ndarray, labels: np.ndarray, k: int) -> Prediction:
    d = _distances(q, train)
    # stable sort: equal distances keep ascending training index
    idx = np.argsort(d, kind="stable")[:k]
    return Prediction(
        label=_vote(labels[idx]),
        neighbor_indices=tuple(int(i) for i in idx),
        neighbor_distances=tuple(float(v) for v in d[idx]),
    )


def _prepare(dataset: LabeledDataset, config: KnnConfig):
    if len(dataset) == 0:
        raise EmptyDataset("cannot classify against an empty dataset")
    if config.k > len(dataset):
        raise KTooLarge(f"k={config.k} exceeds the {len(dataset)} stored vectors")
    return config.scaling.apply(dataset.features)


def _query_vector(query, index=None) -> np.ndarray:
    q = np.asarray(query, dtype=float).ravel()
    where = "" if index is None else f" (query {index})"
    if q.shape != (N_FEATURES,):
        raise ValueError(f"query must have {N_FEATURES} components, got {q.shape}{where}")
    if not np.all(np.isfinite(q)):
        raise NonFiniteQuery(f"query has non-finite components{where}", index)
    return q


def classify(query, dataset: LabeledDataset, config: KnnConfig = KnnConfig()) -> Prediction:
    """Majority label among the ``k`` nearest stored vectors.

    Distance ties go to the lower training index; a tied vote goes to the
    label of the single nearest neighbor.
    """
    train = _prepare(dataset, config)
    q = config.scaling.apply(_query_vector(query))
    return _predict(q, train, dataset.labels, config.k)


def classify_batch(queries: Sequence, dataset: LabeledDataset,
                   config: KnnConfig = KnnConfig()) -> List[Prediction]:
    queries = list(queries)
    if not queries:
        return []
    train = _prepare(dataset, config)
    qs = [config.scaling.apply(_query_vector(q, i)) for i, q in enumerate(queries)]
    return [_predict(q, train, dataset.labels, config.k) for q in qs]
