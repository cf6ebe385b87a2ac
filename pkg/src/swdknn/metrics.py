"""Binary confusion matrix and the rates derived from it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .exceptions import EmptyInput, LengthMismatch
from .signal_io import validate_label


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


class Rates(NamedTuple):
    """``sensitivity``/``specificity`` are ``None`` when undefined (no
    positive, respectively no negative, ground truth)."""

    accuracy: float
    sensitivity: Optional[float]
    specificity: Optional[float]


def confusion(predicted: Sequence[int], actual: Sequence[int]) -> ConfusionMatrix:
    predicted, actual = list(predicted), list(actual)
    if len(predicted) != len(actual):
        raise LengthMismatch(f"{len(predicted)} predictions but {len(actual)} true labels")
    if not predicted:
        raise EmptyInput("nothing to evaluate")
    tp = tn = fp = fn = 0
    for p, a in zip(predicted, actual):
        p, a = validate_label(p), validate_label(a)
        if p == 1 and a == 1:
            tp += 1
        elif p == 0 and a == 0:
            tn += 1
        elif p == 1:
            fp += 1
        else:
            fn += 1
    return ConfusionMatrix(tp, tn, fp, fn)


def rates(cm: ConfusionMatrix) -> Rates:
    if cm.total < 1:
        raise EmptyInput("confusion matrix is empty")
    pos = cm.tp + cm.fn
    neg = cm.tn + cm.fp
    return Rates(
        accuracy=(cm.tp + cm.tn) / cm.total,
        sensitivity=cm.tp / pos if pos else None,
        specificity=cm.tn / neg if neg else None,
    )
