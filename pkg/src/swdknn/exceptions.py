"""Exception hierarchy for swdknn.

Every error raised by the package derives from :class:`SwdError`. Input
problems additionally derive from :class:`ValueError` (or
:class:`FileNotFoundError` / :class:`OSError` for file-system issues) so
callers can catch them with the builtin they already expect.
"""

from __future__ import annotations


class SwdError(Exception):
    """Base class for all package errors."""


# signal_io
class MissingFile(SwdError, FileNotFoundError):
    pass


class IoFailure(SwdError, OSError):
    pass


class MalformedHeader(SwdError, ValueError):
    pass


class NonNumericSample(SwdError, ValueError):
    def __init__(self, row: int, column: int, text: str):
        super().__init__(f"non-numeric sample {text!r} at data row {row}, column {column}")
        self.row = row
        self.column = column


class InconsistentRowWidth(SwdError, ValueError):
    pass


class NonPositiveSampleRate(SwdError, ValueError):
    pass


class MalformedLine(SwdError, ValueError):
    pass


class UnknownLabel(SwdError, ValueError):
    pass


class NegativeOnset(SwdError, ValueError):
    pass


class EmptyDataset(SwdError, ValueError):
    pass


class UnsupportedVersion(SwdError, ValueError):
    pass


class SchemaViolation(SwdError, ValueError):
    pass


# windowing
class UnknownChannel(SwdError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class WindowLargerThanSignal(SwdError, ValueError):
    pass


# tls_model
class InvalidParams(SwdError, ValueError):
    pass


class EmptySample(SwdError, ValueError):
    pass


class DegenerateSample(SwdError, ValueError):
    pass


class NotConverged(SwdError, RuntimeError):
    """Raised by ``fit_mle`` when the simplex hits its iteration cap.

    The best point found so far is kept on ``report`` (``converged=False``).
    """

    def __init__(self, report):
        super().__init__(
            f"simplex search did not converge within {report.iterations} iterations"
        )
        self.report = report


# optimizer
class NonFiniteObjective(SwdError, ValueError):
    pass


# knn
class KTooLarge(SwdError, ValueError):
    pass


class NonFiniteQuery(SwdError, ValueError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ZeroVarianceDimension(SwdError, ValueError):
    pass


# metrics
class LengthMismatch(SwdError, ValueError):
    pass


class EmptyInput(SwdError, ValueError):
    pass


# synth
class OverlappingEvents(SwdError, ValueError):
    pass


class EventOutOfRange(SwdError, ValueError):
    pass
