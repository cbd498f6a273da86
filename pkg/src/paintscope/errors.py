"""Failure classes shared by the analysis modules."""


class AnalysisError(Exception):
    """Base class for per-painting analysis failures."""


class PreconditionError(AnalysisError):
    """A painting lacks the annotations an analysis requires."""


class NonPositiveSlopeError(AnalysisError):
    """Size gradient came out flat or inverted; no viewpoint height exists."""


class ZeroAnalyzableError(AnalysisError):
    """A batch run found nothing it could analyze.

    Carries the per-painting warnings collected before giving up, so
    callers can still surface why each painting was skipped.
    """

    def __init__(self, message: str, warnings: list[str] | tuple[str, ...] = ()):
        super().__init__(message)
        self.warnings = list(warnings)
