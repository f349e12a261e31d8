"""Shared exception types."""


class ArtifactError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatchError(ArtifactError):
    def __init__(self, msg, expected=None, got=None):
        super().__init__(msg)
        self.expected = expected
        self.got = got


class NonAnalyticError(ArtifactError):
    """A primitive was evaluated where it has no Taylor expansion (e.g. |x| at 0)."""


class SingularMatrixError(ArtifactError):
    pass


class JetOrderError(ArtifactError):
    """An operation needed more jet coefficients than were provisioned."""


class DivergenceError(ArtifactError):
    """A regularized limit failed to settle; carries the per-epsilon table."""

    def __init__(self, msg, table=None):
        super().__init__(msg)
        self.table = table or []


class AmbiguousCriticalPointsError(ArtifactError):
    def __init__(self, msg, points=None):
        super().__init__(msg)
        self.points = points or []


class ParameterError(ArtifactError):
    pass


class SummationError(ArtifactError):
    """An asymptotic sum could not be certified; carries the first failing truncation."""

    def __init__(self, msg, failed_at=None):
        super().__init__(msg)
        self.failed_at = failed_at
