"""Exception types shared across the package.

Every error raised on purpose derives from VariantAnalysisError so the CLI
can render any of them as a one-line diagnostic and exit with status 1.
"""


class VariantAnalysisError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(VariantAnalysisError):
    """A numeric input violates its documented domain (sign, range, finiteness)."""


class DegenerateGeometry(VariantAnalysisError):
    """The curve radius or steering configuration has no valid geometry."""


class InvalidGear(VariantAnalysisError):
    """A gear index addresses an absent gear slot or is out of range."""


class ZeroFrictionLimit(VariantAnalysisError):
    """Friction-circle utilization is undefined for a zero friction limit."""


class EmptyCatalog(VariantAnalysisError):
    """An operation that needs at least one variant got an empty catalog."""


class NoFeasiblePoint(VariantAnalysisError):
    """Every sampled parameter combination of a search box was invalid."""


class SingularSystem(VariantAnalysisError):
    """The assembled force-balance system is numerically singular."""


class ParseError(VariantAnalysisError):
    """Malformed input syntax. Carries line/column when the format has them."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(VariantAnalysisError):
    """Well-formed input whose content violates an invariant."""


class DuplicateName(ValidationError):
    """Two catalog variants share the same name."""
