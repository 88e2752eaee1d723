"""Exception hierarchy shared across the package."""


class FlatstabError(Exception):
    """Base class for all package-specific failures."""


class DimensionMismatch(FlatstabError):
    pass


class FieldMismatch(FlatstabError):
    pass


class DependentInput(FlatstabError):
    """Input vectors are linearly dependent below the rank threshold."""


class SliceDegenerate(FlatstabError):
    """The frame contains the lifting direction, so the affine slice is empty."""


class NumericalFailure(FlatstabError):
    """Certificate validation failed even after the exact-rational re-solve."""


class IterationLimit(FlatstabError):
    pass


class InvalidInput(FlatstabError):
    pass


class InvalidRange(FlatstabError):
    pass


class EmptySupport(FlatstabError):
    """A dependency tuple with all-zero coefficients was passed."""


class NotADependency(FlatstabError):
    """Coefficients fail the affine-dependency membership test."""


class NotATransversal(FlatstabError):
    pass


class NotDisjoint(FlatstabError):
    pass


class TooLarge(FlatstabError):
    pass


class ParseError(FlatstabError):
    pass


class InvariantViolation(FlatstabError):
    pass


class GenerationTimeout(FlatstabError):
    pass


class UnsupportedDimension(FlatstabError):
    pass


class AllProjectionsContainOrigin(FlatstabError):
    """Every projected set contains the origin: flat recovery applies instead."""
