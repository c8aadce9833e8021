"""Exception types raised across the package."""

__all__ = [
    "TwistSigError", "TruncationError", "LatticeError", "NonInvertibleError",
    "DivergentProductError", "InconsistencyError", "ShapeMismatchError", "SchemaError",
]


class TwistSigError(ValueError):
    """Base class for domain errors."""


class TruncationError(TwistSigError):
    """A coefficient was requested at or beyond the certified truncation order."""


class LatticeError(TwistSigError):
    """An exponent does not lie on the series' exponent lattice."""


class NonInvertibleError(TwistSigError, ZeroDivisionError):
    """Inversion of an element whose constant term vanishes."""


class DivergentProductError(TwistSigError):
    """An infinite product has a factor that is not of the form 1 + O(q^{>0})."""


class InconsistencyError(TwistSigError):
    """Two independent constructions of the same object disagree."""


class ShapeMismatchError(TwistSigError):
    """Operands live over different product shapes."""


class SchemaError(TwistSigError):
    """A manifold document or table violates the data model."""
