"""Exception hierarchy.

The CLI maps :class:`InputError` to exit code 2 and :class:`NumericError`
to exit code 3.
"""


class ErpInfoError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ErpInfoError, ValueError):
    """Malformed or inconsistent input (shapes, labels, parameters)."""


class DegenerateInputError(InputError):
    """Input is valid in form but sits on a degenerate case of the method."""


class UnsupportedDimensionError(InputError):
    """The requested method cannot be applied at this dimensionality."""


class EstimationError(InputError):
    """Not enough data to estimate the requested quantity."""


class NumericError(ErpInfoError, ArithmeticError):
    """A numerical step failed (non-SPD matrix, non-finite result)."""


class ResourceError(ErpInfoError, RuntimeError):
    """A configured resource cap (e.g. component count) would be exceeded."""
