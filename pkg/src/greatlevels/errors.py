"""Exception types shared by the package.

Errors that describe bad input (files, parameters, degenerate geometry)
derive from :class:`InputError`; the CLI maps those to exit status 2.
"""


class InputError(Exception):
    """Base class for errors caused by unusable input."""


class ParseError(InputError):
    """An arrangement file could not be read."""


class DegeneracyError(InputError):
    """The arrangement is not simple within tolerance."""


# vertex_pair reports rank deficiency under this name
DegenerateError = DegeneracyError


class BuildError(InputError):
    """The arrangement graph cannot be built (e.g. fewer than two circles)."""


class OnCircleError(InputError):
    """A point lies on a circle where a strict side is required."""


class OnEquatorError(InputError):
    """A point on the equator has no central projection."""


class PreconditionError(InputError):
    """An operation was called outside its domain."""


class RangeError(InputError):
    """A level index lies outside the range where the bounds apply."""


class BudgetError(InputError):
    """A Monte Carlo run would exceed the configured operation budget."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
