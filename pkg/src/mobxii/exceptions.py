"""Exception types raised by the package."""


class ParameterError(ValueError):
    """A distribution or model parameter lies outside its admissible domain."""


class DomainError(ValueError):
    """A function argument lies outside the function's domain."""


class DegenerateSeriesError(ArithmeticError):
    """A power-series recursion cannot proceed (zero or invalid leading term)."""


class InfiniteMomentError(ArithmeticError):
    """The requested moment does not exist (the defining integral diverges)."""


class HessianError(ArithmeticError):
    """Finite-difference Hessian produced non-finite entries."""


class OptimizerInitError(ValueError):
    """The objective is not finite at the optimizer's starting point."""
