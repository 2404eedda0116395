"""Exception types raised by the solvers and the harness."""


class DimensionError(ValueError):
    """Operand shapes are inconsistent."""


class ParameterError(ValueError):
    """A scalar parameter is outside its valid range."""


class SpecError(ValueError):
    """An instance or experiment specification violates its invariants."""


class NumericError(ArithmeticError):
    """A factorization or least-squares subproblem could not be solved."""


class DivergenceError(NumericError):
    """A solver iterate became non-finite."""

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at iteration {iteration}")
