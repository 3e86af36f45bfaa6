class InvalidStateError(ValueError):
    """A matrix or vector fails the density-matrix / ket invariants."""


class NumericalIntegrityError(ArithmeticError):
    """Accumulated floating-point drift exceeded the allowed slack."""


class ConvergenceError(ArithmeticError):
    """An iterative routine ran out of its iteration budget."""
