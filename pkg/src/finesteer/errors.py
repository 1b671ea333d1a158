"""Exception hierarchy."""


class FinesteerError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(FinesteerError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateConditionError(FinesteerError, ArithmeticError):
    """Conditioning on an event whose probability is (numerically) zero."""

    def __init__(self, message, probability=None):
        super().__init__(message)
        self.probability = probability


class NumericalFailureError(FinesteerError, ArithmeticError):
    """An objective produced a non-finite value."""

    def __init__(self, message, angles=None):
        super().__init__(message)
        self.angles = angles
