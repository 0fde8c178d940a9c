"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input is outside the domain an operation accepts."""


class NormalizationError(DomainError):
    """State amplitudes do not satisfy the unit-norm constraint."""


class NumericalError(ArithmeticError):
    """A numerical residue exceeded its tolerance (likely bad input)."""


class ConvergenceWarning(UserWarning):
    """Fewer than two optimizer restarts agreed on the best value."""
