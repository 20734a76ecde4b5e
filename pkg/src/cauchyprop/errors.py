"""Exception hierarchy.

Validation errors (bad input, inconsistent configuration) derive from
``ValidationError``; failures of the numerics themselves derive from
``NumericalError``. The CLI maps the two families to exit codes 2 and 3.
"""

from __future__ import annotations


class CauchyPropError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CauchyPropError, ValueError):
    """Input data or configuration violates a precondition."""


class InvalidOrderError(ValidationError):
    pass


class InvalidResidueError(ValidationError):
    pass


class ConfigurationError(ValidationError):
    pass


class ProblemFormatError(ValidationError):
    """A problem file does not match the expected schema."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class MeanModeError(ValidationError):
    """A profile that must be zero-mean carries a nonzero k = 0 mode."""


class NumericalError(CauchyPropError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy result."""


class DegenerateSystemError(NumericalError):
    pass


class NonConvergenceError(NumericalError):
    def __init__(self, message: str, partial_sum, last_term: float, terms: int):
        self.partial_sum = partial_sum
        self.last_term = last_term
        self.terms = terms
        super().__init__(f"{message} (terms={terms}, last |term|={last_term:.3e})")


class KernelOverflowError(NumericalError):
    def __init__(self, branch: int, exponent: float):
        self.branch = branch
        self.exponent = exponent
        super().__init__(
            f"exponential branch n={branch} overflows: Re(exponent)={exponent:.6g} "
            "exceeds the floating-point range"
        )


class IllConditionedDecompositionError(NumericalError):
    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(
            f"eigenvector matrix condition {condition:.3e} is too large for the "
            "closed form; use the series path"
        )
