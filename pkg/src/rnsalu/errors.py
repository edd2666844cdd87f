"""Exception hierarchy shared by every module of the package."""


class RnsError(Exception):
    """Base class for all residue-arithmetic errors."""


class EmptyDomainError(RnsError, ValueError):
    """An argument describes an empty set (no primes, no digits)."""


class UnsupportedWidthError(RnsError, ValueError):
    """A digit width outside the supported range was requested."""


class NotCoprimeError(RnsError, ValueError):
    """Two moduli of a candidate system share a factor."""

    def __init__(self, first: int, second: int):
        super().__init__(f"moduli {first} and {second} are not coprime")
        self.pair = (first, second)


class SystemMismatchError(RnsError, ValueError):
    """Operands live in different residue systems or fractional splits."""


class RangeError(RnsError, ArithmeticError):
    """A value does not fit the signed range of the system."""


class BudgetError(RangeError):
    """A product sum would overflow the extended-format headroom."""

    def __init__(self, message: str, report=None, index=None):
        super().__init__(message)
        self.report = report
        self.index = index


class NonConvergenceError(RnsError, ArithmeticError):
    """An iterative solver failed to converge within its cap."""
