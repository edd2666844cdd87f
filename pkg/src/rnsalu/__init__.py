"""Residue number system arithmetic: carry-free integers, fixed-point
fractions with O(p) normalization, delayed-normalization product sums, and
a digit-growth cost model."""

from .convert import (
    MixedRadix,
    Ordering,
    base_extend,
    compare,
    encode,
    forward_int,
    from_mixed_radix,
    reverse_int,
    sign,
    to_mixed_radix,
)
from .errors import (
    BudgetError,
    EmptyDomainError,
    NonConvergenceError,
    NotCoprimeError,
    RangeError,
    RnsError,
    SystemMismatchError,
    UnsupportedWidthError,
)
from .fraction import FracSplit, RnsFixed, denominator_count, forward_frac, reverse_frac, scale_by_f
from .linalg import FixedMatrix, dot_delayed, dot_sequential, matmul_delayed, range_budget_check
from .number_system import (
    RnsSystem,
    SystemMetrics,
    approx_digits,
    max_system_for_digit_width,
    metrics,
    natural_system,
    power_augmented_system,
    primes_below,
)
from .rns_int import RnsInt
from .steps import StepCounter

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "EmptyDomainError",
    "FixedMatrix",
    "FracSplit",
    "MixedRadix",
    "NonConvergenceError",
    "NotCoprimeError",
    "Ordering",
    "RangeError",
    "RnsError",
    "RnsFixed",
    "RnsInt",
    "RnsSystem",
    "StepCounter",
    "SystemMetrics",
    "SystemMismatchError",
    "UnsupportedWidthError",
    "approx_digits",
    "base_extend",
    "compare",
    "denominator_count",
    "dot_delayed",
    "dot_sequential",
    "encode",
    "forward_frac",
    "forward_int",
    "from_mixed_radix",
    "matmul_delayed",
    "max_system_for_digit_width",
    "metrics",
    "natural_system",
    "power_augmented_system",
    "primes_below",
    "range_budget_check",
    "reverse_frac",
    "reverse_int",
    "scale_by_f",
    "sign",
    "to_mixed_radix",
]
