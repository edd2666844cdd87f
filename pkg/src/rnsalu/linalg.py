"""Product sums with delayed normalization.

Payload products are formed and accumulated as plain residue integers, one
digit-step each, carrying a spare factor of ``F``.  Only the finished sum
is normalized, so every output element is rounded exactly once.  The sum
must stay inside the signed range.  :func:`range_budget_check` is the
uniform a-priori bound ``M * max**2``; the kernels themselves check the
exact ``sum |x_i y_i|`` of their operands before any work is done.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetError, SystemMismatchError
from .fraction import FracSplit, RnsFixed, forward_frac, mul as frac_mul, add as frac_add, scale_by_f
from .convert import reverse_int
from .rns_int import add as int_add, mul as int_mul
from .steps import StepCounter, measure


@dataclass(frozen=True)
class RangeBudget:
    """Outcome of a headroom check.

    ``required`` is ``terms * max_abs_input**2`` for the uniform a-priori
    bound, or the exact ``sum |x_i * y_i|`` when ``exact`` is set.
    """

    ok: bool
    terms: int
    max_abs_input: int
    required: int
    limit: int
    exact: bool = False

    @property
    def margin(self) -> int:
        return self.limit - self.required

    def __str__(self) -> str:
        rel = "<=" if self.ok else ">"
        lhs = f"sum of {self.terms} |x*y|" if self.exact else f"{self.terms} * {self.max_abs_input}^2"
        return f"{lhs} = {self.required} {rel} {self.limit}"


def range_budget_check(split: FracSplit, M: int, max_abs: int) -> RangeBudget:
    limit = split.system.max_abs
    required = M * max_abs * max_abs
    return RangeBudget(required <= limit, M, max_abs, required, limit)


class FixedMatrix:
    """Rectangular array of :class:`RnsFixed` values sharing one split."""

    def __init__(self, rows: Sequence[Sequence[RnsFixed]]):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must have positive dimensions")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        split = rows[0][0].split
        for r in rows:
            for x in r:
                if x.split != split:
                    raise SystemMismatchError("matrix elements use different splits")
        self.rows = rows
        self.split = split

    @classmethod
    def from_values(cls, values, split: FracSplit) -> "FixedMatrix":
        return cls([[forward_frac(v, split) for v in row] for row in values])

    @classmethod
    def from_payloads(cls, payloads, split: FracSplit) -> "FixedMatrix":
        return cls([[split.fixed(int(k)) for k in row] for row in payloads])

    @classmethod
    def identity(cls, n: int, split: FracSplit) -> "FixedMatrix":
        return cls.from_payloads([[split.F if i == j else 0 for j in range(n)] for i in range(n)], split)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def row(self, i: int) -> list[RnsFixed]:
        return self.rows[i]

    def col(self, j: int) -> list[RnsFixed]:
        return [r[j] for r in self.rows]

    def payloads(self) -> list[list[int]]:
        return [[reverse_int(x.payload) for x in r] for r in self.rows]

    def to_fractions(self) -> list[list[Fraction]]:
        F = self.split.F
        return [[Fraction(k, F) for k in r] for r in self.payloads()]


def _check_vectors(x: Sequence[RnsFixed], y: Sequence[RnsFixed]) -> FracSplit:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if not x:
        raise ValueError("empty vectors")
    split = x[0].split
    for v in (*x, *y):
        if v.split != split:
            raise SystemMismatchError("vector elements use different splits")
    return split


def exact_budget(split: FracSplit, x: Sequence[RnsFixed], y: Sequence[RnsFixed]) -> RangeBudget:
    """Headroom for one specific product sum.

    Every partial sum is bounded by ``sum |x_i y_i|``, so this is the
    tightest condition that rules out wraparound; it admits vectors that the
    uniform ``M * max**2`` bound rejects.
    """
    px = [abs(reverse_int(v.payload)) for v in x]
    py = [abs(reverse_int(v.payload)) for v in y]
    required = sum(a * b for a, b in zip(px, py))
    limit = split.system.max_abs
    return RangeBudget(required <= limit, len(x), max(px + py), required, limit, exact=True)


def _budget(split: FracSplit, x, y, index=None) -> RangeBudget:
    report = exact_budget(split, x, y)
    if not report.ok:
        where = "" if index is None else f" at element {index}"
        raise BudgetError(f"product sum overflows{where}: {report}", report, index)
    return report


def dot_delayed(
    x: Sequence[RnsFixed],
    y: Sequence[RnsFixed],
    counter: StepCounter | None = None,
    *,
    check: bool = True,
) -> RnsFixed:
    """Dot product with one normalization: ``round_half_away(F * sum x_i y_i) / F``.

    ``2M - 1`` single-step integer operations plus one ``scale_by_f``.
    """
    split = _check_vectors(x, y)
    if check:
        _budget(split, x, y)
    with measure(counter, "dot_delayed"):
        acc = int_mul(x[0].payload, y[0].payload, counter)
        for a, b in zip(x[1:], y[1:]):
            acc = int_add(acc, int_mul(a.payload, b.payload, counter), counter)
        return scale_by_f(acc, split, counter)


def dot_sequential(
    x: Sequence[RnsFixed],
    y: Sequence[RnsFixed],
    counter: StepCounter | None = None,
) -> RnsFixed:
    """Baseline that rounds every product, as a per-MAC rounding pipeline would."""
    split = _check_vectors(x, y)
    _budget(split, x, y)
    with measure(counter, "dot_sequential"):
        acc = frac_mul(x[0], y[0], counter)
        for a, b in zip(x[1:], y[1:]):
            acc = frac_add(acc, frac_mul(a, b, counter), counter)
        return acc


def matmul_delayed(A: FixedMatrix, B: FixedMatrix, counter: StepCounter | None = None) -> FixedMatrix:
    """Matrix product with one normalization per output element."""
    n, k = A.shape
    k2, m = B.shape
    if k != k2:
        raise ValueError(f"shapes {A.shape} and {B.shape} are not conformable")
    if A.split != B.split:
        raise SystemMismatchError("matrices use different splits")
    cols = [B.col(j) for j in range(m)]
    for i in range(n):
        for j in range(m):
            _budget(A.split, A.row(i), cols[j], index=(i, j))
    with measure(counter, "matmul_delayed"):
        out = [[dot_delayed(A.row(i), cols[j], counter, check=False) for j in range(m)] for i in range(n)]
    return FixedMatrix(out)


def matmul_sequential(A: FixedMatrix, B: FixedMatrix, counter: StepCounter | None = None) -> FixedMatrix:
    n, _ = A.shape
    _, m = B.shape
    cols = [B.col(j) for j in range(m)]
    return FixedMatrix([[dot_sequential(A.row(i), cols[j], counter) for j in range(m)] for i in range(n)])
