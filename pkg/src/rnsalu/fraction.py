"""Fixed-point fractions in residue form.

A subset of the moduli is designated *fractional*; their product ``F`` is
the fractional range.  A value ``x`` is stored as the integer payload
``round(x * F)`` over the full system, so the unit in the last place is
``1/F``.  Addition, subtraction and scaling by an integer act on payloads
directly (one digit-step, exact).  A fraction-by-fraction product carries a
spare factor of ``F`` which :func:`scale_by_f` removes in ``O(p)`` steps
with a single round-half-away-from-zero.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from .convert import extend_mixed_radix, forward_int, lex_cmp, mrc_digits, reverse_int, compare, Ordering
from .errors import NonConvergenceError, RangeError, SystemMismatchError
from .number_system import RnsSystem, mixed_radix_digits
from .rns_int import RnsInt, add as int_add, is_zero, mul as int_mul, mul_small, neg as int_neg, sub as int_sub
from .steps import StepCounter, measure, tick

Rational = Union[Fraction, int, str, float]


def round_half_away(x: Fraction) -> int:
    """Nearest integer, ties away from zero."""
    x = Fraction(x)
    n = (abs(x.numerator) * 2 + x.denominator) // (2 * x.denominator)
    return n if x >= 0 else -n


def parse_value(x: Rational) -> Fraction:
    """Exact rational from an int, Fraction, float or a ``"-1.25"`` / ``"3/4"`` string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {x!r} as a rational") from exc
    return Fraction(x)


def format_decimal(x: Fraction, places: int = 10) -> str:
    """Decimal rendering with round-half-away at ``places`` digits."""
    scaled = round_half_away(Fraction(x) * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FracSplit:
    """Partition of a system's moduli into fractional and whole sets.

    ``ordered`` is the same system with the fractional moduli first; a
    mixed-radix expansion in that order yields ``X mod F`` in its low
    digits and ``X // F`` in its high digits.
    """

    def __init__(self, system: RnsSystem, fractional_moduli: Iterable[int]):
        frac = tuple(int(m) for m in fractional_moduli)
        if not frac:
            raise ValueError("at least one fractional modulus is required")
        if len(set(frac)) != len(frac) or not set(frac) <= set(system.moduli):
            raise ValueError(f"fractional moduli {list(frac)} must be distinct members of {system!r}")
        self.system = system
        self.fractional_moduli = frac
        self.whole_moduli = tuple(m for m in system.moduli if m not in frac)
        self.p_f = len(frac)
        self.F = math.prod(frac)
        self.W = math.prod(self.whole_moduli)
        self.ordered = RnsSystem(frac + self.whole_moduli)
        self._perm = tuple(system.index_of(m) for m in self.ordered.moduli)
        half_f = (self.F + 1) // 2
        self._round_up = mixed_radix_digits(half_f, frac)
        self._round_up_neg = mixed_radix_digits(half_f - 1, frac)

    @classmethod
    def for_precision(cls, system: RnsSystem, min_F: int) -> "FracSplit":
        """Assign the largest moduli to the fractional set until ``F >= min_F``."""
        chosen, F = [], 1
        for m in sorted(system.moduli, reverse=True):
            if F >= min_F:
                break
            chosen.append(m)
            F *= m
        if F < min_F:
            raise ValueError(f"system range {system.R} cannot hold F >= {min_F}")
        keep = set(chosen)
        return cls(system, [m for m in system.moduli if m in keep])

    def __repr__(self) -> str:
        return f"FracSplit(F={self.F}, fractional={list(self.fractional_moduli)}, p={self.system.p})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FracSplit)
            and self.system == other.system
            and set(self.fractional_moduli) == set(other.fractional_moduli)
        )

    def __hash__(self) -> int:
        return hash((self.system, frozenset(self.fractional_moduli)))

    @property
    def ulp(self) -> Fraction:
        return Fraction(1, self.F)

    @property
    def max_value(self) -> Fraction:
        return Fraction(self.system.max_abs, self.F)

    def fixed(self, payload: int) -> "RnsFixed":
        """Fixed-point value ``payload / F`` (payload is reduced modulo R)."""
        return RnsFixed(RnsInt.from_int(self.system, payload), self)

    def one(self) -> "RnsFixed":
        return self.fixed(self.F)

    def zero(self) -> "RnsFixed":
        return self.fixed(0)


class RnsFixed:
    """Fixed-point fraction: signed payload over the full system divided by ``F``."""

    __slots__ = ("payload", "split")

    def __init__(self, payload: RnsInt, split: FracSplit):
        if payload.system != split.system:
            raise SystemMismatchError("payload and split use different systems")
        self.payload = payload
        self.split = split

    @property
    def value(self) -> Fraction:
        return reverse_frac(self)

    def __repr__(self) -> str:
        return f"RnsFixed({self.value}, F={self.split.F})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RnsFixed):
            return NotImplemented
        return self.split == other.split and self.payload.digits == other.payload.digits

    def __hash__(self) -> int:
        return hash((self.split, self.payload.digits))

    def __add__(self, other: "RnsFixed") -> "RnsFixed":
        return add(self, other)

    def __sub__(self, other: "RnsFixed") -> "RnsFixed":
        return sub(self, other)

    def __neg__(self) -> "RnsFixed":
        return RnsFixed(int_neg(self.payload), self.split)

    def __mul__(self, other):
        if isinstance(other, (int, RnsInt)):
            return mul_int(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        return mul_int(self, other)

    def __truediv__(self, other: "RnsFixed") -> "RnsFixed":
        return div(self, other)


def _same_split(a: RnsFixed, b: RnsFixed) -> FracSplit:
    if a.split is not b.split and a.split != b.split:
        raise SystemMismatchError(f"{a.split!r} vs {b.split!r}")
    return a.split


def forward_frac(x: Rational, split: FracSplit, counter: StepCounter | None = None) -> RnsFixed:
    """Rational or decimal string to fixed point; exact when ``x * F`` is an integer."""
    k = round_half_away(parse_value(x) * split.F)
    if abs(k) > split.system.max_abs:
        raise RangeError(f"{x} is outside +/-{split.max_value}")
    with measure(counter, "forward_frac"):
        return RnsFixed(forward_int(k, split.system, counter), split)


def reverse_frac(a: RnsFixed, counter: StepCounter | None = None) -> Fraction:
    with measure(counter, "reverse_frac"):
        return Fraction(reverse_int(a.payload, counter), a.split.F)


def to_decimal(a: RnsFixed, places: int = 10) -> str:
    return format_decimal(reverse_frac(a), places)


def add(a: RnsFixed, b: RnsFixed, counter: StepCounter | None = None) -> RnsFixed:
    split = _same_split(a, b)
    return RnsFixed(int_add(a.payload, b.payload, counter), split)


def sub(a: RnsFixed, b: RnsFixed, counter: StepCounter | None = None) -> RnsFixed:
    split = _same_split(a, b)
    return RnsFixed(int_sub(a.payload, b.payload, counter), split)


def mul_int(a: RnsFixed, k: int | RnsInt, counter: StepCounter | None = None) -> RnsFixed:
    """Fraction times integer: one digit-step, exact, overflow wraps."""
    if isinstance(k, RnsInt):
        return RnsFixed(int_mul(a.payload, k, counter), a.split)
    return RnsFixed(mul_small(a.payload, int(k), counter), a.split)


def scale_by_f(z: RnsInt, split: FracSplit, counter: StepCounter | None = None) -> RnsFixed:
    """Normalize an extended-format integer: ``round_half_away(Z / F)``.

    One mixed-radix pass over the fractional-first ordering gives the sign
    of ``Z``, the remainder digits and the quotient digits together
    (``p`` steps).  For negative ``Z`` the digit complement ``m_i - 1 - d_i``
    is the expansion of ``|Z| - 1``, so no second pass is needed.  The
    quotient is re-expanded over every modulus (``p_w - 1`` steps) and the
    rounding increment and sign are applied in one fused step: at most
    ``2p - 1`` steps in all.
    """
    if z.system != split.system:
        raise SystemMismatchError("value and split use different systems")
    ordered = split.ordered
    with measure(counter, "normalize"):
        digits = [z.digits[i] for i in split._perm]
        mr = mrc_digits(ordered, digits, counter)
        negative = lex_cmp(mr, ordered.half_mr) >= 0
        if negative:
            mr = tuple(m - 1 - d for m, d in zip(ordered.moduli, mr))
            threshold = split._round_up_neg
        else:
            threshold = split._round_up
        pf = split.p_f
        bump = 1 if lex_cmp(mr[:pf], threshold) >= 0 else 0
        q = extend_mixed_radix(mr[pf:], ordered.moduli[pf:], split.system, counter)
        s = -1 if negative else 1
        tick(counter)
        out = tuple((s * (x + bump)) % m for x, m in zip(q, split.system.moduli))
        if counter is not None:
            counter.normalizations += 1
        return RnsFixed(RnsInt._raw(split.system, out), split)


def mul(a: RnsFixed, b: RnsFixed, counter: StepCounter | None = None) -> RnsFixed:
    """Fraction product: integer product of payloads, then one normalization.

    Requires ``|X * Y| <= (R-1)/2`` for the payload product; the result is
    within ``1/(2F)`` of the exact product.
    """
    split = _same_split(a, b)
    with measure(counter, "frac_mul"):
        return scale_by_f(int_mul(a.payload, b.payload, counter), split, counter)


def _division_headroom(split: FracSplit, A: int, B: int, S: int) -> int:
    """Largest intermediate payload magnitude the division will produce."""
    F = split.F
    q_max = -(-abs(A) * F // B) + 1
    return max(
        abs(A) * S,
        B * S,
        3 * F * F,
        2 * (q_max + 1) * F * F,
        2 * (abs(A) * F + (q_max + 2) * B),
    )


def iteration_cap(split: FracSplit) -> int:
    return math.ceil(math.log2(split.F.bit_length())) + 2


def goldschmidt_divide(
    a: RnsFixed,
    b: RnsFixed,
    counter: StepCounter | None = None,
    *,
    correct: bool = True,
) -> tuple[RnsFixed, int]:
    """Goldschmidt quotient ``a / b`` and the number of refinement iterations.

    The seed is ``F^2 / e`` where ``e`` keeps only the two leading nonzero
    mixed-radix digits of ``|B|``, so ``b * seed`` starts in ``[1, 1.5]``.
    Each iteration multiplies numerator and denominator by ``2 - D`` until
    ``D`` is within one ulp of one.  With ``correct`` the estimate is then
    fixed up with the exact residual ``A F - Q B`` so the result is the
    correctly rounded quotient.
    """
    split = _same_split(a, b)
    system = split.system
    F = split.F
    if is_zero(b.payload):
        raise ZeroDivisionError("fractional division by zero")
    with measure(counter, "frac_div"):
        mr = mrc_digits(system, b.payload.digits, counter)
        negative = lex_cmp(mr, system.half_mr) >= 0
        bmag = b.payload
        if negative:
            bmag = int_neg(b.payload, counter)
            mr = mrc_digits(system, bmag.digits, counter)

        top = max(i for i, d in enumerate(mr) if d)
        w = system.weights
        est = mr[top] * w[top] + (mr[top - 1] * w[top - 1] if top else 0)
        S = round_half_away(Fraction(F * F, est))

        A = reverse_int(a.payload)
        B = reverse_int(bmag)
        if abs(A) * F > system.max_abs * B:
            raise RangeError("quotient overflows the representable range")
        if _division_headroom(split, A, B, S) > system.max_abs:
            raise RangeError("system range lacks the headroom for this division")

        seed = RnsFixed(forward_int(S, system, counter), split)
        bfix = RnsFixed(bmag, split)
        one = split.one()
        two = split.fixed(2 * F)
        near_one = {one.payload.digits, split.fixed(F + 1).payload.digits, split.fixed(F - 1).payload.digits}

        N = mul(a, seed, counter)
        D = mul(bfix, seed, counter)
        iterations = 0
        cap = iteration_cap(split)
        while D.payload.digits not in near_one and iterations < cap:
            f = sub(two, D, counter)
            N = mul(N, f, counter)
            D = mul(D, f, counter)
            iterations += 1

        q = N.payload
        if correct:
            q = _correct_quotient(a.payload, bmag, q, seed.payload, split, counter)
        if negative:
            q = int_neg(q, counter)
        return RnsFixed(q, split), iterations


def _correct_quotient(apay: RnsInt, bmag: RnsInt, q: RnsInt, seed: RnsInt, split: FracSplit, counter) -> RnsInt:
    """Round ``q`` to the nearest ``A F / B`` using the exact residual ``T = A F - q B``.

    The Goldschmidt estimate drifts by up to a few ulp per unit of quotient
    magnitude, so one-ulp steps are not enough.  While ``|2T| > B`` the
    error ``T / B`` is estimated as ``T * S / F^2`` (``S`` is the seed, so
    ``S B / F^2`` lies in ``[1, 1.5]``) and subtracted; each pass at least
    halves the error.  Errors of two ulp or less are walked off one ulp at
    a time, which avoids overshooting back and forth.
    """
    system, F = q.system, split.F
    A, B, S = reverse_int(apay), reverse_int(bmag), reverse_int(seed)
    one = RnsInt.from_int(system, 1)
    af = mul_small(apay, F, counter)
    neg_b = int_neg(bmag, counter)
    for _ in range(2 * F.bit_length() + 8):
        # host-side check that the residual and its scaled step cannot wrap
        T = A * F - reverse_int(q) * B
        if max(abs(A) * F + abs(T), 2 * abs(T), abs(T) * S) > system.max_abs:
            raise RangeError("system range lacks the headroom for the quotient correction")
        t = int_sub(af, int_mul(q, bmag, counter), counter)
        t2 = mul_small(t, 2, counter)
        above = compare(t2, bmag, counter) is Ordering.GREATER
        below = not above and compare(t2, neg_b, counter) is Ordering.LESS
        if not (above or below):
            break
        far_above = above and compare(t, bmag, counter) is Ordering.GREATER
        far_below = below and compare(t, neg_b, counter) is Ordering.LESS
        if far_above or far_below:
            step = scale_by_f(scale_by_f(int_mul(t, seed, counter), split, counter).payload, split, counter).payload
            q = int_add(q, step, counter)
        else:
            q = int_add(q, one, counter) if above else int_sub(q, one, counter)
    else:
        raise NonConvergenceError("quotient correction did not settle")
    # exact ties: the true quotient is q +/- 1/2, round away from zero
    if t2.digits == bmag.digits and reverse_int(q) >= 0:
        q = int_add(q, one, counter)
    elif t2.digits == neg_b.digits and reverse_int(q) <= 0:
        q = int_sub(q, one, counter)
    return q


def div(a: RnsFixed, b: RnsFixed, counter: StepCounter | None = None) -> RnsFixed:
    return goldschmidt_divide(a, b, counter)[0]


def denominator_count(split: FracSplit) -> int:
    """Distinct denominators ``d > 1`` with ``1/d`` exactly representable.

    These are the divisors of ``F`` other than 1; for ``p_f`` distinct
    prime moduli that is ``2**p_f - 1``.
    """
    exps: dict[int, int] = {}
    for m in split.fractional_moduli:
        for q, e in _factorize(m).items():
            exps[q] = exps.get(q, 0) + e
    return math.prod(e + 1 for e in exps.values()) - 1
