"""Modulus sets and the system-level metrics derived from them.

A residue system is an ordered tuple of pairwise-coprime moduli.  Its range
``R`` is the exact product of the moduli; everything that is reported as a
logarithm is evaluated from that big integer, never by summing rounded
per-modulus logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import EmptyDomainError, NonConvergenceError, NotCoprimeError, UnsupportedWidthError

LOG10_2 = math.log10(2)


def primes_below(limit: int) -> list[int]:
    """All primes ``q`` with ``2 <= q < limit``, ascending."""
    if limit < 2:
        raise EmptyDomainError(f"no primes below {limit}")
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"[: min(2, limit)]
    for q in range(2, math.isqrt(limit - 1) + 1):
        if sieve[q]:
            sieve[q * q :: q] = bytes(len(range(q * q, limit, q)))
    return [q for q in range(limit) if sieve[q]]


def first_primes(count: int) -> list[int]:
    if count < 1:
        raise EmptyDomainError("need at least one prime")
    # p_n < n (ln n + ln ln n) for n >= 6
    bound = 15 if count < 6 else int(count * (math.log(count) + math.log(math.log(count)))) + 2
    return primes_below(bound)[:count]


def log2_int(x: int) -> float:
    """log2 of a positive integer of any size, to double precision."""
    if x <= 0:
        raise ValueError("log2_int needs a positive integer")
    shift = max(x.bit_length() - 63, 0)
    return shift + math.log2(x >> shift)


def mixed_radix_digits(x: int, radices: Sequence[int]) -> tuple[int, ...]:
    """Host-side mixed-radix expansion of a nonnegative integer.

    Used to precompute constants; the digit-parallel conversion of RNS
    values lives in :mod:`rnsalu.convert`.
    """
    digits = []
    for m in radices:
        x, d = divmod(x, m)
        digits.append(d)
    if x:
        raise ValueError("value exceeds the mixed-radix range")
    return tuple(digits)


class RnsSystem:
    """An immutable ordered set of pairwise-coprime moduli.

    Attributes
    ----------
    moduli : tuple of int
    p : number of moduli (digits)
    P : largest modulus
    Q : digit encoding width in bits, ``floor(log2(P)) + 1``
    R : exact range, the product of all moduli
    """

    def __init__(self, moduli: Iterable[int]):
        mods = tuple(int(m) for m in moduli)
        if not mods:
            raise EmptyDomainError("a residue system needs at least one modulus")
        for m in mods:
            if m < 2:
                raise ValueError(f"modulus {m} is smaller than 2")
        _check_coprime(mods)
        self.moduli = mods
        self.p = len(mods)
        self.P = max(mods)
        self.Q = self.P.bit_length()
        self.R = math.prod(mods)

    def __repr__(self) -> str:
        if self.p <= 8:
            return f"RnsSystem({list(self.moduli)})"
        return f"RnsSystem(p={self.p}, P={self.P}, Q={self.Q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RnsSystem) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(self.moduli)

    def __len__(self) -> int:
        return self.p

    @property
    def half(self) -> int:
        """Smallest representative that decodes as negative, ``ceil(R/2)``."""
        return (self.R + 1) // 2

    @property
    def max_abs(self) -> int:
        """``(R - 1) // 2``: every signed value with ``|x| <= max_abs`` is representable."""
        return (self.R - 1) // 2

    def signed(self, x: int) -> int:
        """Signed interpretation of a representative ``x`` in ``[0, R)``."""
        return x - self.R if x >= self.half else x

    @cached_property
    def inverses(self) -> tuple[tuple[int, ...], ...]:
        """``inverses[i][j]`` is ``m_i^-1 mod m_j`` for ``j > i`` (zero elsewhere).

        Built on first use; mixed-radix conversion reads it one row per step.
        """
        mods = self.moduli
        rows = []
        for i, mi in enumerate(mods):
            rows.append((0,) * (i + 1) + tuple(pow(mi, -1, mj) for mj in mods[i + 1 :]))
        return tuple(rows)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """Mixed-radix place values ``1, m_1, m_1 m_2, ...``."""
        w, out = 1, []
        for m in self.moduli:
            out.append(w)
            w *= m
        return tuple(out)

    @cached_property
    def half_mr(self) -> tuple[int, ...]:
        return mixed_radix_digits(self.half, self.moduli)

    def index_of(self, modulus: int) -> int:
        return self.moduli.index(modulus)

    def subsystem(self, moduli: Iterable[int]) -> "RnsSystem":
        mods = tuple(moduli)
        missing = set(mods) - set(self.moduli)
        if missing:
            raise ValueError(f"moduli {sorted(missing)} are not part of {self!r}")
        return RnsSystem(mods)


def _check_coprime(mods: tuple[int, ...]) -> None:
    acc = 1
    for k, m in enumerate(mods):
        if math.gcd(acc, m) != 1:
            for earlier in mods[:k]:
                if math.gcd(earlier, m) != 1:
                    raise NotCoprimeError(earlier, m)
        acc *= m


@dataclass(frozen=True)
class SystemMetrics:
    p: int
    P: int
    Q: int
    n_e: float
    decimal_digits: int
    E_R: float
    ratio_p_over_ne: float
    binary_digits: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def natural_system(p: int) -> RnsSystem:
    """The first ``p`` primes, in order."""
    if p < 1:
        raise EmptyDomainError("a natural system needs p >= 1")
    return RnsSystem(first_primes(p))


def max_system_for_digit_width(Q: int) -> RnsSystem:
    """Every prime below ``2**Q``: the widest natural system with Q-bit digits."""
    if Q < 2:
        raise UnsupportedWidthError(f"digit width Q={Q} is below 2 bits")
    return RnsSystem(primes_below(1 << Q))


def power_augmented_system(Q: int, count: int | None = None) -> RnsSystem:
    """Natural Q-bit system with each small prime raised to its largest power below ``2**Q``.

    With ``count`` only the ``count`` largest moduli are kept (original
    prime order is preserved), which trades range for efficiency.
    """
    if Q < 3:
        raise UnsupportedWidthError(f"power augmentation needs Q >= 3, got {Q}")
    limit = 1 << Q
    mods = []
    for q in primes_below(limit):
        m = q
        while m * q < limit:
            m *= q
        mods.append(m)
    if count is not None:
        if not 1 <= count <= len(mods):
            raise ValueError(f"count must be in 1..{len(mods)}")
        keep = set(sorted(mods)[-count:])
        mods = [m for m in mods if m in keep]
    return RnsSystem(mods)


def top_prime_count(Q: int) -> int:
    """Number of primes in ``[2**(Q-1), 2**Q)``, i.e. primes needing all Q bits."""
    lo = 1 << (Q - 1)
    return sum(1 for q in primes_below(1 << Q) if q >= lo)


def effective_width(system: RnsSystem) -> float:
    return log2_int(system.R)


def metrics(system: RnsSystem) -> SystemMetrics:
    n_e = log2_int(system.R)
    return SystemMetrics(
        p=system.p,
        P=system.P,
        Q=system.Q,
        n_e=n_e,
        decimal_digits=math.floor(n_e * LOG10_2),
        E_R=100.0 * n_e / (system.p * system.Q),
        ratio_p_over_ne=system.p / n_e,
        binary_digits=math.ceil(n_e / system.Q),
    )


def representational_efficiency(moduli: Sequence[int], Q: int | None = None) -> float:
    """E_R in percent for an arbitrary modulus list encoded in ``Q``-bit digits."""
    if Q is None:
        Q = max(moduli).bit_length()
    return 100.0 * log2_int(math.prod(moduli)) / (len(moduli) * Q)


def approx_digits(n: float, mode: str = "solve_1b", *, rtol: float = 1e-9, max_iter: int = 200) -> float:
    """Digit count ``p`` with ``p = n / log2(p)``.

    Fixed-point iteration on ``p <- n / log2(p)``, averaged with the previous
    iterate: the plain map is not contracting for ``p < e`` (``n < ~3.9``).
    """
    if mode != "solve_1b":
        raise ValueError(f"unknown mode {mode!r}")
    if n < 2:
        raise UnsupportedWidthError(f"width n={n} is below 2 bits")
    p = max(2.0, n / math.log2(n))
    for _ in range(max_iter):
        nxt = 0.5 * (p + n / math.log2(p))
        if abs(nxt - p) <= rtol * nxt:
            return nxt
        p = nxt
    raise NonConvergenceError(f"p = n/log2(p) did not converge for n={n}")


def approximation_error(n: float, p: int) -> float:
    """Relative gap between ``n / log2(p)`` and the true digit count ``p``.

    Measured against the approximation, as a fraction (0.072 for 7.2%).
    """
    approx = n / math.log2(p)
    return (approx - p) / approx
