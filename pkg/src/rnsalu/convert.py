"""Forward, mixed-radix and reverse conversion; comparison; base extension.

Mixed-radix conversion (MRC) is the workhorse: one digit emerges per
digit-step, and the most significant digits come out last.  Magnitude,
sign, reverse conversion and base extension are all built on it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import RangeError, SystemMismatchError
from .number_system import RnsSystem
from .rns_int import RnsInt, _same, sub
from .steps import StepCounter, measure, tick


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class MixedRadix:
    """``X = d_1 + d_2 m_1 + d_3 m_1 m_2 + ...`` with ``d_i`` in ``[0, m_i)``."""

    system: RnsSystem
    mr_digits: tuple[int, ...]

    def key(self) -> tuple[int, ...]:
        """Most-significant-first tuple; its lexicographic order is numeric order."""
        return self.mr_digits[::-1]


def forward_int(x: int, system: RnsSystem, counter: StepCounter | None = None) -> RnsInt:
    """Binary integer to residues.

    Costs ``ceil(bitlen(x) / Q)`` steps: the source is consumed one
    Q-bit chunk at a time.
    """
    x = int(x)
    if abs(x) > system.max_abs:
        raise RangeError(f"{x} is outside +/-{system.max_abs}")
    with measure(counter, "forward"):
        tick(counter, -(-abs(x).bit_length() // system.Q))
        return RnsInt.from_int(system, x)


def encode(system: RnsSystem, x: int) -> RnsInt:
    """Uncounted :func:`forward_int`, for building test operands and constants."""
    return forward_int(x, system)


def mrc_digits(system: RnsSystem, digits: Sequence[int], counter: StepCounter | None = None) -> tuple[int, ...]:
    """Sequential mixed-radix conversion; exactly ``p`` digit-steps."""
    mods = system.moduli
    inv = system.inverses
    x = list(digits)
    out = []
    for i in range(system.p):
        d = x[i]
        out.append(d)
        row = inv[i]
        x[i + 1 :] = [((xj - d) * r) % m for xj, r, m in zip(x[i + 1 :], row[i + 1 :], mods[i + 1 :])]
    tick(counter, system.p)
    return tuple(out)


def to_mixed_radix(a: RnsInt, counter: StepCounter | None = None) -> MixedRadix:
    with measure(counter, "mrc"):
        return MixedRadix(a.system, mrc_digits(a.system, a.digits, counter))


def from_mixed_radix(m: MixedRadix) -> int:
    """Positional evaluation of the mixed-radix digits (nonnegative result)."""
    x = 0
    for d, r in zip(reversed(m.mr_digits), reversed(m.system.moduli)):
        x = x * r + d
    return x


def lex_cmp(x: Sequence[int], y: Sequence[int]) -> int:
    """Compare two mixed-radix digit vectors, most significant (last) digit first."""
    for a, b in zip(reversed(x), reversed(y)):
        if a != b:
            return -1 if a < b else 1
    return 0


def reverse_int(a: RnsInt, counter: StepCounter | None = None) -> int:
    """Residues back to a signed binary integer via MRC (``p`` steps)."""
    with measure(counter, "reverse"):
        mr = to_mixed_radix(a, counter)
        return a.system.signed(from_mixed_radix(mr))


def is_negative(a: RnsInt, counter: StepCounter | None = None) -> bool:
    with measure(counter, "sign"):
        mr = mrc_digits(a.system, a.digits, counter)
        return lex_cmp(mr, a.system.half_mr) >= 0


def sign(a: RnsInt, counter: StepCounter | None = None) -> int:
    if not any(a.digits):
        return 0
    return -1 if is_negative(a, counter) else 1


def compare(a: RnsInt, b: RnsInt, counter: StepCounter | None = None) -> Ordering:
    """Order of the signed values of ``a`` and ``b``.

    Each operand is expanded once (``2p`` steps).  Subtracting first would
    save an expansion but misorders pairs whose difference leaves the
    signed range.
    """
    s = _same(a, b)
    with measure(counter, "compare"):
        if a.digits == b.digits:
            tick(counter)
            return Ordering.EQUAL
        xa = mrc_digits(s, a.digits, counter)
        xb = mrc_digits(s, b.digits, counter)
        na = lex_cmp(xa, s.half_mr) >= 0
        nb = lex_cmp(xb, s.half_mr) >= 0
        if na != nb:
            return Ordering.LESS if na else Ordering.GREATER
        return Ordering(lex_cmp(xa, xb))


def compare_difference(a: RnsInt, b: RnsInt, counter: StepCounter | None = None) -> Ordering:
    """Sign of ``a - b``: ``p + 1`` steps, valid only while ``|a - b| <= (R-1)/2``."""
    with measure(counter, "compare_difference"):
        d = sub(a, b, counter)
        return Ordering(sign(d, counter))


def extend_mixed_radix(
    mr: Sequence[int],
    radices: Sequence[int],
    target: RnsSystem,
    counter: StepCounter | None = None,
) -> tuple[int, ...]:
    """Residues, for every target modulus, of the value with the given mixed-radix digits.

    Horner evaluation from the top digit down, digit-parallel across the
    target moduli; ``len(mr) - 1`` steps.
    """
    mods = target.moduli
    if not mr:
        return (0,) * target.p
    acc = [mr[-1] % t for t in mods]
    for d, r in zip(reversed(mr[:-1]), reversed(radices[:-1])):
        acc = [(x * (r % t) + d) % t for x, t in zip(acc, mods)]
    tick(counter, len(mr) - 1)
    return tuple(acc)


def base_extend(a: RnsInt, target: RnsSystem, counter: StepCounter | None = None) -> RnsInt:
    """Carry ``a`` (over a subset of ``target``'s moduli) into the full target system.

    The nonnegative representative of ``a`` is preserved.
    """
    src = a.system
    if not set(src.moduli) <= set(target.moduli):
        raise SystemMismatchError(f"{src!r} is not a subset of {target!r}")
    with measure(counter, "base_extend"):
        mr = mrc_digits(src, a.digits, counter)
        return RnsInt._raw(target, extend_mixed_radix(mr, src.moduli, target, counter))


def restrict(a: RnsInt, moduli: Sequence[int]) -> RnsInt:
    """Drop digits: the residues of ``a`` for a subset of its moduli."""
    sub_system = a.system.subsystem(moduli)
    idx = [a.system.index_of(m) for m in sub_system.moduli]
    return RnsInt._raw(sub_system, tuple(a.digits[i] for i in idx))


def forward_steps(x: int, Q: int) -> int:
    return math.ceil(abs(x).bit_length() / Q)
