"""Carry-free signed integers over a fixed residue system.

Every operation here touches each digit independently, so each call is a
single digit-step whatever the number of digits.  Results wrap modulo R;
range checking belongs to the caller.
"""

from __future__ import annotations

from .errors import SystemMismatchError
from .number_system import RnsSystem
from .steps import StepCounter, measure, tick


class RnsInt:
    """A signed integer held as one residue per modulus.

    The representative ``X`` in ``[0, R)`` decodes to ``X`` when
    ``X < ceil(R/2)`` and to ``X - R`` otherwise.
    """

    __slots__ = ("system", "digits")

    def __init__(self, system: RnsSystem, digits):
        digits = tuple(int(d) for d in digits)
        if len(digits) != system.p:
            raise ValueError(f"expected {system.p} digits, got {len(digits)}")
        for d, m in zip(digits, system.moduli):
            if not 0 <= d < m:
                raise ValueError(f"digit {d} out of range for modulus {m}")
        self.system = system
        self.digits = digits

    @classmethod
    def _raw(cls, system: RnsSystem, digits: tuple[int, ...]) -> "RnsInt":
        obj = object.__new__(cls)
        obj.system = system
        obj.digits = digits
        return obj

    @classmethod
    def from_int(cls, system: RnsSystem, x: int) -> "RnsInt":
        """Residues of ``x`` with no range check (values wrap modulo R)."""
        return cls._raw(system, tuple(x % m for m in system.moduli))

    @classmethod
    def zero(cls, system: RnsSystem) -> "RnsInt":
        return cls._raw(system, (0,) * system.p)

    def __repr__(self) -> str:
        return f"RnsInt({list(self.digits)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RnsInt):
            return NotImplemented
        return eq(self, other)

    def __hash__(self) -> int:
        return hash((self.system.moduli, self.digits))

    def __add__(self, other):
        return add(self, _coerce(self.system, other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _coerce(self.system, other))

    def __rsub__(self, other):
        return sub(_coerce(self.system, other), self)

    def __mul__(self, other):
        if isinstance(other, int):
            return mul_small(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __int__(self) -> int:
        from .convert import reverse_int

        return reverse_int(self)


def _coerce(system: RnsSystem, x) -> RnsInt:
    if isinstance(x, RnsInt):
        return x
    if isinstance(x, int):
        return RnsInt.from_int(system, x)
    raise TypeError(f"cannot combine RnsInt with {type(x).__name__}")


def _same(a: RnsInt, b: RnsInt) -> RnsSystem:
    if a.system is not b.system and a.system != b.system:
        raise SystemMismatchError(f"{a.system!r} vs {b.system!r}")
    return a.system


def add(a: RnsInt, b: RnsInt, counter: StepCounter | None = None) -> RnsInt:
    s = _same(a, b)
    with measure(counter, "add"):
        tick(counter)
        return RnsInt._raw(s, tuple((x + y) % m for x, y, m in zip(a.digits, b.digits, s.moduli)))


def sub(a: RnsInt, b: RnsInt, counter: StepCounter | None = None) -> RnsInt:
    s = _same(a, b)
    with measure(counter, "sub"):
        tick(counter)
        return RnsInt._raw(s, tuple((x - y) % m for x, y, m in zip(a.digits, b.digits, s.moduli)))


def mul(a: RnsInt, b: RnsInt, counter: StepCounter | None = None) -> RnsInt:
    s = _same(a, b)
    with measure(counter, "mul"):
        tick(counter)
        return RnsInt._raw(s, tuple((x * y) % m for x, y, m in zip(a.digits, b.digits, s.moduli)))


def neg(a: RnsInt, counter: StepCounter | None = None) -> RnsInt:
    with measure(counter, "neg"):
        tick(counter)
        return RnsInt._raw(a.system, tuple(-x % m for x, m in zip(a.digits, a.system.moduli)))


def mul_small(a: RnsInt, k: int, counter: StepCounter | None = None) -> RnsInt:
    """``a * k`` for a machine integer ``k``; the constant is reduced per digit."""
    with measure(counter, "mul_small"):
        tick(counter)
        return RnsInt._raw(a.system, tuple((x * (k % m)) % m for x, m in zip(a.digits, a.system.moduli)))


def is_zero(a: RnsInt) -> bool:
    return not any(a.digits)


def eq(a: RnsInt, b: RnsInt) -> bool:
    _same(a, b)
    return a.digits == b.digits
