"""Reference implementations that share no code with the package.

Every expected value in the suite comes from here (or is hand-derived),
never from the code under test.
"""

import math
from fractions import Fraction


def is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def primes_by_trial(limit):
    return [n for n in range(2, limit) if is_prime(n)]


def residues(x, moduli):
    return tuple(x % m for m in moduli)


def crt(digits, moduli):
    """Chinese remainder reconstruction of the representative in [0, R)."""
    R = math.prod(moduli)
    x = 0
    for d, m in zip(digits, moduli):
        Mi = R // m
        x += d * Mi * pow(Mi, -1, m)
    return x % R


def signed(x, R):
    x %= R
    return x - R if 2 * x >= R else x


def mixed_radix(x, moduli):
    out = []
    for m in moduli:
        out.append(x % m)
        x //= m
    return tuple(out)


def round_half_away(q):
    q = Fraction(q)
    if q >= 0:
        return math.floor(q + Fraction(1, 2))
    return -math.floor(-q + Fraction(1, 2))


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def log2_exact(moduli, digits=30):
    """log2 of a product via a long decimal expansion, independent of float log of R."""
    import decimal

    ctx = decimal.Context(prec=digits + 10)
    R = decimal.Decimal(math.prod(moduli))
    return float(ctx.divide(R.ln(ctx), decimal.Decimal(2).ln(ctx)))
