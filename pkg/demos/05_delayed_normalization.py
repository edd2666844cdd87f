"""Dot products and matrix products that round once per output element."""

# %%
import random
from fractions import Fraction

from rnsalu import FixedMatrix, FracSplit, StepCounter, dot_delayed, dot_sequential, matmul_delayed, natural_system
from rnsalu.number_system import max_system_for_digit_width

split = FracSplit(natural_system(4), [3, 5])
x = [split.fixed(1), split.fixed(1)]
y = [split.fixed(7), split.fixed(7)]

# %% Rounding each product loses 7/225 twice; summing first keeps it.
print("exact:", Fraction(14, 225))
print("delayed:   ", dot_delayed(x, y).value)
print("sequential:", dot_sequential(x, y).value)

# %% An 8x8 product over the 9-bit natural system: 64 normalizations, no other rounding.
q9 = FracSplit.for_precision(max_system_for_digit_width(9), 10**20)
rng = random.Random(42)
A = FixedMatrix.from_payloads([[rng.randint(-q9.F, q9.F) for _ in range(8)] for _ in range(8)], q9)
B = FixedMatrix.from_payloads([[rng.randint(-q9.F, q9.F) for _ in range(8)] for _ in range(8)], q9)
c = StepCounter()
C = matmul_delayed(A, B, c)
exact = [[sum(a * b for a, b in zip(row, col)) for col in zip(*B.to_fractions())] for row in A.to_fractions()]
worst = max(abs(g - e) for gr, er in zip(C.to_fractions(), exact) for g, e in zip(gr, er))
print(f"normalizations={c.normalizations}  steps={c.steps}  worst error={float(worst * q9.F):.3f} ulp")
