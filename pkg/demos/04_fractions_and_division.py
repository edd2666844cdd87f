"""Fixed-point fractions stored as k/F, where F is the product of the fractional moduli."""

# %%
from fractions import Fraction

from rnsalu import FracSplit, StepCounter, forward_frac, natural_system, reverse_frac
from rnsalu.fraction import denominator_count, div, goldschmidt_divide, mul, to_decimal

split = FracSplit(natural_system(4), [3, 5])  # F = 15
third, fifth3 = forward_frac("1/3", split), forward_frac("3/5", split)
print("1/3 and 3/5 are stored exactly:", reverse_frac(third), reverse_frac(fifth3))
print("denominators representable exactly:", denominator_count(split), "(3, 5 and 15)")

# %% Multiplication rounds once: an integer product, then one normalization by F.
c = StepCounter()
print("1/3 * 3/5 =", reverse_frac(mul(third, fifth3, c)), f"({c.steps} steps, p={split.system.p})")
approx = mul(split.fixed(7), split.fixed(10))
print("7/15 * 10/15 =", reverse_frac(approx), "vs exact", Fraction(70, 225), "(within half an ulp)")

# %% Division iterates towards 1/b and needs headroom beyond F**2, so use six primes.
wide = FracSplit(natural_system(6), [3, 5])
q, iterations = goldschmidt_divide(wide.fixed(5), wide.fixed(9))
print("(5/15) / (9/15) ->", reverse_frac(q), f"after {iterations} refinement(s); exact 5/9 = {5 / 9:.4f}")

# %% With more digits the same code gives long decimal expansions.
precise = FracSplit.for_precision(natural_system(80), 10**30)
print("2/7 =", to_decimal(div(forward_frac(2, precise), forward_frac(7, precise)), 28))
