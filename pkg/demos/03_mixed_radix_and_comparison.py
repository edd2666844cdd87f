"""Recovering magnitude: mixed-radix digits, reverse conversion, comparison and base extension."""

# %%
from rnsalu import RnsInt, RnsSystem, StepCounter, base_extend, compare, encode, natural_system, to_mixed_radix
from rnsalu.convert import reverse_int

s = natural_system(3)
x = RnsInt.from_int(s, 23)
mr = to_mixed_radix(x)
print("23 in {2,3,5}: residues", x.digits, " mixed radix", mr.mr_digits, " (23 = 1 + 2*2 + 3*6)")

# %% Mixed-radix digits are positional, so comparing them most-significant first orders values.
y = RnsInt.from_int(s, 19)
print("mixed radix of 19:", to_mixed_radix(y).mr_digits)
print("compare(23, 19) on unsigned keys:", to_mixed_radix(x).key() > to_mixed_radix(y).key())

# %% Signed comparison expands both operands: at most 2p steps.
system = natural_system(4)
c = StepCounter()
print("compare(-4, 3) ->", compare(encode(system, -4), encode(system, 3), c).name, f"in {c.steps} steps")
print("compare(104, -104) ->", compare(encode(system, 104), encode(system, -104)).name)

# %% Reverse conversion is one mixed-radix pass of p steps.
c = StepCounter()
print("digits (1,2,4,6) decode to", reverse_int(RnsInt(system, (1, 2, 4, 6)), c), f"in {c.steps} steps")

# %% Base extension carries a value from a subset of moduli into the full set.
sub_system = RnsSystem([3, 5])
seven = RnsInt.from_int(sub_system, 7)
print("7 over {3,5}", seven.digits, "-> over {2,3,5,7}", base_extend(seven, system).digits)
