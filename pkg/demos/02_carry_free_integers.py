"""Integer arithmetic with no carries between digits."""

# %%
from rnsalu import StepCounter, encode, natural_system, reverse_int
from rnsalu.rns_int import add, mul, sub

system = natural_system(4)  # moduli 2, 3, 5, 7; signed range -104..104
a, b = encode(system, 23), encode(system, 4)
print("23 ->", a.digits, "  4 ->", b.digits)

# %% Each digit is worked on independently, so every operation is one step.
counter = StepCounter()
for name, op in [("add", add), ("sub", sub), ("mul", mul)]:
    r = op(a, b, counter)
    print(f"{name}: digits {r.digits} -> {reverse_int(r)}")
print("steps for three operations:", counter.steps)

# %% Results past the signed range wrap modulo R = 210, just as the hardware would.
print("104 + 1 decodes as", reverse_int(add(encode(system, 104), encode(system, 1))))

# %% The step count does not depend on the number of digits.
big = natural_system(200)
c = StepCounter()
mul(encode(big, 10**300), encode(big, -(10**200)), c)
print(f"one multiply over {big.p} digits: {c.steps} step")
