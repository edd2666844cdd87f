"""How many residue digits does a given digit width buy?

Run with ``python demos/01_systems_and_efficiency.py``.
"""

# %% The natural system for a digit width Q is every prime below 2**Q.
from rnsalu import max_system_for_digit_width, metrics, natural_system, power_augmented_system
from rnsalu.number_system import approx_digits, top_prime_count

for Q in range(4, 11):
    m = metrics(max_system_for_digit_width(Q))
    print(f"Q={Q:2d}  p={m.p:4d}  largest modulus={m.P:5d}  n_e={m.n_e:9.2f}  E_R={m.E_R:5.1f}%")

# %% Small systems use their digit bits poorly: four primes in 3-bit digits.
small = metrics(natural_system(4))
print(f"\n{{2,3,5,7}}: range 210, n_e={small.n_e:.3f} bits over {small.p * small.Q} encoding bits, E_R={small.E_R:.1f}%")

# %% Raising small primes to their largest power below 2**Q fills the digits better.
# Keeping only as many moduli as there are primes in [2**(Q-1), 2**Q) pushes E_R past 95%.
for label, system in [
    ("natural, 97 primes", max_system_for_digit_width(9)),
    ("power-augmented, 97 moduli", power_augmented_system(9)),
    ("power-augmented, top 43", power_augmented_system(9, top_prime_count(9))),
]:
    print(f"Q=9 {label:28s} E_R={metrics(system).E_R:.2f}%")

# %% The digit count is roughly n / log2(p); solving that relation by iteration:
for Q in (8, 14):
    m = metrics(max_system_for_digit_width(Q))
    print(f"n_e={m.n_e:.0f}: true p={m.p}, p solving p = n/log2(p) is {approx_digits(m.n_e):.1f}")
