import math

import pytest
from hypothesis import given, strategies as st

from oracle import log2_exact, primes_by_trial
from rnsalu.errors import EmptyDomainError, NonConvergenceError, NotCoprimeError, UnsupportedWidthError
from rnsalu.number_system import (
    RnsSystem,
    approx_digits,
    approximation_error,
    first_primes,
    log2_int,
    max_system_for_digit_width,
    metrics,
    natural_system,
    power_augmented_system,
    primes_below,
    representational_efficiency,
    top_prime_count,
)

# (Q, p, binary digits, n_e, P) as printed in the digit-growth table
TABLE3 = [
    (4, 6, 4, 14.87, 13),
    (5, 11, 8, 37.55, 31),
    (6, 18, 13, 76.63, 61),
    (7, 31, 24, 161.46, 127),
    (8, 54, 42, 334.88, 251),
    (9, 97, 79, 702.60, 509),
    (10, 172, 142, 1419.52, 1021),
    (11, 309, 261, 2864.48, 2039),
    (12, 564, 485, 5810.32, 4093),
    (13, 1028, 895, 11634.09, 8191),
    (14, 1900, 1676, 23451.13, 16381),
]


class TestPrimes:
    def test_empty(self):
        assert primes_below(2) == []

    def test_below_16(self):
        assert primes_below(16) == [2, 3, 5, 7, 11, 13]

    def test_below_512(self):
        ps = primes_below(512)
        assert len(ps) == 97 and ps[-1] == 509

    def test_rejects_tiny_limit(self):
        with pytest.raises(EmptyDomainError):
            primes_below(1)

    @pytest.mark.parametrize("limit", [3, 10, 100, 1000, 2049])
    def test_matches_trial_division(self, limit):
        assert primes_below(limit) == primes_by_trial(limit)

    @pytest.mark.parametrize("count", [1, 2, 5, 6, 7, 50, 97, 500])
    def test_first_primes(self, count):
        assert first_primes(count) == primes_by_trial(4000)[:count]


class TestSystems:
    def test_natural_one(self):
        s = natural_system(1)
        assert s.moduli == (2,) and s.R == 2

    def test_natural_four(self):
        s = natural_system(4)
        assert s.moduli == (2, 3, 5, 7) and s.R == 210

    def test_natural_six(self):
        s = natural_system(6)
        assert s.R == 30030
        assert metrics(s).n_e == pytest.approx(14.87, abs=0.005)

    def test_natural_zero(self):
        with pytest.raises(EmptyDomainError):
            natural_system(0)

    @pytest.mark.parametrize("Q,p,P", [(4, 6, 13), (8, 54, 251), (9, 97, 509)])
    def test_max_system(self, Q, p, P):
        s = max_system_for_digit_width(Q)
        assert (s.p, s.P, s.Q) == (p, P, Q)

    def test_max_system_width_error(self):
        with pytest.raises(UnsupportedWidthError):
            max_system_for_digit_width(1)

    def test_rejects_non_coprime(self):
        with pytest.raises(NotCoprimeError) as info:
            RnsSystem([3, 5, 9])
        assert info.value.pair == (3, 9)

    def test_rejects_small_modulus(self):
        with pytest.raises(ValueError):
            RnsSystem([1, 3])

    def test_inverse_table(self):
        s = RnsSystem([2, 3, 5, 7])
        for i, mi in enumerate(s.moduli):
            for j in range(i + 1, s.p):
                assert mi * s.inverses[i][j] % s.moduli[j] == 1

    @pytest.mark.parametrize("Q", range(2, 15))
    def test_digit_width_is_bit_length_of_largest_modulus(self, Q):
        s = max_system_for_digit_width(Q)
        assert all(m < 2**s.Q for m in s.moduli)
        assert s.P >= 2 ** (s.Q - 1)
        assert s.Q == math.floor(math.log2(s.P)) + 1


class TestPowerAugmented:
    def test_q3(self):
        assert power_augmented_system(3).moduli == (4, 3, 5, 7)

    def test_q4(self):
        s = power_augmented_system(4)
        assert s.moduli[:2] == (8, 9)
        assert s.moduli[2:] == (5, 7, 11, 13)

    def test_largest_powers_exhaustively(self):
        # every replaced digit is the largest power of its prime below 2^Q
        for Q in range(3, 11):
            limit = 2**Q
            for q, m in zip(primes_below(limit), power_augmented_system(Q).moduli):
                powers = [q**k for k in range(1, 40) if q**k < limit]
                assert m == max(powers)

    @pytest.mark.parametrize("Q", range(3, 13))
    def test_efficiency_never_worse(self, Q):
        nat = metrics(max_system_for_digit_width(Q)).E_R
        aug = metrics(power_augmented_system(Q)).E_R
        assert aug >= nat
        for q, m in zip(primes_below(2**Q), power_augmented_system(Q).moduli):
            assert math.log2(m) / Q >= math.log2(q) / Q

    def test_q9_top_selection_exceeds_95(self):
        s = power_augmented_system(9, count=top_prime_count(9))
        assert s.p == 43
        assert metrics(s).E_R > 95.0
        expected = 100 * log2_exact(s.moduli) / (43 * 9)
        assert metrics(s).E_R == pytest.approx(expected, rel=1e-12)

    def test_too_small_width(self):
        with pytest.raises(UnsupportedWidthError):
            power_augmented_system(2)


class TestMetrics:
    def test_small_system(self):
        m = metrics(natural_system(4))
        assert m.Q == 3
        assert m.n_e == pytest.approx(math.log2(210), rel=1e-12)
        assert m.E_R == pytest.approx(100 * math.log2(210) / 12, rel=1e-12)
        assert m.E_R == pytest.approx(64.3, abs=0.05)

    def test_q9(self):
        m = metrics(max_system_for_digit_width(9))
        assert round(m.n_e, 2) == 702.60
        assert m.decimal_digits == 211
        assert round(m.ratio_p_over_ne, 2) == 0.14

    def test_q14(self):
        m = metrics(max_system_for_digit_width(14))
        assert (m.p, m.binary_digits) == (1900, 1676)
        assert m.n_e == pytest.approx(23451.13, abs=0.005)

    @pytest.mark.parametrize("row", TABLE3, ids=lambda r: f"Q{r[0]}")
    def test_table3_rows(self, row):
        Q, p, nb, ne, P = row
        m = metrics(max_system_for_digit_width(Q))
        assert (m.p, m.P, m.binary_digits) == (p, P, nb)
        assert abs(m.n_e - ne) <= 0.01

    @pytest.mark.parametrize("Q", [4, 9, 14])
    def test_log_precision_against_decimal(self, Q):
        s = max_system_for_digit_width(Q)
        assert metrics(s).n_e == pytest.approx(log2_exact(s.moduli), rel=1e-11)

    @given(st.lists(st.sampled_from(primes_below(200)), min_size=1, max_size=25, unique=True))
    def test_invariants(self, mods):
        s = RnsSystem(mods)
        m = metrics(s)
        assert 0 < m.E_R <= 100
        assert m.binary_digits <= m.p
        assert s.R == math.prod(mods)

    def test_representational_efficiency_explicit_q(self):
        assert representational_efficiency([2, 3, 5, 7], 3) == pytest.approx(100 * math.log2(210) / 12)

    @given(st.integers(min_value=1, max_value=2**4000))
    def test_log2_int(self, x):
        assert log2_int(x) == pytest.approx(math.log2(x) if x < 2**1000 else log2_exact([x]), rel=1e-13)


class TestApproxDigits:
    def test_fixed_point_at_two(self):
        assert approx_digits(2) == pytest.approx(2.0)

    def test_checkpoint_335(self):
        p = approx_digits(335)
        assert abs(p - 54) / 54 <= 0.072
        assert p == pytest.approx(335 / math.log2(p), rel=1e-8)

    def test_checkpoint_23452(self):
        p = approx_digits(23452)
        assert abs(p - 1900) / 1900 <= 0.126

    @given(st.floats(min_value=2, max_value=1e6))
    def test_converges_everywhere(self, n):
        p = approx_digits(n)
        assert p == pytest.approx(n / math.log2(p), rel=1e-7)

    def test_rejects_small(self):
        with pytest.raises(UnsupportedWidthError):
            approx_digits(1.5)

    def test_non_convergence_is_reported(self):
        with pytest.raises(NonConvergenceError):
            approx_digits(1e6, max_iter=1)

    @pytest.mark.parametrize("Q", range(6, 15))
    def test_underestimates_on_natural_systems(self, Q):
        m = metrics(max_system_for_digit_width(Q))
        assert m.n_e / math.log2(m.p) > m.p
        assert approximation_error(m.n_e, m.p) < 0.126
