import pytest

from twistcert.arith import primes_up_to
from twistcert.classify import (
    INERT,
    RAMIFIED,
    SPLIT,
    chebotarev_fractions,
    classify_prime,
    find_usable_primes,
    splitting_in_quadratic,
)
from twistcert.curve import QuadField, make_curve
from twistcert.errors import BadPrime, HypothesisFailed, SearchExhausted
from twistcert.reduction import is_good_at

from oracles import brute_group_order, brute_two_torsion_dim


class TestClassifyPrime:
    def test_pinned_values(self):
        E = make_curve(0, -2)
        assert classify_prime(E, 7).torsion_dim == 0
        assert classify_prime(E, 5).torsion_dim == 1
        assert classify_prime(E, 43).torsion_dim == 2

    def test_bad_prime_rejected(self):
        E = make_curve(0, -2)
        with pytest.raises(BadPrime):
            classify_prime(E, 2)
        with pytest.raises(BadPrime):
            classify_prime(E, 3)

    def test_brute_force_oracle(self):
        # production root counting vs the doubling kernel of E(F_q)
        E = make_curve(0, -2)
        for q in primes_up_to(500):
            if q == 2 or E.disc % q == 0:
                continue
            assert classify_prime(E, q).torsion_dim == brute_two_torsion_dim(0, -2, q)

    def test_full_torsion_forces_order_divisible_by_4(self):
        for A, B in [(0, -2), (0, 3), (1, 1)]:
            E = make_curve(A, B)
            for q in primes_up_to(400):
                if q == 2 or E.disc % q == 0:
                    continue
                if classify_prime(E, q).torsion_dim == 2:
                    assert brute_group_order(A, B, q) % 4 == 0

    def test_square_disc_curve_never_dim_1(self):
        # Galois group C3: x^3 - 3x + 1 has square discriminant 81
        E = make_curve(-3, 1)
        assert E.disc == -16 * (-108 + 27)  # = 1296, square
        for q in primes_up_to(500):
            if q == 2 or E.disc % q == 0:
                continue
            assert classify_prime(E, q).torsion_dim in (0, 2)


class TestSplitting:
    def test_pinned_values(self):
        K = QuadField(D=5)
        assert splitting_in_quadratic(K, 43) == INERT
        assert splitting_in_quadratic(K, 31) == SPLIT
        assert splitting_in_quadratic(K, 5) == RAMIFIED

    def test_at_two(self):
        assert splitting_in_quadratic(QuadField(D=17), 2) == SPLIT  # 1 mod 8
        assert splitting_in_quadratic(QuadField(D=5), 2) == INERT  # 5 mod 8
        assert splitting_in_quadratic(QuadField(D=-3), 2) == INERT  # -3 = 5 mod 8
        assert splitting_in_quadratic(QuadField(D=3), 2) == RAMIFIED
        assert splitting_in_quadratic(QuadField(D=2), 2) == RAMIFIED
        assert splitting_in_quadratic(QuadField(D=-1), 2) == RAMIFIED


class TestFindUsable:
    def test_least_prime_is_43(self):
        E = make_curve(0, -2)
        assert find_usable_primes(E, QuadField(D=5), 1, 100) == [43]

    def test_first_six(self):
        E = make_curve(0, -2)
        primes = find_usable_primes(E, QuadField(D=5), 6, 10**4)
        assert primes == [43, 127, 157, 223, 277, 283]

    def test_hypothesis_failures(self):
        with pytest.raises(HypothesisFailed):
            find_usable_primes(make_curve(0, -2), QuadField(D=-3), 1, 100)
        with pytest.raises(HypothesisFailed):
            find_usable_primes(make_curve(-1, 0), QuadField(D=5), 1, 100)

    def test_search_exhausted_reports_density(self):
        with pytest.raises(SearchExhausted) as exc:
            find_usable_primes(make_curve(0, -2), QuadField(D=5), 50, 100)
        assert "density" in str(exc.value)

    def test_returned_primes_recheck(self):
        E = make_curve(0, -2)
        K = QuadField(D=5)
        for q in find_usable_primes(E, K, 4, 10**4):
            assert q % 2 == 1
            assert is_good_at(E, q)
            assert classify_prime(E, q).torsion_dim == 2
            assert splitting_in_quadratic(K, q) == INERT
            assert E.disc % q != 0 and K.D % q != 0


def test_chebotarev_small_window():
    # small-bound smoke; the acceptance suite runs the 10^5 version
    stats = chebotarev_fractions(make_curve(0, -2), QuadField(D=5), 10**4)
    assert 1 / 6 - 0.05 < stats["full_torsion_fraction"] < 1 / 6 + 0.05
    assert 0.45 < stats["inert_fraction"] < 0.55
