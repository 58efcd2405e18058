import random

import pytest

from twistcert.arith import _val
from twistcert.curve import make_curve, twist
from twistcert.reduction import (
    ADDITIVE,
    GOOD,
    MULT_NONSPLIT,
    MULT_SPLIT,
    bad_primes,
    count_points_mod_p,
    is_good_at,
    tate_reduction,
)

from oracles import kodaira_table_p_ge_5

# Hand-run corpus.  The (A, B) = (-13392, -1080432) rows are the
# non-minimal short model of the conductor-11 curve: Tate must rescale
# twice at 2 and 3 and find I5 at 11.
CORPUS = [
    ((0, -2), 5, GOOD, "I0", 0, 1),
    ((0, -2), 2, ADDITIVE, "II", 6, 1),
    ((0, -2), 3, ADDITIVE, "II", 3, 1),
    ((0, -159014), 43, ADDITIVE, "I0*", 6, 4),
    ((-1, 1), 23, MULT_SPLIT, "I1", 1, 1),
    ((1, 1), 31, MULT_NONSPLIT, "I1", 1, 1),
    ((50, 250), 5, ADDITIVE, "I1*", 7, 4),
    ((5, 5), 5, ADDITIVE, "II", 2, 1),
    ((5, 25), 5, ADDITIVE, "III", 3, 2),
    ((25, 25), 5, ADDITIVE, "IV", 4, 3),
    ((125, 625), 5, ADDITIVE, "IV*", 8, 3),
    ((125, 3125), 5, ADDITIVE, "III*", 9, 2),
    ((625, 3125), 5, ADDITIVE, "II*", 10, 1),
    ((625, 15625), 5, GOOD, "I0", 0, 1),
    ((9, 27), 3, ADDITIVE, "I0*", 6, 2),
    ((1, 2), 2, ADDITIVE, "I1*", 8, 4),
    ((1, 1), 2, ADDITIVE, "II", 4, 1),
    ((-13392, -1080432), 2, GOOD, "I0", 0, 1),
    ((-13392, -1080432), 3, GOOD, "I0", 0, 1),
    ((-13392, -1080432), 11, MULT_SPLIT, "I5", 5, 5),
]


@pytest.mark.parametrize("curve,p,kind,kodaira,v,c", CORPUS)
def test_corpus(curve, p, kind, kodaira, v, c):
    rd = tate_reduction(make_curve(*curve), p)
    assert (rd.kind, rd.kodaira, rd.v_delta_min, rd.tamagawa) == (kind, kodaira, v, c)


def test_good_fast_path_matches_full_run():
    E = make_curve(0, -2)
    for p in (5, 7, 43, 101):
        assert E.disc % p != 0
        rd = tate_reduction(E, p)
        assert rd.kind == GOOD and rd.v_delta_min == 0
        assert is_good_at(E, p)


def test_is_good_pinned_values():
    E = make_curve(0, -2)
    assert is_good_at(E, 7)
    assert not is_good_at(E, 3)
    assert is_good_at(E, 43)


def test_bad_primes():
    assert bad_primes(make_curve(0, -2)) == [2, 3]
    assert bad_primes(make_curve(-13392, -1080432)) == [11]


def test_valuation_table_oracle_p_ge_5():
    rng = random.Random(7)
    checked = 0
    while checked < 1500:
        p = rng.choice([5, 7, 11, 13, 17, 19, 23])
        A = rng.randint(-40, 40) * p ** rng.choice([0, 1, 2, 3, 4])
        B = rng.randint(-40, 40) * p ** rng.choice([0, 1, 2, 3, 4, 5, 6])
        if -16 * (4 * A**3 + 27 * B**2) == 0:
            continue
        rd = tate_reduction(make_curve(A, B), p)
        assert (rd.kodaira, rd.v_delta_min) == kodaira_table_p_ge_5(A, B, p)
        # conductor exponent via the p >= 5 dichotomy
        expect_f = 0 if rd.kind == GOOD else 1 if rd.kind in (MULT_SPLIT, MULT_NONSPLIT) else 2
        assert rd.conductor_exponent == expect_f
        checked += 1


def test_point_count_kind_oracle():
    rng = random.Random(13)
    checked = 0
    while checked < 600:
        p = rng.choice([3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
        A, B = rng.randint(-60, 60), rng.randint(-60, 60)
        if -16 * (4 * A**3 + 27 * B**2) == 0:
            continue
        rd = tate_reduction(make_curve(A, B), p)
        ns, sing = count_points_mod_p(rd.minimal_model, p)
        total = ns + 1  # smooth point at infinity
        if rd.kind == GOOD:
            assert sing == 0 and (total - (p + 1)) ** 2 <= 4 * p
        elif rd.kind == MULT_SPLIT:
            assert sing == 1 and total == p - 1
        elif rd.kind == MULT_NONSPLIT:
            assert sing == 1 and total == p + 1
        else:
            assert sing == 1 and total == p
        checked += 1


def test_scaling_invariance():
    rng = random.Random(29)
    checked = 0
    while checked < 150:
        p = rng.choice([2, 3, 5, 7, 11, 13])
        A, B = rng.randint(-30, 30), rng.randint(-30, 30)
        if -16 * (4 * A**3 + 27 * B**2) == 0:
            continue
        rd0 = tate_reduction(make_curve(A, B), p)
        for u in (2, 3, 7, p):
            rd1 = tate_reduction(make_curve(u**4 * A, u**6 * B), p)
            assert (rd1.kind, rd1.kodaira, rd1.v_delta_min, rd1.tamagawa) == (
                rd0.kind,
                rd0.kodaira,
                rd0.v_delta_min,
                rd0.tamagawa,
            )
        checked += 1


def test_v_delta_min_bounded_by_model_valuation():
    rng = random.Random(31)
    checked = 0
    while checked < 200:
        p = rng.choice([2, 3, 5, 7, 11])
        A, B = rng.randint(-30, 30), rng.randint(-30, 30)
        disc = -16 * (4 * A**3 + 27 * B**2)
        if disc == 0:
            continue
        vmodel = _val(disc, p) if disc % p == 0 else 0
        rd = tate_reduction(make_curve(A, B), p)
        assert rd.v_delta_min <= vmodel
        # scaling up makes the model non-minimal and must not change v
        rd_up = tate_reduction(make_curve(p**4 * A, p**6 * B), p)
        assert rd_up.v_delta_min == rd.v_delta_min
        checked += 1


def test_twist_additive_at_good_odd_divisors():
    # twisting by q * m at a good odd prime q always gives additive
    # reduction there; 50 sampled (E, d, p) triples
    rng = random.Random(37)
    checked = 0
    while checked < 50:
        p = rng.choice([5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43])
        A, B = rng.randint(-30, 30), rng.randint(-30, 30)
        disc = -16 * (4 * A**3 + 27 * B**2)
        if disc == 0 or disc % p == 0:
            continue
        m = rng.choice([1, 2, 3, 6, -1])
        if m % p == 0:
            continue
        rd = tate_reduction(twist(make_curve(A, B), p * m), p)
        assert rd.kind == ADDITIVE
        checked += 1


def test_twisted_flagship_family():
    # j = 0 family: twist of (0, -2) at any good odd q dividing d is I0*
    # with v = 6 and full component group when q has all three roots
    E = make_curve(0, -2)
    for q in (43, 127, 157):
        rd = tate_reduction(twist(E, q), q)
        assert (rd.kind, rd.kodaira, rd.v_delta_min) == (ADDITIVE, "I0*", 6)
        assert rd.tamagawa == 4
