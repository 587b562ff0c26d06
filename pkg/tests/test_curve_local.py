import random

import pytest
from hypothesis import given, settings, strategies as st

from cube_obstruct.arithmetic import primes_up_to
from cube_obstruct.curve_local import (
    BadReductionError,
    CurveFp,
    NotOnCurveError,
    check_no_p_torsion,
    count_points_naive,
    ec_add,
    ec_neg,
    ec_scalar_mul,
    random_point,
    reduce_mod_p,
    trace_candidates,
    trace_of_frobenius,
)
from cube_obstruct.arithmetic import WrongResidueClassError
from oracles import brute_count


@pytest.mark.parametrize("n,p,b", [(3, 7, 4), (3, 13, 12), (3, 29, 27), (5, 7, (-432 * 25) % 7)])
def test_reduce_mod_p(n, p, b):
    assert reduce_mod_p(n, p).b == b
    assert (-432 * n * n - b) % p == 0


@pytest.mark.parametrize("n,p", [(3, 3), (3, 2), (5, 5), (7, 7), (10, 5)])
def test_reduce_mod_p_rejects_bad_primes(n, p):
    with pytest.raises(BadReductionError):
        reduce_mod_p(n, p)


def test_curve_rejects_singular_or_composite():
    with pytest.raises(ValueError):
        CurveFp(7, 0)
    with pytest.raises(ValueError):
        CurveFp(9, 1)


@pytest.mark.parametrize("curve,expected", [
    (reduce_mod_p(3, 7), 3),
    (reduce_mod_p(3, 29), 30),
    (CurveFp(5, 1), 6),
    (reduce_mod_p(3, 13), 12),
])
def test_count_points_naive_examples(curve, expected):
    assert count_points_naive(curve) == expected
    assert brute_count(curve.p, curve.b) == expected


def test_count_points_naive_matches_pair_enumeration():
    for p in primes_up_to(200):
        if p < 5:
            continue
        for b in range(1, p):
            assert count_points_naive(CurveFp(p, b)) == brute_count(p, b)


def test_scalar_mul_examples():
    E = reduce_mod_p(3, 7)
    P = (0, 2)
    assert E.contains(P)
    assert ec_scalar_mul(E, P, 0) is None
    assert ec_scalar_mul(E, P, 1) == P
    assert ec_scalar_mul(E, P, 3) is None
    assert ec_scalar_mul(E, None, 5) is None


def test_scalar_mul_rejects_foreign_point():
    with pytest.raises(NotOnCurveError):
        ec_scalar_mul(reduce_mod_p(3, 7), (1, 1), 2)


def test_group_law_axioms():
    rng = random.Random(1)
    E = reduce_mod_p(5, 103)
    for _ in range(50):
        P, Q, R = (random_point(E, rng) for _ in range(3))
        assert ec_add(E, P, Q) == ec_add(E, Q, P)
        assert ec_add(E, ec_add(E, P, Q), R) == ec_add(E, P, ec_add(E, Q, R))
        assert ec_add(E, P, ec_neg(E, P)) is None
        assert ec_add(E, P, None) == P
        assert E.contains(ec_add(E, P, Q))


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=10**6))
@settings(max_examples=100)
def test_scalar_mul_is_linear(j, k):
    E = reduce_mod_p(3, 1009)
    P = random_point(E, random.Random(7))
    assert ec_add(E, ec_scalar_mul(E, P, j), ec_scalar_mul(E, P, k)) == ec_scalar_mul(E, P, j + k)


@pytest.mark.parametrize("p,expected", [(7, {1, -1, 5, -5, 4, -4}), (13, {5, -5, 7, -7, 2, -2})])
def test_trace_candidates_examples(p, expected):
    assert trace_candidates(p) == expected


def test_trace_candidates_rejects_wrong_class():
    with pytest.raises(WrongResidueClassError):
        trace_candidates(11)


@pytest.mark.parametrize("p,a", [(7, 5), (29, 0), (13, 2)])
def test_trace_examples(p, a):
    assert trace_of_frobenius(reduce_mod_p(3, p)) == a


@pytest.mark.parametrize("n", [3, 5, 6, 7, 12])
def test_trace_matches_naive_count(n):
    for p in primes_up_to(3000):
        if (6 * n) % p == 0:
            continue
        E = reduce_mod_p(n, p)
        a = trace_of_frobenius(E)
        assert a == p + 1 - count_points_naive(E)
        assert a * a <= 4 * p
        if p % 3 == 2:
            assert a == 0
        else:
            assert a in trace_candidates(p)


def test_trace_independent_of_seed():
    for seed in range(5):
        for p in (7, 13, 19, 1009, 99991):
            E = reduce_mod_p(3, p)
            assert trace_of_frobenius(E, random.Random(seed)) == trace_of_frobenius(reduce_mod_p(3, p))


def test_order_divisible_by_three():
    # an empirical regularity of this family, checked rather than relied on
    for n in (3, 5, 7, 10, 11, 17):
        for p in primes_up_to(2000):
            if (6 * n) % p:
                assert reduce_mod_p(n, p).order() % 3 == 0


def test_order_annihilates_points():
    rng = random.Random(3)
    for p in (7, 13, 31, 1009, 65537, 104729):
        E = reduce_mod_p(3, p)
        N = E.order()
        for _ in range(10):
            assert ec_scalar_mul(E, random_point(E, rng), N) is None


@pytest.mark.parametrize("p,ell,expected", [(7, 29, True), (3, 13, False), (3, 7, False)])
def test_check_no_p_torsion(p, ell, expected):
    assert check_no_p_torsion(reduce_mod_p(3, ell), p) is expected
