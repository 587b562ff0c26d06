import pytest

from cube_obstruct.curve_global import conductor_of_model
from cube_obstruct.tate import count_points_general, discriminant, rst_transform, tate

# (a-invariants, conductor) for curves whose conductors are standard table entries
KNOWN = [
    ((0, -1, 1, -10, -20), 11),
    ((0, 0, 1, -1, 0), 37),
    ((0, 0, 1, -7, 6), 5077),
    ((1, 0, 1, 4, -6), 14),
    ((0, 0, 1, 0, -7), 27),
    ((0, 0, 0, 0, 1), 36),
    ((0, 0, 0, 0, -432), 27),
    ((0, 0, 0, -1, 0), 32),
    ((0, 0, 0, 1, 0), 64),
    ((0, 0, 0, 0, -3888), 243),
]


@pytest.mark.parametrize("a,N", KNOWN)
def test_known_conductors(a, N):
    assert conductor_of_model(a) == N


def test_e1_model_conductor():
    assert conductor_of_model((0, 0, 0, 0, -432)) == 27


def test_conductor_invariant_under_change_of_variables():
    base = (0, -1, 1, -10, -20)
    for r, s, t in [(1, 0, 0), (2, 1, -3), (-5, 2, 7)]:
        assert conductor_of_model(rst_transform(base, r, s, t)) == 11


def test_rescaled_model_is_minimised():
    # u = 2 scaling of y^2 = x^3 - 3888 (a4 -> 16 a4, a6 -> 64 a6)
    ld = tate((0, 0, 0, 0, -3888 * 64), 2)
    assert ld.conductor_exponent == 0
    assert ld.disc_valuation == 0


def test_e3_local_data():
    a = (0, 0, 0, 0, -3888)
    at2 = tate(a, 2)
    at3 = tate(a, 3)
    assert at2.good and at2.kodaira == "I0"
    assert at3.additive and at3.conductor_exponent == 5
    # a_2 of the minimal model is 0
    assert 2 + 1 - count_points_general(at2.minimal_model, 2) == 0


def test_discriminant_sign_and_value():
    assert discriminant((0, -1, 1, -10, -20)) == -161051
    assert discriminant((0, 0, 0, 0, -3888)) == -27 * 16 * 3888 ** 2
