import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import eval_poly, random_poly
from logdiff.exprparse import parse_poly
from logdiff.polyring import (
    LinearForm,
    NotDivisibleError,
    Poly,
    apply_linear_map,
    coordinates,
    divides_power,
    exact_divide,
)


def P(text, nvars):
    return parse_poly(text, nvars)


# -- ring operations --------------------------------------------------------

def test_difference_of_squares():
    assert P("x+y", 2) * P("x-y", 2) == P("x^2 - y^2", 2)


def test_multiplication_by_zero_absorbs():
    assert P("x", 1) * Poly.zero(1) == Poly.zero(1)
    assert not (P("x", 1) * Poly.zero(1)).terms


def test_cube_expansion_term_count_and_coefficient():
    cube = P("(x+y+z)^3", 3)
    assert len(cube.terms) == 10
    # multinomial coefficient 3!/(1!1!1!)
    assert cube.terms[(1, 1, 1)] == factorial(3)


def test_scalar_and_power_arithmetic():
    x = P("x", 1)
    assert x * Fraction(1, 2) == P("1/2*x", 1)
    assert (x + 1) ** 2 == P("x^2 + 2*x + 1", 1)
    with pytest.raises(ValueError):
        x ** -1


def test_mixed_dimension_rejected():
    with pytest.raises(ValueError):
        P("x", 1) + P("x", 2)
    with pytest.raises(ValueError):
        P("x", 1) * P("y", 2)


def test_zero_degree_marker():
    assert Poly.zero(2).degree is None
    assert Poly.one(2).degree == 0
    assert P("x*y^2", 2).degree == 3


def test_canonical_form_drops_zero_coefficients():
    p = Poly(2, {(1, 0): 1, (0, 1): 0})
    assert (0, 1) not in p.terms
    q = P("x + y", 2) - P("y", 2)
    assert set(q.terms) == {(1, 0)}


# -- exact division ----------------------------------------------------------

def test_exact_divide_common_factor():
    assert exact_divide(P("x^2*y + x*y^2", 2), P("x*y", 2)) == P("x + y", 2)


def test_exact_divide_signals_nondivisibility():
    with pytest.raises(NotDivisibleError):
        exact_divide(P("x^2 + 1", 1), P("x", 1))


def test_exact_divide_multiply_back():
    a = P("(x+y)^3 * (x-y)", 2)
    b = P("(x+y)^2", 2)
    q = exact_divide(a, b)
    assert q * b == a
    assert q == P("(x+y)*(x-y)", 2)


def test_exact_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        exact_divide(P("x", 1), Poly.zero(1))


def test_divides_power_examples():
    assert divides_power(P("x", 1), 2, P("x^3 + x^2", 1))
    assert not divides_power(P("x+y", 2), 1, P("x^2 + y^2", 2))
    assert divides_power(P("x+y", 2), 0, P("x^2 + y^2", 2))


def test_divides_power_refuted_by_evaluation():
    # any multiple of x+y vanishes at (1, -1); x^2+y^2 does not
    a = P("x^2 + y^2", 2)
    assert eval_poly(a, (1, -1)) == 2
    assert not divides_power(P("x+y", 2), 1, a)


# -- linear maps --------------------------------------------------------------

def test_apply_linear_map_identity_swap_shear():
    fs = coordinates(2)
    assert apply_linear_map([[1, 0], [0, 1]], fs) == fs
    assert apply_linear_map([[0, 1], [1, 0]], fs) == (fs[1], fs[0])
    assert apply_linear_map([[1, 1], [0, 1]], fs) == (fs[0] + fs[1], fs[1])


def test_apply_linear_map_size_mismatch():
    with pytest.raises(ValueError):
        apply_linear_map([[1, 0]], coordinates(2))


# -- linear forms --------------------------------------------------------------

def test_linear_form_validation_and_conversion():
    f = LinearForm((1, -2))
    assert f.as_poly() == P("x - 2*y", 2)
    with pytest.raises(ValueError):
        LinearForm((0, 0))


def test_linear_form_proportionality():
    assert LinearForm((1, 2)).proportional_to(LinearForm((2, 4)))
    assert not LinearForm((1, 2)).proportional_to(LinearForm((2, 1)))


# -- algebraic laws -------------------------------------------------------------

_coeffs = st.integers(min_value=-6, max_value=6)
_monos = st.tuples(st.integers(0, 3), st.integers(0, 3))
_polys = st.dictionaries(_monos, _coeffs, max_size=4).map(lambda d: Poly(2, d))


@settings(max_examples=60)
@given(_polys, _polys, _polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60)
@given(_polys, _polys)
def test_division_inverts_multiplication(a, b):
    if b:
        assert exact_divide(a * b, b) == a


def test_divides_power_matches_exact_divide():
    rng = random.Random(31)
    for _ in range(100):
        f = random_poly(rng, 2, max_degree=2, nonzero=True)
        a = random_poly(rng, 2, max_degree=4)
        t = rng.randint(0, 2)
        try:
            exact_divide(a, f ** t)
            expected = True
        except NotDivisibleError:
            expected = False
        assert divides_power(f, t, a) == expected
