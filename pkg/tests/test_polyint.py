import math
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ringdensity.errors import DomainError
from ringdensity.polyint import (
    IntPolynomial,
    NormalizedRep,
    Rejection,
    _factor_search,
    cubic_discriminant,
    disc_monomial_coefficient,
    discriminant,
    divide_exact,
    e_invariant,
    is_irreducible,
    is_squarefree,
    normalize,
    square_class,
    sylvester_matrix,
)


def P(*coeffs):
    return IntPolynomial(tuple(coeffs))


def test_normalize_examples():
    rep = normalize([6, 4, 2])
    assert isinstance(rep, NormalizedRep)
    assert rep.poly == P(3, 2, 1)
    assert normalize([1, 0, -1]) is Rejection.REDUCIBLE
    assert normalize([3, 4, 2]).poly == P(3, 4, 2)
    assert normalize([0, 0]) is Rejection.ZERO
    assert normalize([1, 2, 0], degree=2) is Rejection.DEGREE_MISMATCH


def test_normalize_makes_leading_positive():
    assert normalize([-3, -4, -2]).poly == P(3, 4, 2)


def test_e_invariant_examples():
    assert e_invariant(normalize([3, 4, 2])) == 2
    assert e_invariant(normalize([5, 7, 1])) == 1
    poly = P(2, 3, 9, 6)
    if is_irreducible(poly):
        assert e_invariant(poly) == 3


def test_discriminant_examples():
    assert discriminant(P(1, 1, 0, 1)) == -31
    assert discriminant(P(-2, 0, 1)) == 8
    for a, b, c in [(1, 1, 1), (2, 4, 3), (5, -3, 7), (-1, 0, 4)]:
        assert discriminant(P(c, b, a)) == b * b - 4 * a * c


def test_cubic_closed_form_on_depressed_cubic():
    # x^3 + p x + q has discriminant -4p^3 - 27q^2
    assert cubic_discriminant(1, 0, 1, 1) == -4 - 27


def test_sylvester_shape():
    f = P(1, 1, 0, 1)
    m = sylvester_matrix(f, f.derivative())
    assert len(m) == 5 and all(len(row) == 5 for row in m)
    assert m[0][:4] == [1, 0, 1, 1]


def test_disc_monomial_coefficients():
    assert disc_monomial_coefficient(2) == 1
    assert disc_monomial_coefficient(3) == -4
    assert abs(disc_monomial_coefficient(4)) == 27
    for n in range(2, 7):
        assert abs(disc_monomial_coefficient(n)) == (n - 1) ** (n - 1)


def test_irreducibility_examples():
    assert is_irreducible(P(-2, 0, 1))
    assert not is_irreducible(P(4, 0, 0, 0, 1))
    assert is_irreducible(P(3, 4, 2))
    assert divide_exact(P(4, 0, 0, 0, 1), P(2, -2, 1)) == P(2, 2, 1)


def test_irreducible_requires_primitive():
    with pytest.raises(DomainError):
        is_irreducible(P(2, 4))


def test_square_class_examples():
    assert square_class(18) == (2, 3)
    assert square_class(-8) == (-2, 2)
    assert square_class(-31) == (-31, 1)
    assert is_squarefree(-7) and not is_squarefree(12)


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_irreducibility_matches_factor_search_small_height(degree):
    H = 2 if degree == 4 else 4
    for coeffs in product(range(-H, H + 1), repeat=degree + 1):
        if coeffs[-1] <= 0 or math.gcd(*coeffs) != 1:
            continue
        poly = IntPolynomial(coeffs)
        assert is_irreducible(poly) == (_factor_search(poly) is None), coeffs


coef = st.integers(min_value=-10, max_value=10)


@settings(max_examples=150, deadline=None)
@given(st.lists(coef, min_size=4, max_size=4), st.integers(min_value=1, max_value=10))
def test_irreducibility_matches_factor_search_quartics(low, lead):
    coeffs = tuple(low) + (lead,)
    assume(math.gcd(*coeffs) == 1)
    poly = IntPolynomial(coeffs)
    assert is_irreducible(poly) == (_factor_search(poly) is None)


@settings(max_examples=100, deadline=None)
@given(st.lists(coef, min_size=2, max_size=3), st.lists(coef, min_size=2, max_size=3))
def test_products_are_reducible(f, g):
    assume(f[-1] != 0 and g[-1] != 0)
    prod = IntPolynomial(tuple(f)) * IntPolynomial(tuple(g))
    c = prod.content
    prim = IntPolynomial(tuple(a // c for a in prod.coeffs))
    if prim.leading < 0:
        prim = -prim
    assert not is_irreducible(prim)
    assert normalize(prod.coeffs) is Rejection.REDUCIBLE


@settings(max_examples=500, deadline=None)
@given(st.integers(1, 10), coef, coef, coef)
def test_sylvester_matches_cubic_formula(a, b, c, d):
    assert discriminant(P(d, c, b, a)) == cubic_discriminant(a, b, c, d)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=5, unique=True), st.sampled_from([1, -1]))
def test_distinct_linear_factors_have_nonzero_disc(roots, sign):
    poly = P(sign)
    for r in roots:
        poly = poly * P(-r, 1)
    D = discriminant(poly)
    assert D != 0
    assert discriminant(-poly) == D


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6))
def test_square_class_reconstructs(D):
    assume(D != 0)
    m, y = square_class(D)
    assert m * y * y == D
    assert y > 0 and is_squarefree(m)
