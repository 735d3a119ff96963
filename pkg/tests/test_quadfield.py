import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringdensity import quadfield as qf
from ringdensity.errors import DomainError
from ringdensity.exact import primes_below, zeta_ratio
from ringdensity.quadfield import QuadraticForm


def test_kronecker_examples():
    assert qf.kronecker(-7, 2) == 1
    assert qf.kronecker(-7, 7) == 0
    assert qf.kronecker(2, 7) == 1
    assert {x * x % 7 for x in range(1, 7)} == {1, 2, 4}


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_legendre_matches_squares(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(-3 * p, 3 * p):
        expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
        assert qf.kronecker(a, p) == expected


@settings(max_examples=200)
@given(st.integers(-500, 500), st.integers(1, 200), st.integers(1, 200))
def test_kronecker_is_multiplicative_in_the_modulus(a, m1, m2):
    assert qf.kronecker(a, m1 * m2) == qf.kronecker(a, m1) * qf.kronecker(a, m2)


def test_fundamental_discriminants():
    assert qf.fundamental_discriminant(-7) == -7
    assert qf.fundamental_discriminant(-1) == -4
    assert qf.fundamental_discriminant(-5) == -20
    assert qf.is_fundamental(-4) and qf.is_fundamental(-8) and not qf.is_fundamental(-12)
    with pytest.raises(DomainError):
        qf.fundamental_discriminant(18)


def test_splitting_types():
    assert qf.splitting_type(-7, 2)[0] == qf.SPLIT
    assert qf.splitting_type(-7, 7) == (qf.RAMIFIED, 1)
    assert qf.splitting_type(-7, 3) == (qf.INERT, 1)


def test_reduced_forms_examples():
    t23 = qf.reduced_forms(-23)
    assert set(t23.forms) == {QuadraticForm(1, 1, 6), QuadraticForm(2, 1, 3), QuadraticForm(2, -1, 3)}
    assert t23.h == 3
    assert qf.reduced_forms(-4).forms == [QuadraticForm(1, 0, 1)]
    assert qf.reduced_forms(-163).h == 1


def test_composition_examples():
    f = QuadraticForm(2, 1, 3)
    one = qf.principal_form(-23)
    assert qf.compose(one, f) == f
    assert qf.compose(f, QuadraticForm(2, -1, 3)) == one
    assert qf.compose(f, f) == QuadraticForm(2, -1, 3)
    assert qf.form_power(f, 3) == one
    assert qf.form_order(f) == 3


def test_prime_class_orders():
    assert qf.prime_class_order(-23, 2) == 3
    assert qf.prime_class_order(-4, 5) == 1
    assert qf.prime_class_order(-23, 23) in (1, 2)
    assert qf.prime_class_order(-23, 5) == qf.INERT_MARKER


def _fundamental(lo, hi):
    return [d for d in range(lo, hi, -1) if qf.is_fundamental(d)]


def test_class_numbers_match_bruteforce_oracle():
    for d in _fundamental(-3, -10001):
        assert qf.reduced_forms(d).h == qf.class_number_bruteforce(d), d


@pytest.mark.parametrize("d", [-3, -4, -23, -47, -71, -84, -199, -399, -455, -1023])
def test_group_axioms(d):
    table = qf.class_group(d)
    h = table.h
    mul = table.composition
    e = table.index[table.principal]
    for i in range(h):
        assert mul[(e, i)] == i
        assert mul[(i, table.index[table.forms[i].inverse()])] == e
        for j in range(h):
            assert mul[(i, j)] == mul[(j, i)]
            for k in range(h):
                assert mul[(mul[(i, j)], k)] == mul[(i, mul[(j, k)])]


def test_split_prime_classes():
    rng = random.Random(50)
    pool = _fundamental(-3, -20001)
    for d in rng.sample(pool, 50):
        table = qf.class_group(d)
        for p in primes_below(50):
            if qf.splitting_type(d, p)[0] != qf.SPLIT:
                continue
            f = qf.prime_form(d, p)
            assert table.h % qf.form_order(f) == 0
            conj = QuadraticForm(f.a, -f.b, f.c)
            assert qf.compose(f, conj) == table.principal


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_torsion_case_analysis(t):
    N = 10
    for d in _fundamental(-4 * N**t - 1, -4 * N**t - 3000)[:15]:
        got = qf.t_torsion_violators(d, t, N)
        if t % 2:
            want = {p for p in primes_below(N) if qf.kronecker(d, p) in (0, 1)}
        else:
            want = {p for p in primes_below(N) if qf.kronecker(d, p) == 1}
        assert got == want, d


def test_torsion_trivial_group():
    for t in (1, 2, 5):
        assert qf.t_torsion_violators(-4, t, 1000) == set()
    iv = qf.torsion_density(-4, 1, 2, N=100)
    assert iv.hi == 1 and iv.lo > 0


def test_torsion_density_skips_orders_dividing_t():
    assert 2 not in qf.t_torsion_violators(-23, 3, 50)
    assert 2 in qf.t_torsion_violators(-23, 1, 50)


def test_character_products():
    f, g = qf.character_products(-7, 2, 100)
    assert f.width < Fraction(1, 100) and g.width < Fraction(1, 100)
    assert f.lo <= g.hi
    ratio = zeta_ratio(2, Fraction(1, 10**6))
    for d in (-7, -23, -163, -1000 + 1):
        if qf.is_fundamental(d):
            _, g, _ = qf.character_products_tol(d, 2, Fraction(1, 10**3))
            assert g.hi >= ratio.lo


def test_torsion_ratio_near_one_for_large_discriminants():
    for d in _fundamental(-4 * 10**3 - 1, -4 * 10**3 - 200):
        dens = qf.torsion_density(d, 1, 2, tol=Fraction(1, 10**3))
        f, _, _ = qf.character_products_tol(d, 2, Fraction(1, 10**3))
        r = dens / f
        assert Fraction(9, 10) <= r.lo and r.hi <= Fraction(11, 10)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(_fundamental(-3, -3000)), st.data())
def test_reduction_preserves_discriminant_and_class(d, data):
    table = qf.class_group(d)
    i = data.draw(st.integers(0, table.h - 1))
    j = data.draw(st.integers(0, table.h - 1))
    f, g = table.forms[i], table.forms[j]
    fg = qf.compose(f, g)
    assert fg.discriminant == d and fg.is_reduced()
    assert fg in table.index
    assert qf.form_power(f, table.h) == table.principal


def test_class_group_csv():
    text = qf.class_group_csv([-23, -4])
    lines = text.splitlines()
    assert lines[0] == "d_K,h,forms,prime_orders"
    assert lines[1].startswith("-23,3,")
