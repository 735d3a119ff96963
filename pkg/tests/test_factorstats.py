import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringdensity import factorstats as fs
from ringdensity import gfp
from ringdensity.errors import BudgetExceeded, DomainError
from ringdensity.exact import primes_below, stirling_density_row


def profile(coeffs, p):
    return fs.factor_profile(fs.ModPPoly(p, tuple(coeffs)))


def test_profile_examples():
    assert profile([1, 0, 1], 3).distinct_count == 1
    sq = profile([0, 0, 1], 5)
    assert sq.distinct_count == 1 and sq.multiplicities == (2,) and not sq.squarefree
    f = gfp.mul(gfp.mul([0, 1], [1, 1], 3), [1, 0, 1], 3)
    prof = profile(f, 3)
    assert prof.distinct_count == 3
    assert prof.degrees == (1, 1, 2)


def test_profile_rejects_small_p():
    with pytest.raises(DomainError):
        profile([1, 0, 0, 1], 3)


def test_irreducible_counts():
    for p in primes_below(50):
        assert fs.irreducible_count(1, p) == p
    assert fs.irreducible_count(2, 3) == 3
    assert fs.irreducible_count(3, 2) == 2


def _brute_irreducible(m, p):
    # monic degree-m polynomials with no monic factor of degree 1..m/2
    def monics(d):
        for idx in range(p**d):
            c = []
            for _ in range(d):
                c.append(idx % p)
                idx //= p
            yield c + [1]

    count = 0
    for f in monics(m):
        if all(gfp.mod(f, g, p) for d in range(1, m // 2 + 1) for g in monics(d)):
            count += 1
    return count


@pytest.mark.parametrize("m,p", [(2, 3), (2, 5), (3, 2), (3, 5), (4, 3)])
def test_irreducible_count_matches_brute_force(m, p):
    assert fs.irreducible_count(m, p) == _brute_irreducible(m, p)


def test_census_37_against_binomial_formula():
    c = fs.exact_factor_census(3, 7)
    assert c.total == 7**3
    for i in (1, 2, 3):
        assert c.squarefree[i] == fs.squarefree_partition_count(3, i, 7)


def _grid(limit):
    for m in range(2, 7):
        for p in primes_below(limit):
            if p > m and p**m <= limit:
                yield m, p


def test_census_grid_identities():
    for m, p in _grid(10**5):
        c = fs.exact_factor_census(m, p)
        assert c.total == p**m
        assert c.squarefree_fraction() == 1 - Fraction(1, p)
        assert p**m - c.squarefree_total <= p ** (m - 1) * m
        for i in range(1, m + 1):
            assert c.squarefree[i] == fs.squarefree_partition_count(m, i, p)
            gap = abs(c.fraction(i) - fs.limit_density(m, i))
            assert gap <= Fraction(2 * m * m, p)


@pytest.mark.parametrize("m,p", [(2, 3), (2, 7), (3, 5), (4, 5), (3, 11)])
def test_compiled_census_matches_reference(m, p):
    fast = fs.exact_factor_census(m, p)
    slow = fs.reference_census(m, p)
    assert fast.counts == slow.counts and fast.squarefree == slow.squarefree


def test_census_blocks_and_workers():
    whole = fs.exact_factor_census(3, 23)
    assert fs.exact_factor_census(3, 23, blocks=5) == whole
    assert fs.exact_factor_census(3, 23, blocks=4, workers=2) == whole


def test_census_budget():
    with pytest.raises(BudgetExceeded) as info:
        fs.exact_factor_census(4, 101, budget=1000)
    assert info.value.required == 101**4


def test_limit_density_examples():
    assert fs.limit_density(3, 2) == Fraction(1, 2)
    for m in range(1, 13):
        assert fs.limit_density(m, m) == Fraction(1, math.factorial(m))
        row = [fs.limit_density(m, i) for i in range(1, m + 1)]
        assert sum(row) == 1
        assert row == [stirling_density_row(m)[i] for i in range(1, m + 1)]


def test_limit_law_at_p_101():
    c = fs.exact_factor_census(3, 101)
    assert abs(c.fraction(2) - Fraction(1, 2)) <= Fraction(3, 100)


def _poly_pow(f, k, p):
    out = [1]
    for _ in range(k):
        out = gfp.mul(out, f, p)
    return out


def test_reconstruction_from_components():
    rng = random.Random(7)
    small = [p for p in primes_below(60)]
    for _ in range(10**4):
        m = rng.randint(1, 6)
        p = rng.choice([q for q in small if q > m])
        f = [rng.randrange(p) for _ in range(m)] + [1]
        prod = [1]
        for comp, _, k in fs.distinct_degree_components(f, p):
            prod = gfp.mul(prod, _poly_pow(comp, k, p), p)
        assert gfp.trim(prod) == gfp.trim(f)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=2, max_size=4), st.integers(1, 3))
def test_repeated_factor_is_detected(g, k):
    p = 13
    g = gfp.monic(gfp.trim(list(g) + [1]), p)
    f = _poly_pow(g, k + 1, p)
    if len(f) - 1 >= p:
        return
    prof = profile(f, p)
    assert not prof.squarefree
    assert prof.total_degree == len(f) - 1


def test_empirical_splitting_matches_census():
    sample = fs.empirical_splitting(2, 11, 100, 20000, seed=1414)
    census = fs.exact_factor_census(2, 11)
    for i in (1, 2):
        assert abs(sample.fraction(i) - float(census.fraction(i))) <= 0.1
    again = fs.empirical_splitting(2, 11, 100, 20000, seed=1414)
    assert again == sample


def test_skip_fraction_for_large_p():
    sample = fs.empirical_splitting(3, 101, 50, 5000, seed=3)
    assert sample.skip_fraction <= 3 / 101 + 0.02


def test_census_csv():
    text = fs.census_csv(fs.exact_factor_census(2, 5))
    assert text.splitlines()[0] == "m,p,i,count,fraction_lo,fraction_hi"
    assert len(text.splitlines()) == 3
