import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringdensity import density
from ringdensity.errors import DomainError
from ringdensity.exact import CertifiedInterval, local_factors, primes_below, zeta_ratio


def test_profiles():
    minus7 = density.make_profile("quadratic:-7")
    assert (minus7(2), minus7(3), minus7(7)) == (2, 1, 1)
    rational = density.make_profile("rational")
    assert all(rational(p) == 1 for p in primes_below(200))
    cyc = density.make_profile("cyclotomic:5")
    assert cyc.degree == 4
    assert cyc(11) == 4 and cyc(19) == 2 and cyc(2) == 1 and cyc(5) == 1
    with pytest.raises(DomainError):
        density.make_profile("quadratic:9")
    with pytest.raises(DomainError):
        density.make_profile("sextic:3")


def test_table_profile_round_trip():
    prof = density.make_profile("table:2=2,3=1;degree=2;default=1;galois")
    again = density.make_profile(prof.id)
    assert again.id == prof.id and again.galois
    assert [again(p) for p in (2, 3, 5)] == [2, 1, 1]


def agrees_to_printed_digits(iv, text):
    """The interval meets the rounding cell of a printed decimal."""
    digits = len(text.split(".")[1])
    half = Fraction(1, 2 * 10**digits)
    x = Fraction(text)
    return iv.lo <= x + half and x - half <= iv.hi


def test_prob_e_examples():
    assert Fraction("0.730763") in density.prob_e(1, 2)
    assert agrees_to_printed_digits(density.prob_e(2, 2), "0.0913454")
    assert density.prob_e(2, 2) == density.prob_e(1, 2) * Fraction(1, 8)


def test_prob_e_partial_sums_within_tail():
    ratio = zeta_ratio(2, Fraction(1, 10**6))
    for K in (10, 100, 400):
        partial = sum((density.prob_e(k, 2) for k in range(1, K + 1)), CertifiedInterval.point(0))
        crude_tail = Fraction(1, K)  # sum_{k > K} k^-2 <= 1/K
        assert partial.lo <= 1 <= partial.hi + ratio.hi * crude_tail


def test_normalization_with_sharp_tail():
    iv = density.prob_e_normalization(1000, 2)
    assert 1 in iv and iv.width <= Fraction(1, 10**4)
    crude = density.prob_e_normalization(1000, 2, crude=True)
    assert 1 in crude and crude.width > iv.width


def test_prob_ring_equals_examples():
    assert density.prob_ring_equals(1, 2) == zeta_ratio(2, Fraction(1, 10**6))
    assert agrees_to_printed_digits(density.prob_ring_equals(2, 2), "0.121794")
    assert density.prob_ring_equals(2, 2) == density.prob_ring_equals(1, 2) * Fraction(1, 6)
    for k, rad in [(4, 2), (12, 6), (75, 15), (1024, 2)]:
        assert density.prob_ring_equals(k, 3) == density.prob_ring_equals(rad, 3)


def test_prob_X_contains_examples():
    assert density.prob_X_contains({2}) == Fraction(1, 7)
    assert density.prob_X_contains(set()) == 1
    p23 = density.prob_X_contains({2, 3})
    assert p23 == Fraction(1, 91) == density.prob_X_contains({2}) * density.prob_X_contains({3})


@settings(max_examples=50)
@given(st.sets(st.sampled_from(primes_below(60)), max_size=5), st.integers(2, 5))
def test_containment_is_multiplicative(Y, n):
    expected = Fraction(1)
    for p in Y:
        expected *= density.prob_X_contains({p}, None, n)
    assert density.prob_X_contains(Y, None, n) == expected


def test_constant_coefficient_is_zeta_ratio():
    for prof in ("rational", "quadratic:-7", "cyclotomic:5"):
        table = density.coefficient_table(prof, 2, 3, Fraction(1, 10**4))
        assert table.intervals[0].intersects(zeta_ratio(2, Fraction(1, 10**6)))


def test_rational_table_is_strictly_decreasing():
    table = density.coefficient_table("rational", 2, 15, Fraction(1, 10**5))
    iv = table.intervals
    assert all(iv[t].certainly_gt(iv[t + 1]) for t in range(15))


def test_rational_table_brackets_total_mass():
    T = 30
    table = density.coefficient_table("rational", 2, T, Fraction(1, 10**5))
    lo = sum(table.intervals[t].lo for t in range(T + 1))
    hi = sum(table.intervals[t].hi for t in range(T + 1))
    # sum_{t > T} a_t <= f(2) / 2^(T+1) and f(2) < 2 for the rational profile
    assert lo <= 1 <= hi + Fraction(2, 2 ** (T + 1))


def _brute_subset_sums(profile, n, N, t_max):
    ps = primes_below(N)
    out = [Fraction(0)] * (t_max + 1)
    for k in range(len(ps) + 1):
        for Y in combinations(ps, k):
            t = sum(profile(p) for p in Y)
            if t <= t_max:
                term = Fraction(1)
                for p in Y:
                    term *= local_factors(p, n)[1]
                out[t] += term
    return out


@pytest.mark.parametrize("prof", ["rational", "quadratic:-7", "quadratic:5", "cyclotomic:5"])
@pytest.mark.parametrize("N", [5, 13])
def test_dp_matches_brute_force_subset_sums(prof, N):
    p = density.make_profile(prof)
    brute = _brute_subset_sums(p, 2, N, 8)
    assert density.exact_dp(p, 2, N, 8) == brute
    assert density.lambda_dp(p, 2, N, 8) == brute
    table = density.coefficient_table(p, 2, 8, N=N)
    assert all(brute[t] in table.dp[t] for t in range(9))


@pytest.mark.parametrize("prof", ["quadratic:-7", "cyclotomic:5", "cyclotomic:7"])
def test_lambda_grouping_matches_direct_dp(prof):
    assert density.lambda_dp(prof, 2, 60, 10) == density.exact_dp(prof, 2, 60, 10)


def test_b_table_is_submultiplicative():
    b = density.b_table("quadratic:-7", 2, 200, 8)
    for j in (1, 2):
        for t1 in range(1, 5):
            for t2 in range(1, 5):
                assert b[j][t1] * b[j][t2] >= b[j][t1 + t2]


def test_intervals_nest_as_cutoff_grows():
    prev = None
    for N in (64, 128, 256, 512):
        table = density.coefficient_table("quadratic:-7", 2, 6, N=N)
        if prev is not None:
            for t in range(7):
                assert prev.intervals[t].contains(table.intervals[t])
        prev = table


def test_expectation_is_linear_in_r():
    one = density.make_profile("table:;degree=1;default=1")
    two = density.make_profile("table:;degree=2;default=2")
    E1, _ = density.expectation_variance(one, 2, N=256)
    E2, _ = density.expectation_variance(two, 2, N=256)
    assert E2.lo == 2 * E1.lo and E2.hi == 2 * E1.hi


@pytest.mark.parametrize("prof", ["rational", "quadratic:-7"])
def test_moments_agree_across_methods(prof):
    tol = Fraction(1, 10**4)
    E, V = density.expectation_variance(prof, 2, tol)
    s1, c1 = density.moment(prof, 2, 1, tol)
    s2, c2 = density.moment(prof, 2, 2, tol)
    assert V.lo >= 0
    assert E.intersects(s1) and E.intersects(c1)
    assert s2.intersects(c2)
    assert V.intersects(s2 - s1.square())
    assert s2.intersects(V + E.square())


def test_higher_moments_agree():
    for s in (3, 4):
        series, comb = density.moment("quadratic:-7", 2, s, Fraction(1, 10**3))
        assert series.intersects(comb)


def test_thresholds():
    assert density.general_threshold(2) == 0
    assert density.galois_threshold(2) == 0
    assert density.general_threshold(1) == 0


def test_minus7_monotonicity():
    rep = density.monotonicity_scan("quadratic:-7", 2, 12)
    assert rep.general_threshold == 0 and rep.galois_threshold == 0
    assert all(r["relation"] == ">" for r in rep.rows if r["step"] == 2)
    table = density.coefficient_table("quadratic:-7", 2, 4, Fraction(1, 10**5))
    assert table.intervals[1].certainly_lt(table.intervals[2])


def test_rational_monotonicity_scan():
    rep = density.monotonicity_scan("rational", 2, 10)
    assert all(r["relation"] == ">" for r in rep.rows)


def test_lambda_set_small():
    assert density.lambda_set(2, 3) == ((3, 0), (1, 1))
    assert density.lambda_set(4, 4, divisors_only=True) == ((4, 0, 0, 0), (2, 1, 0, 0), (0, 2, 0, 0), (0, 0, 0, 1))
    assert density.addition_surjective(2, 2, 2)
    assert not density.addition_surjective(2, 1, 1)  # (0, 1) is not a sum of two (1, 0)


def test_coefficient_rows_render():
    table = density.coefficient_table("quadratic:-7", 2, 6, Fraction(1, 10**4))
    rows = density.coefficient_rows(table)
    assert len(rows) == 7
    assert rows[1]["vs_next"] == "<"
    assert all(Fraction(r["lo"]) <= Fraction(r["hi"]) for r in rows)
    text = density.rows_to_csv(rows)
    assert text.splitlines()[0].startswith("t,lo,hi")


def test_growth_table_runs():
    table = density.coefficient_table("rational", 2, 10, Fraction(1, 10**4))
    rows = density.growth_table(table)
    assert rows and all(r["ratio"] > 0 for r in rows)
