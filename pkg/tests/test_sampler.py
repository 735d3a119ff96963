import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringdensity import density, sampler
from ringdensity.errors import BudgetExceeded, DomainError
from ringdensity.polyint import IntPolynomial, e_invariant, normalize
from ringdensity.sampler import EnumSpec, StatAccumulator


def reps(spec):
    return [r.poly for r in sampler.enumerate_representatives(spec)]


def test_degree_one_height_one():
    assert sorted(p.coeffs for p in reps(EnumSpec(1, 1))) == [(-1, 1), (0, 1), (1, 1)]
    count, _ = sampler.count_irreducible(1, 1)
    assert count == 6


def test_quadratic_height_one():
    polys = set(reps(EnumSpec(2, 1)))
    assert IntPolynomial((-1, 0, 1)) not in polys
    assert IntPolynomial((1, 1, 1)) in polys


def _quadratic_oracle(H):
    """Primitive quadratics with positive lead and non-square discriminant."""
    n = 0
    for a, b, c in product(range(1, H + 1), range(-H, H + 1), range(-H, H + 1)):
        D = b * b - 4 * a * c
        if math.gcd(a, b, c) == 1 and not (D >= 0 and math.isqrt(D) ** 2 == D):
            n += 1
    return n


def test_quadratic_count_matches_oracle():
    assert len(reps(EnumSpec(2, 10))) == _quadratic_oracle(10)


def test_every_representative_is_normalized():
    for poly in reps(EnumSpec(3, 2)):
        assert normalize(poly.coeffs).poly == poly


def test_coprime_tuples_small():
    assert sampler.count_coprime_tuples(2, 1)[0] == 8


@pytest.mark.parametrize("n,H", [(1, 3), (2, 4), (3, 1)])
def test_count_bounded_by_all_tuples(n, H):
    count, _ = sampler.count_irreducible(n, H)
    assert count <= (2 * H + 1) ** (n + 1)


def test_counts_near_main_terms():
    c, pred = sampler.count_irreducible(2, 50)
    assert sampler.relative_deviation(c, pred) <= 0.05
    c, pred = sampler.count_coprime_tuples(2, 100)
    assert sampler.relative_deviation(c, pred) <= 0.02
    assert c < 201**2


def test_budget_refusal_reports_requirement():
    with pytest.raises(BudgetExceeded) as info:
        list(sampler.enumerate_representatives(EnumSpec(3, 30), budget=1000))
    assert info.value.required == EnumSpec(3, 30).size


def test_seed_required_for_montecarlo():
    with pytest.raises(DomainError):
        EnumSpec(2, 10, mode="montecarlo", samples=10)


def test_montecarlo_replay():
    spec = EnumSpec(2, 1000, mode="montecarlo", samples=3000, seed=11)
    assert list(sampler.mc_sample(spec)) == list(sampler.mc_sample(spec))
    other = EnumSpec(2, 1000, mode="montecarlo", samples=3000, seed=12)
    assert list(sampler.mc_sample(spec)) != list(sampler.mc_sample(other))


def test_xsize_examples():
    rational = density.make_profile("rational")
    minus7 = density.make_profile("quadratic:-7")
    five = density.make_profile("quadratic:5")
    for prof in (rational, minus7, five):
        assert sampler.xsize(1, prof) == 0
    assert sampler.xsize(2, minus7) == 2
    assert sampler.xsize(2, five) == 1


def test_exceptional_quadratics_are_separated():
    # x^2 + x + 2 has discriminant -7 and generates Q(sqrt -7) itself
    rep = normalize([2, 1, 1])
    acc = sampler.accumulate([rep], ["quadratic:-7", "rational"])
    assert acc.exceptional_count == 1
    assert acc.xsize_histograms["quadratic:-7"] == {}
    assert acc.xsize_histograms["rational"] == {0: 1}


PROFILES = ["rational", "quadratic:-7", "quadratic:5"]


def test_fast_path_matches_generic_path():
    spec = EnumSpec(2, 15)
    fast = sampler.run(spec, PROFILES, [-7, 5, -1], fast=True)
    slow = sampler.run(spec, PROFILES, [-7, 5, -1], fast=False)
    assert fast.to_json() == slow.to_json()
    mc = EnumSpec(2, 500, mode="montecarlo", samples=5000, seed=5)
    assert sampler.run(mc, PROFILES, [-7], fast=True).to_json() == \
        sampler.run(mc, PROFILES, [-7], fast=False).to_json()


@pytest.mark.parametrize("blocks", [2, 3, 7])
def test_partitioned_run_is_bit_identical(blocks):
    spec = EnumSpec(3, 2)
    whole = sampler.run(spec, PROFILES, [-7, -23], blocks=1)
    split = sampler.run(spec, PROFILES, [-7, -23], blocks=blocks)
    assert whole.to_json() == split.to_json()


def test_resume_from_log(tmp_path):
    spec = EnumSpec(2, 12)
    log = tmp_path / "run.jsonl"
    first = sampler.run(spec, ["quadratic:-7"], blocks=4, log_path=str(log))
    lines = log.read_text().splitlines()
    log.write_text("\n".join(lines[:2]) + "\n")
    again = sampler.run(spec, ["quadratic:-7"], blocks=4, log_path=str(log))
    assert first.to_json() == again.to_json()
    assert len(log.read_text().splitlines()) == 4


def test_workers_do_not_change_results():
    spec = EnumSpec(2, 20)
    assert sampler.run(spec, PROFILES, blocks=4, workers=2, fast=False).to_json() == \
        sampler.run(spec, PROFILES, fast=False).to_json()


def test_accumulator_json_round_trip():
    acc = sampler.run(EnumSpec(2, 6), PROFILES, [-7], split_primes=[5])
    assert StatAccumulator.from_json(acc.to_json()).to_json() == acc.to_json()


def _acc_from(seed):
    spec = EnumSpec(2, 50, mode="montecarlo", samples=200, seed=seed)
    return sampler.run(spec, PROFILES, [-7])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_merge_is_associative_and_commutative(s1, s2, s3):
    a, b, c = _acc_from(s1), _acc_from(s2), _acc_from(s3)
    assert (a + b).to_json() == (b + a).to_json()
    assert ((a + b) + c).to_json() == (a + (b + c)).to_json()


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 40))
def test_block_split_invariance_property(H, blocks):
    spec = EnumSpec(2, H)
    assert sampler.run(spec, PROFILES, [-7], blocks=blocks).to_json() == \
        sampler.run(spec, PROFILES, [-7]).to_json()


def test_e_histogram_is_gcd_of_upper_coefficients():
    acc = sampler.accumulate(sampler.enumerate_representatives(EnumSpec(2, 5)))
    direct = {}
    for rep in sampler.enumerate_representatives(EnumSpec(2, 5)):
        direct[e_invariant(rep)] = direct.get(e_invariant(rep), 0) + 1
    assert acc.e_histogram == direct


def test_empirical_e_distribution_height_300():
    acc = sampler.run(EnumSpec(2, 300), blocks=4)
    for k in (1, 2, 3):
        assert abs(acc.prob_e(k) - float(density.prob_e(k, 2).mid)) <= 0.02


def test_montecarlo_e_distribution():
    spec = EnumSpec(2, 10**5, mode="montecarlo", samples=200_000, seed=2024)
    acc = sampler.run(spec)
    # binomial noise at this sample size is about 0.001
    assert abs(acc.prob_e(1) - 0.7308) <= 0.005


def test_disc_square_class_fraction_decreases_with_height():
    fractions = []
    for H in (25, 50, 100, 200):
        acc = sampler.run(EnumSpec(2, H), disc_classes=[-7])
        fractions.append(acc.disc_squareclass_counts.get(-7, 0) / acc.total_weight)
    assert all(x > y for x, y in zip(fractions, fractions[1:]))
