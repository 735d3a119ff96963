"""The acceptance suite: seventeen numbered checks with their tolerances.

Each check returns a :class:`CriterionResult`; :func:`run_all` runs a
selection and :func:`format_line` renders the one-line verdict.  The CLI
``verify`` command and the test-suite both call into this module.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import density, exact, factorstats, polyint, quadfield, sampler

MC_SEED = 20240601
SPLIT_SEED = 1414


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _timed(limit: float | None, start: float) -> tuple[float, bool]:
    took = time.perf_counter() - start
    return took, limit is None or took < limit


def c01_local_identities():
    start = time.perf_counter()
    bad = []
    for p in exact.primes_below(1001):
        for n in range(2, 7):
            a, b = exact.local_factors(p, n)
            if a * (1 + b) != 1 or not (Fraction(1, 2 * p**n) < b < Fraction(1, p**n)):
                bad.append((p, n))
    took, fast = _timed(5, start)
    return not bad and fast, f"{len(bad)} failures over p <= 1000, n in 2..6; {took:.2f}s (limit 5s)"


def c02_zeta_ratio():
    start = time.perf_counter()
    r2 = exact.zeta_ratio(2, Fraction(1, 10**6))
    r3 = exact.zeta_ratio(3, Fraction(1, 10**6))
    o2 = exact.zeta_interval(3) / exact.zeta_interval(2)
    o3 = exact.zeta_interval(4) / exact.zeta_interval(3)
    ok = (
        Fraction("0.7307629") in r2
        and r2.width <= Fraction(1, 10**6)
        and r3.width <= Fraction(1, 10**6)
        and o2.mid in r2
        and o3.mid in r3
    )
    took, fast = _timed(5, start)
    return ok and fast, f"n=2 {r2}, n=3 {r3}, series oracles {o2} / {o3}; {took:.2f}s (limit 5s)"


def c03_normalization():
    iv = density.prob_e_normalization(1000, 2)
    crude = density.prob_e_normalization(1000, 2, crude=True)
    ok = 1 in iv and iv.width <= Fraction(1, 10**4)
    return ok, (
        f"sum_(k<=1000) + tail = {iv}, width {float(iv.width):.2e} (need <= 1e-4); "
        f"with the plain k^-n tail: {crude}, width {float(crude.width):.2e}"
    )


def c04_empirical_e():
    start = time.perf_counter()
    acc = sampler.run(sampler.EnumSpec(2, 300), blocks=8)
    t_ex = time.perf_counter() - start
    e1 = abs(acc.prob_e(1) - float(density.prob_e(1, 2).mid))
    e2 = abs(acc.prob_e(2) - float(density.prob_e(2, 2).mid))
    start = time.perf_counter()
    spec = sampler.EnumSpec(2, 10**5, mode="montecarlo", samples=10**6, seed=MC_SEED)
    mc = sampler.run(spec)
    t_mc = time.perf_counter() - start
    m1 = abs(mc.prob_e(1) - 0.7308)
    ok = e1 <= 0.02 and e2 <= 0.01 and m1 <= 0.005 and t_ex <= 600 and t_mc <= 120
    return ok, (
        f"exhaustive H=300: |dP(e=1)|={e1:.4f} (<=0.02), |dP(e=2)|={e2:.4f} (<=0.01), {t_ex:.1f}s; "
        f"MC 1e6: |P(e=1)-0.7308|={m1:.4f} (<=0.005), {t_mc:.1f}s"
    )


def c05_counts():
    c1, p1 = sampler.count_irreducible(2, 50)
    c2, p2 = sampler.count_coprime_tuples(2, 100)
    d1 = sampler.relative_deviation(c1, p1)
    d2 = sampler.relative_deviation(c2, p2)
    ok = d1 <= Fraction(5, 100) and d2 <= Fraction(2, 100)
    return ok, f"#L_2(50)={c1} dev {float(d1):.4f} (<=0.05); #C_2(100)={c2} dev {float(d2):.4f} (<=0.02)"


def c06_rational_table():
    start = time.perf_counter()
    table = density.coefficient_table("rational", 2, 15, Fraction(1, 10**5))
    iv = table.intervals
    ok = all(iv[s].certainly_gt(iv[t]) for s in range(16) for t in range(s + 1, 16))
    took, fast = _timed(60, start)
    return ok and fast, (
        f"a_0..a_15 pairwise separated and decreasing: {ok}; N={table.N}, "
        f"max width {float(table.max_width()):.2e}; {took:.1f}s (limit 60s)"
    )


def c07_imaginary_quadratic():
    table = density.coefficient_table("quadratic:-7", 2, 4, Fraction(1, 10**5))
    a1, a2 = table.intervals[1], table.intervals[2]
    ok = a1.certainly_lt(a2)
    parts = [f"a1={a1} < a2={a2}: {ok}"]
    for d in (-4, -7, -23):
        rep = density.monotonicity_scan(f"quadratic:{d}", 2, 12, Fraction(1, 10**5))
        decided = all(r["relation"] == ">" for r in rep.rows if r["step"] == 2)
        ok = ok and decided and len(rep.rows) >= 13
        parts.append(f"d={d}: a_t > a_(t+2) for t<=12 {decided}")
    return ok, "; ".join(parts)


def c08_moments():
    parts = []
    ok = True
    tol = Fraction(1, 10**4)
    for prof in ("rational", "quadratic:-7"):
        E, V = density.expectation_variance(prof, 2, tol)
        s1, _ = density.moment(prof, 2, 1, tol)
        s2, c2 = density.moment(prof, 2, 2, tol)
        sv = s2 - s1.square()
        good = E.intersects(s1) and V.intersects(sv) and s2.intersects(c2)
        ok = ok and good
        parts.append(f"{prof}: E {E} ~ {s1}, Var {V} ~ {sv}, m2 {s2} ~ {c2}: {good}")
    return ok, "; ".join(parts)


def c09_independence():
    p2 = density.prob_X_contains({2}, None, 2)
    p3 = density.prob_X_contains({3}, None, 2)
    p23 = density.prob_X_contains({2, 3}, None, 2)
    ok = p2 == Fraction(1, 7) and p23 == p2 * p3
    return ok, f"P({{2}})={p2}, P({{2,3}})={p23} = {p2}*{p3}"


def c10_class_groups():
    start = time.perf_counter()
    h = {d: quadfield.reduced_forms(d).h for d in (-23, -4, -163)}
    ok = h == {-23: 3, -4: 1, -163: 1}
    mismatched = 0
    checked_groups = 0
    for d in range(-3, -10001, -1):
        if not quadfield.is_fundamental(d):
            continue
        table = quadfield.reduced_forms(d)
        if table.h != quadfield.class_number_bruteforce(d):
            mismatched += 1
        if table.h <= 16:
            if not _group_axioms(table):
                mismatched += 1
            checked_groups += 1
    ok = ok and mismatched == 0
    took = time.perf_counter() - start
    return ok, (
        f"h(-23,-4,-163)={h[-23]},{h[-4]},{h[-163]}; oracle/axiom failures over |d|<=1e4: {mismatched}; "
        f"{checked_groups} groups with h<=16 checked; {took:.1f}s"
    )


def _group_axioms(table) -> bool:
    mul = table.composition
    h = table.h
    e = table.index[table.principal]
    for i in range(h):
        if mul[(e, i)] != i:
            return False
        inv = table.index.get(table.forms[i].inverse())
        if inv is None or mul[(i, inv)] != e:
            return False
        for j in range(h):
            if mul[(i, j)] != mul[(j, i)]:
                return False
            ij = mul[(i, j)]
            for k in range(h):
                if mul[(ij, k)] != mul[(i, mul[(j, k)])]:
                    return False
    return True


def torsion_sample(t: int, count: int = 20, seed: int = 7) -> list[int]:
    """Deterministic sample of fundamental d < -4 * 10^t."""
    rng = random.Random(seed + t)
    top = -4 * 10**t - 1
    pool = [d for d in range(top, top - 20000, -1) if quadfield.is_fundamental(d)]
    return sorted(rng.sample(pool, count), reverse=True)


def c11_torsion_cases():
    bad = []
    for t in (1, 2, 3):
        for d in torsion_sample(t):
            got = quadfield.t_torsion_violators(d, t, 10)
            ks = {p: quadfield.kronecker(d, p) for p in exact.primes_below(10)}
            want = {p for p, k in ks.items() if (k in (0, 1) if t % 2 else k == 1)}
            if got != want:
                bad.append((t, d))
    return not bad, f"60 cases (t=1,2,3 x 20 discriminants), mismatches: {bad or 'none'}"


def c12_torsion_trend():
    tol = Fraction(1, 10**3)
    lo, hi = Fraction(9, 10), Fraction(11, 10)
    worst_lo = worst_hi = None
    outside = []
    ds = [d for d in range(-41, -1001, -1) if quadfield.is_fundamental(d)]
    for d in ds:
        tdens = quadfield.torsion_density(d, 1, 2, tol=tol)
        fn, _, _ = quadfield.character_products_tol(d, 2, tol)
        ratio = tdens / fn
        if not (lo <= ratio.lo and ratio.hi <= hi):
            outside.append(d)
        worst_lo = ratio.lo if worst_lo is None else min(worst_lo, ratio.lo)
        worst_hi = ratio.hi if worst_hi is None else max(worst_hi, ratio.hi)
    literal = quadfield.torsion_density(-43, 1, 2, N=10) / quadfield.character_products(-43, 2, 10)[0]
    return not outside, (
        f"{len(ds)} fundamental d in [-1000,-41] (d < -4*10^1): ratio intervals within "
        f"[{float(worst_lo):.4f}, {float(worst_hi):.4f}], outside [0.9,1.1]: {outside or 'none'}; "
        f"(products truncated at p<10 alone only give {literal})"
    )


def c13_censuses():
    ok = True
    parts = []
    c37 = factorstats.exact_factor_census(3, 7)
    formula = {i: factorstats.squarefree_partition_count(3, i, 7) for i in (1, 2, 3)}
    ok = ok and c37.squarefree == formula
    parts.append(f"(3,7) squarefree {c37.squarefree} vs formula {formula}")
    for m, p in ((2, 5), (3, 7), (3, 11)):
        c = factorstats.exact_factor_census(m, p)
        frac = c.squarefree_fraction()
        irr = factorstats.irreducible_count(m, p)
        good = frac == 1 - Fraction(1, p) and irr == c.squarefree[1]
        ok = ok and good
        parts.append(f"({m},{p}) sqf fraction {frac}, a_m(p)={irr} vs census {c.squarefree[1]}")
    return ok, "; ".join(parts)


def c14_limit_law():
    ok = all(
        factorstats.limit_density(m, i) == exact.stirling_density_row(m)[i]
        for m in range(1, 13)
        for i in range(1, m + 1)
    )
    start = time.perf_counter()
    census = factorstats.exact_factor_census(3, 101)
    took = time.perf_counter() - start
    f = census.fraction(2)
    ok = ok and abs(f - Fraction(1, 2)) <= Fraction(3, 100) and took < 60
    return ok, f"partition sums = Stirling rows for m<=12; f(3,2,101)={float(f):.5f}; census {took:.1f}s (limit 60s)"


def c15_dedekind_kummer():
    m, p = 2, 11
    sample = factorstats.empirical_splitting(m, p, 100, 10**5, SPLIT_SEED)
    census = factorstats.exact_factor_census(m, p)
    diffs = {i: abs(sample.fraction(i) - float(census.fraction(i))) for i in (1, 2)}
    ok = all(v <= 0.1 for v in diffs.values()) and sample.skip_fraction <= m / p + 0.05
    return ok, (
        f"|g^ - f| = {', '.join(f'i={i}: {v:.4f}' for i, v in diffs.items())} (<=0.1); "
        f"skip fraction {sample.skip_fraction:.4f} (<= m/p+0.05 = {m / p + 0.05:.4f})"
    )


def c16_sylvester():
    coeffs = {n: polyint.disc_monomial_coefficient(n) for n in (2, 3, 4)}
    d = polyint.discriminant(polyint.IntPolynomial((1, 1, 0, 1)))
    ok = all(abs(c) == (n - 1) ** (n - 1) for n, c in coeffs.items()) and d == -31
    return ok, f"coefficients {coeffs}; Disc(x^3+x+1) = {d}"


def c17_determinism():
    ok = True
    parts = []
    cases = [
        (sampler.EnumSpec(2, 40), ["rational", "quadratic:-7", "quadratic:5"], [-7, 5, -1]),
        (sampler.EnumSpec(3, 2), ["quadratic:-7"], [-7, -23]),
        (sampler.EnumSpec(2, 10**3, mode="montecarlo", samples=50000, seed=3), ["quadratic:-4"], [-1]),
    ]
    for spec, profiles, classes in cases:
        whole = sampler.run(spec, profiles, classes, blocks=1).to_json()
        split = sampler.run(spec, profiles, classes, blocks=8).to_json()
        again = sampler.run(spec, profiles, classes, blocks=1).to_json()
        good = whole == split == again
        ok = ok and good
        parts.append(f"n={spec.degree} H={spec.H} {spec.mode}: {good}")
    return ok, "; ".join(parts)


CRITERIA = {
    1: ("exact local identities", c01_local_identities),
    2: ("zeta ratio reproduction", c02_zeta_ratio),
    3: ("normalization of the e-distribution", c03_normalization),
    4: ("empirical e-distribution", c04_empirical_e),
    5: ("irreducible and coprime counts", c05_counts),
    6: ("rational coefficient table", c06_rational_table),
    7: ("Q(sqrt -7) non-monotonicity and quadratic comparisons", c07_imaginary_quadratic),
    8: ("moment cross-validation", c08_moments),
    9: ("independence of containment", c09_independence),
    10: ("class groups", c10_class_groups),
    11: ("torsion case analysis", c11_torsion_cases),
    12: ("torsion density trend", c12_torsion_trend),
    13: ("finite field censuses", c13_censuses),
    14: ("partition limit law", c14_limit_law),
    15: ("Dedekind-Kummer sampling", c15_dedekind_kummer),
    16: ("Sylvester coefficient lemma", c16_sylvester),
    17: ("determinism and merge", c17_determinism),
}


def run_criterion(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        passed, detail = False, f"error: {type(exc).__name__}: {exc}"
    return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - start)


def run_all(numbers=None, budget_seconds: float | None = None, on_result=None) -> list[CriterionResult]:
    results = []
    start = time.perf_counter()
    for number in numbers or sorted(CRITERIA):
        if budget_seconds is not None and time.perf_counter() - start > budget_seconds:
            res = CriterionResult(number, CRITERIA[number][0], False, "not run: time budget exhausted")
        else:
            res = run_criterion(number)
        results.append(res)
        if on_result is not None:
            on_result(res)
    return results


def format_line(res: CriterionResult) -> str:
    verdict = "PASS" if res.passed else "FAIL"
    return f"[{verdict}] {res.number:2d}. {res.title} ({res.seconds:.1f}s): {res.detail}"


if __name__ == "__main__":  # pragma: no cover
    import sys

    outcome = run_all(on_result=lambda r: print(format_line(r), flush=True))
    sys.exit(0 if all(r.passed for r in outcome) else 1)
