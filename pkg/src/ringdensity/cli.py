"""Command-line interface.

Every subcommand prints one report to standard output, either as JSON

    {"command": ..., "config": {...}, "rows": [...], "warnings": [...]}

(plus "timings" with ``--timings``) or, with ``--format csv``, as the rows
alone.  Certified values carry their exact rational endpoints (lo, hi) and
outward-rounded decimals (lo_dec, hi_dec).

Exit status: 0 on success, 1 when a verification fails, 2 on a configuration
error and 3 when a budget would be exceeded (the message names the budget
that would suffice).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import acceptance, density, exact, factorstats, quadfield, sampler
from .errors import BudgetExceeded, ConsistencyError, DomainError

THREADS_ENV = "RINGDENSITY_THREADS"
DIGITS = 12
GRID_BITS = 64


class ConfigError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def interval_fields(iv: exact.CertifiedInterval, prefix: str = "") -> dict:
    """lo/hi as rationals plus decimals; wide-denominator bounds are widened
    outward onto the grid 2^-64 so the strings stay readable."""
    if iv.lo != iv.hi:
        iv = iv.rounded(GRID_BITS)
    return {prefix + k: v for k, v in iv.as_dict(DIGITS).items()}


def exact_fields(x: Fraction, prefix: str = "") -> dict:
    return interval_fields(exact.CertifiedInterval.point(x), prefix)


# ---------------------------------------------------------------------------
# subcommands: each returns (rows, warnings, status)


def cmd_constants(args):
    rows = []
    for p in args.p:
        alpha, beta = exact.local_factors(p, args.n)
        rows.append({"quantity": "alpha", "p": p, "n": args.n, **exact_fields(alpha)})
        rows.append({"quantity": "beta", "p": p, "n": args.n, **exact_fields(beta)})
    r = exact.zeta_ratio(args.n, args.tol)
    rows.append({"quantity": "zeta_ratio", "p": "", "n": args.n, **interval_fields(r)})
    return rows, [], 0


def cmd_density_e(args):
    rows = [{"k": k, "n": args.n, **interval_fields(density.prob_e(k, args.n, args.tol))} for k in args.k]
    return rows, [], 0


def cmd_density_ring(args):
    rows = [
        {"k": k, "n": args.n, **interval_fields(density.prob_ring_equals(k, args.n, args.tol))}
        for k in args.k
    ]
    return rows, [], 0


def cmd_density_xsize(args):
    table = density.coefficient_table(args.profile, args.n, args.tmax, args.tol, max_N=args.max_N)
    rows = density.coefficient_rows(table, DIGITS)
    for row in rows:
        row["N"] = table.N
    warnings = []
    if any(r["vs_next"] == "?" for r in rows[:-1]):
        warnings.append("some neighbouring coefficients are not separated at this tolerance")
    return rows, warnings, 0


def cmd_moments(args):
    rows = []
    E, V = density.expectation_variance(args.profile, args.n, args.tol, max_N=args.max_N)
    rows.append({"quantity": "E", "s": 1, "method": "direct", **interval_fields(E)})
    rows.append({"quantity": "Var", "s": 2, "method": "direct", **interval_fields(V)})
    for s in range(1, args.s + 1):
        series, comb = density.moment(args.profile, args.n, s, args.tol, max_N=args.max_N)
        rows.append({"quantity": "moment", "s": s, "method": "series", **interval_fields(series)})
        rows.append({"quantity": "moment", "s": s, "method": "inclusion-exclusion", **interval_fields(comb)})
    warnings = [
        f"series and inclusion-exclusion moments disagree at s={r1['s']}"
        for r1, r2 in zip(rows[2::2], rows[3::2])
        if Fraction(r1["hi"]) < Fraction(r2["lo"]) or Fraction(r2["hi"]) < Fraction(r1["lo"])
    ]
    return rows, warnings, 1 if warnings else 0


def cmd_monotonicity(args):
    rep = density.monotonicity_scan(args.profile, args.n, args.tmax, args.tol, max_N=args.max_N)
    rows = [{**r, "d": rep.d, "N": rep.N} for r in rep.rows]
    warnings = []
    if rep.undecided():
        warnings.append(f"{len(rep.undecided())} comparisons undecided at this tolerance")
    warnings.append(
        f"thresholds: lcm step {rep.d1} from t >= {rep.general_threshold}"
        + (f", Galois step {rep.d} from t >= {rep.galois_threshold}" if rep.galois_threshold is not None else "")
    )
    return rows, warnings, 0


def _enum_rows(acc: sampler.StatAccumulator) -> list[dict]:
    rows = [{"table": "summary", "key": "drawn", "count": acc.drawn, "fraction": ""},
            {"table": "summary", "key": "accepted", "count": acc.total_weight, "fraction": ""},
            {"table": "summary", "key": "exceptional", "count": acc.exceptional_count, "fraction": ""}]
    total = acc.total_weight or 1
    for k, c in sorted(acc.e_histogram.items()):
        rows.append({"table": "e", "key": k, "count": c, "fraction": c / total})
    for pid, hist in sorted(acc.xsize_histograms.items()):
        sub = sum(hist.values()) or 1
        for t, c in sorted(hist.items()):
            rows.append({"table": f"xsize[{pid}]", "key": t, "count": c, "fraction": c / sub})
    for m, c in sorted(acc.disc_squareclass_counts.items()):
        rows.append({"table": "disc_squareclass", "key": m, "count": c, "fraction": c / total})
    for (p, i), c in sorted(acc.splitting_histogram.items()):
        rows.append({"table": f"split[{p}]", "key": i, "count": c, "fraction": ""})
    return rows


def cmd_enumerate(args):
    if args.mode == "montecarlo" and args.seed is None:
        raise ConfigError("--seed is required for montecarlo mode")
    spec = sampler.EnumSpec(args.n, args.H, args.mode, args.samples or 0, args.seed, args.monic)
    acc = sampler.run(spec, args.profiles, args.disc_classes, args.split_primes, blocks=args.blocks,
                      budget=args.budget, log_path=args.log, workers=args.threads)
    warnings = []
    if args.split_primes and not args.monic:
        warnings.append("splitting counts only cover monic representatives")
    return _enum_rows(acc), warnings, 0


def cmd_counts(args):
    rows = []
    if args.irreducible_n:
        c, pred = sampler.count_irreducible(args.irreducible_n, args.H, budget=args.budget)
        rows.append({"quantity": "irreducible", "k": args.irreducible_n, "H": args.H, "count": c,
                     "relative_deviation": float(sampler.relative_deviation(c, pred)),
                     **interval_fields(pred, "predicted_")})
    if args.coprime_k:
        c, pred = sampler.count_coprime_tuples(args.coprime_k, args.H, budget=args.budget)
        rows.append({"quantity": "coprime", "k": args.coprime_k, "H": args.H, "count": c,
                     "relative_deviation": float(sampler.relative_deviation(c, pred)),
                     **interval_fields(pred, "predicted_")})
    if not rows:
        raise ConfigError("give --irreducible-n and/or --coprime-k")
    return rows, [], 0


def cmd_quad_class(args):
    rows = []
    for d in args.d:
        table = quadfield.class_group(d)
        orders = ";".join(f"{p}:{quadfield.prime_class_order(d, p, table)}"
                          for p in exact.primes_below(args.primes_below))
        rows.append({"d": d, "h": table.h, "forms": " ".join(str(f) for f in table.forms),
                     "prime_orders": orders})
    return rows, [], 0


def cmd_quad_torsion(args):
    rows = []
    for d in args.d:
        if args.N:
            dens = quadfield.torsion_density(d, args.t, args.n, N=args.N)
            f, g = quadfield.character_products(d, args.n, args.N)
            N = args.N
        else:
            dens = quadfield.torsion_density(d, args.t, args.n, tol=args.tol)
            f, g, N = quadfield.character_products_tol(d, args.n, args.tol)
        ref = f if args.t % 2 else g
        viol = sorted(quadfield.t_torsion_violators(d, args.t, min(N, args.list_below)))
        rows.append({"d": d, "t": args.t, "n": args.n, "N": N,
                     "violators": " ".join(map(str, viol)),
                     **interval_fields(dens), **interval_fields(dens / ref, "ratio_")})
    return rows, [], 0


def cmd_quad_products(args):
    rows = []
    for d in args.d:
        if args.N:
            f, g = quadfield.character_products(d, args.n, args.N)
            N = args.N
        else:
            f, g, N = quadfield.character_products_tol(d, args.n, args.tol)
        rows.append({"d": d, "n": args.n, "N": N, "product": "f", **interval_fields(f)})
        rows.append({"d": d, "n": args.n, "N": N, "product": "g", **interval_fields(g)})
    return rows, [], 0


def cmd_factor_census(args):
    census = factorstats.exact_factor_census(args.m, args.p, budget=args.budget,
                                             blocks=max(args.blocks, args.threads), workers=args.threads)
    rows = [{"m": args.m, "p": args.p, "i": i, "count": census.counts[i],
             "squarefree": census.squarefree[i], **exact_fields(census.fraction(i))}
            for i in sorted(census.counts)]
    return rows, [], 0


def cmd_factor_limit(args):
    rows = []
    for i in range(1, args.m + 1):
        row = {"m": args.m, "i": i, **exact_fields(factorstats.limit_density(args.m, i))}
        if args.p:
            census = factorstats.exact_factor_census(args.m, args.p, budget=args.budget)
            row["census_fraction"] = str(census.fraction(i))
            row["census_fraction_dec"] = float(census.fraction(i))
        rows.append(row)
    return rows, [], 0


def cmd_split_sample(args):
    sample = factorstats.empirical_splitting(args.m, args.p, args.H, args.samples, args.seed)
    census = factorstats.exact_factor_census(args.m, args.p, budget=args.budget)
    rows = [{"m": args.m, "p": args.p, "i": i, "count": sample.counts[i],
             "empirical": sample.fraction(i), "census": str(census.fraction(i)),
             "census_dec": float(census.fraction(i))}
            for i in sorted(sample.counts)]
    warnings = [f"skipped {sample.skipped} of {sample.drawn} draws with p | Disc"]
    return rows, warnings, 0


def cmd_verify(args):
    budget = args.budget_minutes * 60 if args.budget_minutes else None

    def progress(res):
        print(acceptance.format_line(res), file=sys.stderr, flush=True)

    results = acceptance.run_all(args.criteria or None, budget, on_result=progress)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
            for r in results]
    args._timings = {f"criterion_{r.number}": round(r.seconds, 3) for r in results}
    failed = [r.number for r in results if not r.passed]
    warnings = [f"failed criteria: {failed}"] if failed else []
    return rows, warnings, 1 if failed else 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings to JSON reports")
    common.add_argument("--threads", type=_positive, default=_default_threads(),
                        help=f"worker processes for block-parallel work (default ${THREADS_ENV} or 1)")

    parser = argparse.ArgumentParser(
        prog="ringdensity",
        description="Certified densities of the rings generated by random algebraic numbers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func)
        return sp

    def tol(sp, default):
        sp.add_argument("--tol", type=_fraction, default=Fraction(default))

    sp = add("constants", cmd_constants, "local factors alpha_{p,n}, beta_{p,n} and zeta(n+1)/zeta(n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, nargs="+", default=[2])
    tol(sp, "1e-6")

    for name, func, text in (
        ("density-e", cmd_density_e, "P[e = k]: the index of Z[alpha] inside its saturation"),
        ("density-ring", cmd_density_ring, "P[Z[alpha] and the ring of k-integral elements agree]"),
    ):
        sp = add(name, func, text)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=_int_list, default=[1, 2, 3, 4, 5, 6])
        tol(sp, "1e-6")

    def profile_args(sp, tol_default):
        sp.add_argument("--profile", default="rational",
                        help="rational | quadratic:<d> | cyclotomic:<m> | table:<p>=<r>,...;degree=<d>")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--max-N", dest="max_N", type=_positive, default=density.DEFAULT_MAX_N,
                        help="largest prime cutoff tried before refusing")
        tol(sp, tol_default)

    sp = add("density-xsize", cmd_density_xsize, "certified coefficients a_t = P[|X| = t]")
    profile_args(sp, "1e-5")
    sp.add_argument("--tmax", type=int, required=True)

    sp = add("moments", cmd_moments, "moments of |X| by two independent methods")
    profile_args(sp, "1e-4")
    sp.add_argument("--s", type=int, default=2, choices=range(1, 5))

    sp = add("monotonicity", cmd_monotonicity, "eventual decrease of a_t along steps lcm(1..d) and d")
    profile_args(sp, "1e-5")
    sp.add_argument("--tmax", type=int, required=True)

    sp = add("enumerate", cmd_enumerate, "exhaustive or Monte-Carlo statistics over bounded height")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--H", type=int, required=True)
    sp.add_argument("--mode", choices=("exhaustive", "montecarlo"), default="exhaustive")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--monic", action="store_true", help="restrict to monic polynomials")
    sp.add_argument("--profiles", type=lambda s: [x for x in s.split(",") if x], default=[],
                    help="comma-separated splitting profiles for |X| histograms")
    sp.add_argument("--disc-classes", dest="disc_classes", type=_int_list, default=[],
                    help="squarefree m to count Disc in m*Q^2 (write --disc-classes=-7,5)")
    sp.add_argument("--split-primes", dest="split_primes", type=_int_list, default=[])
    sp.add_argument("--blocks", type=_positive, default=1)
    sp.add_argument("--budget", type=_positive, help="maximum number of coefficient tuples")
    sp.add_argument("--log", help="JSONL block log; completed blocks are reused on rerun")

    sp = add("counts", cmd_counts, "exact counts of irreducible polynomials and coprime tuples")
    sp.add_argument("--H", type=int, required=True)
    sp.add_argument("--irreducible-n", dest="irreducible_n", type=int)
    sp.add_argument("--coprime-k", dest="coprime_k", type=int)
    sp.add_argument("--budget", type=_positive, default=20_000_000)

    sp = add("quad-class", cmd_quad_class, "class groups of imaginary quadratic fields by reduced forms")
    sp.add_argument("--d", type=_int_list, required=True, help="fundamental discriminants, e.g. --d=-23,-4")
    sp.add_argument("--primes-below", dest="primes_below", type=int, default=30)

    for name, func, text in (
        ("quad-torsion", cmd_quad_torsion, "density of t-torsion conditions on prime classes"),
        ("quad-products", cmd_quad_products, "character products f_n(d) and g_n(d)"),
    ):
        sp = add(name, func, text)
        sp.add_argument("--d", type=_int_list, required=True, help="fundamental discriminants, e.g. --d=-23")
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--N", type=int, help="fixed prime cutoff (otherwise chosen from --tol)")
        tol(sp, "1e-3")
        if name == "quad-torsion":
            sp.add_argument("--t", type=_positive, default=1)
            sp.add_argument("--list-below", dest="list_below", type=int, default=100)

    sp = add("factor-census", cmd_factor_census, "exact census of distinct factor counts over GF(p)")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--blocks", type=_positive, default=1)
    sp.add_argument("--budget", type=_positive, default=factorstats.CENSUS_BUDGET)

    sp = add("factor-limit", cmd_factor_limit, "limit law of the number of distinct factors")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, help="also show the exact census fraction at this prime")
    sp.add_argument("--budget", type=_positive, default=factorstats.CENSUS_BUDGET)

    sp = add("split-sample", cmd_split_sample, "sampled splitting of p against the census")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--H", type=int, required=True)
    sp.add_argument("--samples", type=_positive, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--budget", type=_positive, default=factorstats.CENSUS_BUDGET)

    sp = add("verify", cmd_verify, "run the acceptance suite; exit 1 on any failure")
    sp.add_argument("--budget-minutes", dest="budget_minutes", type=float)
    sp.add_argument("--criteria", type=_int_list, help="subset of criterion numbers")

    return parser


def _config_echo(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "format", "timings") or key.startswith("_"):
            continue
        if isinstance(value, Fraction):
            value = str(value)
        out[key] = value
    return out


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return density.rows_to_csv(report["rows"])
    return json.dumps(report, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rows, warnings, status = args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget refused: {exc} (a budget of {exc.required} would suffice)", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 1
    report = {"command": args.command, "config": _config_echo(args), "rows": rows, "warnings": warnings}
    if args.timings:
        report["timings"] = {**getattr(args, "_timings", {}),
                             "total_seconds": round(time.perf_counter() - start, 3)}
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    sys.stdout.write(render(report, args.format))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
