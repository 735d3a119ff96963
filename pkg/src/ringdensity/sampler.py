"""Exhaustive and Monte-Carlo enumeration of height-bounded minimal polynomials.

Each algebraic number of degree n is represented by its minimal polynomial
(primitive, irreducible, positive leading coefficient).  All statistics used
here depend only on that polynomial, so the n roots share one record and the
constant weight n cancels from every ratio.

Coefficient tuples are indexed lexicographically, leading coefficient first:
the leading coefficient runs over 1..H (only 1 for monic runs) and the others
over -H..H.  Exhaustive runs split that index range into blocks; Monte-Carlo
runs draw fixed-size blocks from seeds derived from (seed, block index), so
the outcome never depends on how the work is partitioned.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice, product
from typing import Iterable, Iterator

import numpy as np

from .density import SplittingProfile, make_profile
from .errors import BudgetExceeded, DomainError
from .exact import CertifiedInterval, prime_factors, zeta_interval
from .polyint import IntPolynomial, NormalizedRep, discriminant, e_invariant, is_irreducible

EXHAUSTIVE_BUDGET = 200_000_000
GENERIC_BUDGET = 3_000_000
MC_BLOCK = 1 << 14
CHUNK = 1 << 20


@dataclass(frozen=True)
class EnumSpec:
    degree: int
    H: int
    mode: str = "exhaustive"
    samples: int = 0
    seed: int | None = None
    monic_only: bool = False

    def __post_init__(self):
        if self.degree < 1 or self.H < 1:
            raise DomainError("need degree >= 1 and H >= 1")
        if self.mode not in ("exhaustive", "montecarlo"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == "montecarlo":
            if self.samples < 1:
                raise DomainError("montecarlo mode needs samples >= 1")
            if self.seed is None:
                raise DomainError("montecarlo mode needs a seed")

    @property
    def width(self) -> int:
        return 2 * self.H + 1

    @property
    def leads(self) -> int:
        return 1 if self.monic_only else self.H

    @property
    def size(self) -> int:
        """Number of coefficient tuples in the exhaustive index range."""
        return self.leads * self.width**self.degree


# ---------------------------------------------------------------------------
# accumulator


def _inc(d: dict, key, by: int = 1) -> None:
    d[key] = d.get(key, 0) + by


def _merge_counts(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


@dataclass
class StatAccumulator:
    total_weight: int = 0  # accepted representatives
    drawn: int = 0  # coefficient tuples examined
    e_histogram: dict[int, int] = field(default_factory=dict)
    xsize_histograms: dict[str, dict[int, int]] = field(default_factory=dict)
    disc_squareclass_counts: dict[int, int] = field(default_factory=dict)
    exceptional_count: int = 0
    splitting_histogram: dict[tuple[int, int], int] = field(default_factory=dict)

    def merge(self, other: "StatAccumulator") -> "StatAccumulator":
        xs = {k: dict(v) for k, v in self.xsize_histograms.items()}
        for pid, hist in other.xsize_histograms.items():
            xs[pid] = _merge_counts(xs.get(pid, {}), hist)
        return StatAccumulator(
            self.total_weight + other.total_weight,
            self.drawn + other.drawn,
            _merge_counts(self.e_histogram, other.e_histogram),
            xs,
            _merge_counts(self.disc_squareclass_counts, other.disc_squareclass_counts),
            self.exceptional_count + other.exceptional_count,
            _merge_counts(self.splitting_histogram, other.splitting_histogram),
        )

    __add__ = merge

    def prob_e(self, k: int) -> float:
        return self.e_histogram.get(k, 0) / self.total_weight if self.total_weight else 0.0

    def xsize_distribution(self, profile_id: str) -> dict[int, float]:
        hist = self.xsize_histograms.get(profile_id, {})
        total = sum(hist.values())
        return {t: c / total for t, c in sorted(hist.items())} if total else {}

    def to_dict(self) -> dict:
        return {
            "total_weight": self.total_weight,
            "drawn": self.drawn,
            "e_histogram": {str(k): v for k, v in sorted(self.e_histogram.items())},
            "xsize_histograms": {
                pid: {str(t): c for t, c in sorted(h.items())} for pid, h in sorted(self.xsize_histograms.items())
            },
            "disc_squareclass_counts": {str(m): c for m, c in sorted(self.disc_squareclass_counts.items())},
            "exceptional_count": self.exceptional_count,
            "splitting_histogram": {f"{p},{i}": c for (p, i), c in sorted(self.splitting_histogram.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StatAccumulator":
        return cls(
            data["total_weight"],
            data["drawn"],
            {int(k): v for k, v in data["e_histogram"].items()},
            {pid: {int(t): c for t, c in h.items()} for pid, h in data["xsize_histograms"].items()},
            {int(m): c for m, c in data["disc_squareclass_counts"].items()},
            data["exceptional_count"],
            {tuple(int(x) for x in k.split(",")): c for k, c in data["splitting_histogram"].items()},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "StatAccumulator":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# streams


def _check_budget(spec: EnumSpec, budget: int) -> None:
    if spec.size > budget:
        raise BudgetExceeded(
            f"exhaustive enumeration needs {spec.size} tuples, budget is {budget}", required=spec.size
        )


def _decode(spec: EnumSpec, index: int) -> tuple[int, ...]:
    """Coefficients (a_0, ..., a_n) of the tuple with the given index."""
    W, H = spec.width, spec.H
    low = []
    for _ in range(spec.degree):
        index, r = divmod(index, W)
        low.append(r - H)
    return tuple(low) + (index + 1,)


def _tuples(spec: EnumSpec, start: int, stop: int) -> Iterator[tuple[int, ...]]:
    H = spec.H
    first = _decode(spec, start)
    leads = range(first[-1], spec.leads + 1)
    rng = range(-H, H + 1)
    it = (tuple(reversed(rest)) + (lead,) for lead in leads for rest in product(rng, repeat=spec.degree))
    skip = (start - (first[-1] - 1) * spec.width**spec.degree)
    return islice(it, skip, skip + (stop - start))


def _primitive(coeffs) -> bool:
    return math.gcd(*coeffs) == 1


def _representative(coeffs) -> NormalizedRep | None:
    """The rep for a primitive tuple with positive lead, or None if rejected."""
    if not _primitive(coeffs):
        return None
    poly = IntPolynomial(coeffs)
    if not is_irreducible(poly):
        return None
    return NormalizedRep(poly)


def enumerate_representatives(spec: EnumSpec, budget: int = GENERIC_BUDGET,
                              start: int = 0, stop: int | None = None) -> Iterator[NormalizedRep]:
    """Every primitive irreducible polynomial of the spec exactly once.

    ``start``/``stop`` select a sub-range of the tuple index.
    """
    if spec.mode != "exhaustive":
        raise DomainError("enumerate_representatives needs exhaustive mode")
    _check_budget(spec, budget)
    stop = spec.size if stop is None else stop
    for coeffs in _tuples(spec, start, stop):
        rep = _representative(coeffs)
        if rep is not None:
            yield rep


def _mc_block(spec: EnumSpec, block: int) -> np.ndarray:
    """Draws of one block as an int64 array of shape (size, n+1), low degree first."""
    size = min(MC_BLOCK, spec.samples - block * MC_BLOCK)
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, block]))
    if spec.monic_only:
        lead = np.ones(size, dtype=np.int64)
    else:
        lead = rng.integers(1, spec.H + 1, size=size, dtype=np.int64)
    rest = rng.integers(-spec.H, spec.H + 1, size=(size, spec.degree), dtype=np.int64)
    return np.column_stack([rest, lead])


def mc_blocks(spec: EnumSpec) -> int:
    return -(-spec.samples // MC_BLOCK)


def mc_sample(spec: EnumSpec, blocks: Iterable[int] | None = None) -> Iterator[NormalizedRep]:
    """Stream of accepted representatives from i.i.d. uniform tuples.

    The leading coefficient is drawn from 1..H directly, which is the same
    as drawing from -H..H, redrawing zeros and negating negative leads.
    Non-primitive and reducible tuples are rejected.
    """
    if spec.mode != "montecarlo":
        raise DomainError("mc_sample needs montecarlo mode")
    for b in (range(mc_blocks(spec)) if blocks is None else blocks):
        for row in _mc_block(spec, b).tolist():
            rep = _representative(tuple(row))
            if rep is not None:
                yield rep


# ---------------------------------------------------------------------------
# accumulation


def _is_square(v: int) -> bool:
    return v >= 0 and math.isqrt(v) ** 2 == v


def _in_square_class(D: int, m: int) -> bool:
    """D = m y^2 for squarefree m."""
    return D != 0 and D % m == 0 and _is_square(D // m)


def xsize(e: int, profile: SplittingProfile) -> int:
    """Stable-lift size of X: sum of r(p) over the primes p dividing e."""
    return sum(profile(p) for p in prime_factors(e))


def accumulate(stream: Iterable[NormalizedRep], profiles=(), disc_classes=(), split_primes=(),
               drawn: int | None = None) -> StatAccumulator:
    """Fold representatives into a :class:`StatAccumulator`.

    A degree-2 representative whose field is the quadratic field of a profile
    is exceptional for it: the stable lift does not apply, so it is counted
    in ``exceptional_count`` and left out of that profile's histogram.
    ``split_primes`` records the number of distinct factors mod p of monic
    representatives, with i = 0 marking p | Disc (skipped).
    """
    from .factorstats import ModPPoly, factor_profile

    profiles = [make_profile(p) for p in profiles]
    acc = StatAccumulator(xsize_histograms={p.id: {} for p in profiles})
    for rep in stream:
        poly = rep.poly
        acc.total_weight += 1
        e = e_invariant(rep)
        _inc(acc.e_histogram, e)
        D = discriminant(poly) if poly.degree >= 2 and (disc_classes or split_primes or profiles) else None
        for prof in profiles:
            if prof.field_m is not None and poly.degree == 2 and _in_square_class(D, prof.field_m):
                acc.exceptional_count += 1
                continue
            _inc(acc.xsize_histograms[prof.id], xsize(e, prof))
        for m in disc_classes:
            if D is not None and _in_square_class(D, m):
                _inc(acc.disc_squareclass_counts, m)
        if poly.leading == 1:
            for p in split_primes:
                if D is not None and D % p == 0:
                    _inc(acc.splitting_histogram, (p, 0))
                else:
                    i = factor_profile(ModPPoly(p, poly.coeffs)).distinct_count
                    _inc(acc.splitting_histogram, (p, i))
    acc.drawn = acc.total_weight if drawn is None else drawn
    return acc


# ---------------------------------------------------------------------------
# vectorized degree-2 path


def _isqrt_array(v: np.ndarray) -> np.ndarray:
    """Exact floor square roots of non-negative int64 values below 2**52."""
    s = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    s -= (s * s > v).astype(np.int64)
    s += ((s + 1) * (s + 1) <= v).astype(np.int64)
    return s


def _square_mask(v: np.ndarray) -> np.ndarray:
    ok = v >= 0
    s = _isqrt_array(np.where(ok, v, 0))
    return ok & (s * s == v)


def _quadratic_stats(a0, a1, a2, profiles, disc_classes) -> StatAccumulator:
    """Accumulator for arrays of quadratic tuples with a2 > 0."""
    acc = StatAccumulator(xsize_histograms={p.id: {} for p in profiles})
    acc.drawn = int(a0.size)
    g = np.gcd(np.gcd(a2, a1), a0)
    D = a1 * a1 - 4 * a2 * a0
    keep = (g == 1) & ~_square_mask(D)
    a1, a2, D = a1[keep], a2[keep], D[keep]
    acc.total_weight = int(a1.size)
    e = np.gcd(a2, a1)
    values, inverse, counts = np.unique(e, return_inverse=True, return_counts=True)
    for v, c in zip(values.tolist(), counts.tolist()):
        acc.e_histogram[v] = c
    for prof in profiles:
        tv = np.array([xsize(v, prof) for v in values.tolist()], dtype=np.int64)
        t = tv[inverse]
        if prof.field_m is not None:
            m = prof.field_m
            exc = (D % m == 0) & _square_mask(D // m)
            acc.exceptional_count += int(exc.sum())
            t = t[~exc]
        tvals, tcounts = np.unique(t, return_counts=True)
        acc.xsize_histograms[prof.id] = {int(a): int(b) for a, b in zip(tvals, tcounts)}
    for m in disc_classes:
        hit = (D % m == 0) & _square_mask(D // m)
        c = int(hit.sum())
        if c:
            acc.disc_squareclass_counts[m] = c
    return acc


def _fast_ok(spec: EnumSpec, disc_classes, split_primes) -> bool:
    big = max([abs(m) for m in disc_classes] + [1])
    return spec.degree == 2 and not split_primes and 5 * spec.H * spec.H < 2**52 and big < 2**31


def _exhaustive_range_fast(spec, start, stop, profiles, disc_classes) -> StatAccumulator:
    W, H = spec.width, spec.H
    acc = StatAccumulator(xsize_histograms={p.id: {} for p in profiles})
    for lo in range(start, stop, CHUNK):
        idx = np.arange(lo, min(stop, lo + CHUNK), dtype=np.int64)
        a0 = idx % W - H
        a1 = (idx // W) % W - H
        a2 = idx // (W * W) + 1
        acc = acc.merge(_quadratic_stats(a0, a1, a2, profiles, disc_classes))
    return acc


def _exhaustive_range(spec, start, stop, profiles, disc_classes, split_primes, fast) -> StatAccumulator:
    if fast and _fast_ok(spec, disc_classes, split_primes):
        return _exhaustive_range_fast(spec, start, stop, profiles, disc_classes)
    stream = enumerate_representatives(spec, budget=max(spec.size, 1), start=start, stop=stop)
    return accumulate(stream, profiles, disc_classes, split_primes, drawn=stop - start)


def _mc_block_stats(spec, block, profiles, disc_classes, split_primes, fast) -> StatAccumulator:
    arr = _mc_block(spec, block)
    if fast and _fast_ok(spec, disc_classes, split_primes):
        return _quadratic_stats(arr[:, 0], arr[:, 1], arr[:, 2], profiles, disc_classes)
    stream = (rep for rep in (_representative(tuple(r)) for r in arr.tolist()) if rep is not None)
    return accumulate(stream, profiles, disc_classes, split_primes, drawn=len(arr))


def block_ranges(spec: EnumSpec, blocks: int) -> list[tuple[int, int]]:
    total = spec.size
    edges = [total * b // blocks for b in range(blocks + 1)]
    return list(zip(edges, edges[1:]))


def _read_log(path) -> dict[int, StatAccumulator]:
    done = {}
    if path and os.path.exists(path):
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rec = json.loads(line)
                    done[rec["block"]] = StatAccumulator.from_dict(rec["acc"])
    return done


def _block_stats(spec, b, lo, hi, profile_specs, disc_classes, split_primes, fast) -> StatAccumulator:
    """One block of a run; module level so worker processes can pickle it."""
    profiles = [make_profile(p) for p in profile_specs]
    if spec.mode == "exhaustive":
        return _exhaustive_range(spec, lo, hi, profiles, disc_classes, split_primes, fast)
    return _mc_block_stats(spec, b, profiles, disc_classes, split_primes, fast)


def run(spec: EnumSpec, profiles=(), disc_classes=(), split_primes=(), blocks: int = 1,
        budget: int | None = None, log_path=None, fast: bool = True, workers: int = 1) -> StatAccumulator:
    """Run an exhaustive or Monte-Carlo spec block by block and merge.

    With ``log_path`` every finished block is appended as one JSON line
    (block, range, accumulator); blocks already in the log are not redone.
    For Monte-Carlo specs the blocks are the fixed seed blocks and the
    ``blocks`` argument is ignored.  ``workers > 1`` computes pending blocks
    in separate processes; results are still merged in block order.
    """
    profiles = [make_profile(p) for p in profiles]
    disc_classes = [int(m) for m in disc_classes]
    split_primes = [int(p) for p in split_primes]
    if spec.mode == "exhaustive":
        limit = budget or (EXHAUSTIVE_BUDGET if _fast_ok(spec, disc_classes, split_primes) and fast
                           else GENERIC_BUDGET)
        _check_budget(spec, limit)
        ranges = block_ranges(spec, blocks)
    else:
        ranges = [(b * MC_BLOCK, min(spec.samples, (b + 1) * MC_BLOCK)) for b in range(mc_blocks(spec))]
    done = _read_log(log_path)
    pending = [(b, lo, hi) for b, (lo, hi) in enumerate(ranges) if b not in done]
    ids = [p.id for p in profiles]
    args = [(spec, b, lo, hi, ids, disc_classes, split_primes, fast) for b, lo, hi in pending]
    if workers > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_stats, *zip(*args)))
    else:
        parts = [_block_stats(*a) for a in args]
    for (b, lo, hi), part in zip(pending, parts):
        done[b] = part
        if log_path:
            with open(log_path, "a") as fh:
                rec = {"block": b, "range": [lo, hi], "acc": part.to_dict()}
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    acc = StatAccumulator(xsize_histograms={p.id: {} for p in profiles})
    for b in range(len(ranges)):
        acc = acc.merge(done[b])
    return acc


# ---------------------------------------------------------------------------
# exact counts


def count_irreducible(n: int, H: int, budget: int = EXHAUSTIVE_BUDGET):
    """Irreducible degree-n polynomials of height <= H (both signs of lead).

    Returns (count, interval for (2H)^(n+1) / zeta(n+1)).
    """
    spec = EnumSpec(n, H)
    acc = run(spec, budget=budget if n == 2 else min(budget, GENERIC_BUDGET))
    count = 2 * acc.total_weight
    return count, CertifiedInterval.point((2 * H) ** (n + 1)) / zeta_interval(n + 1)


def count_coprime_tuples(k: int, H: int, budget: int = 20_000_000):
    """k-tuples in [-H, H]^k with gcd 1 (the all-zero tuple has gcd 0).

    Returns (count, interval for (2H)^k / zeta(k)).
    """
    if k < 2 or H < 1:
        raise DomainError("need k >= 2 and H >= 1")
    W = 2 * H + 1
    if W**k > budget:
        raise BudgetExceeded(f"{W}^{k} tuples exceed budget {budget}", required=W**k)
    count = 0
    vals = np.arange(-H, H + 1, dtype=np.int64)
    # fix the first coordinate, vectorize over the rest
    rest = np.stack(np.meshgrid(*([vals] * (k - 1)), indexing="ij"), axis=-1).reshape(-1, k - 1)
    g_rest = np.gcd.reduce(rest, axis=1) if k > 2 else np.abs(rest[:, 0])
    for a in vals.tolist():
        count += int((np.gcd(g_rest, a) == 1).sum())
    return count, CertifiedInterval.point((2 * H) ** k) / zeta_interval(k)


def relative_deviation(count: int, predicted: CertifiedInterval) -> Fraction:
    """Largest |count / x - 1| over x in the predicted interval."""
    return max(abs(Fraction(count) / predicted.lo - 1), abs(Fraction(count) / predicted.hi - 1))
