"""Factorization censuses of monic polynomials over GF(p).

The quantity of interest is the number of *distinct* monic irreducible
factors of a degree-m polynomial.  It is obtained without ever splitting
equal-degree factors: after removing repeated factors, the distinct-degree
component of degree D made of irreducibles of degree e holds D / e of them.

Everything here assumes p > m, so the derivative-based squarefree step
never meets the p-th power case of characteristic p.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np

from . import gfp
from .errors import BudgetExceeded, ConsistencyError, DomainError
from .exact import is_prime, partitions_with_parts, prime_factors, stirling_density_row

CENSUS_BUDGET = 50_000_000


@dataclass(frozen=True)
class ModPPoly:
    p: int
    coeffs: tuple[int, ...]  # low degree first, monic

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        c = tuple(gfp.reduce(list(self.coeffs), self.p))
        if not c or c[-1] != 1:
            raise DomainError("ModPPoly must be monic")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class FactorProfile:
    distinct_count: int
    degrees: tuple[int, ...]  # degrees of the distinct irreducible factors, sorted
    multiplicities: tuple[int, ...]  # matching multiplicities
    squarefree: bool

    @property
    def total_degree(self) -> int:
        return sum(d * k for d, k in zip(self.degrees, self.multiplicities))


def _as_modp(f, p=None) -> ModPPoly:
    if isinstance(f, ModPPoly):
        return f
    return ModPPoly(p, tuple(f))


def distinct_degree_components(f, p=None):
    """[(component, e, multiplicity)] for a monic f.

    Needs p > deg f, except for squarefree f (gcd(f, f') = 1), where no
    repeated-factor step is required.
    """
    f = _as_modp(f, p)
    coeffs = list(f.coeffs)
    if f.p <= f.degree:
        if gfp.deg(gfp.gcd(coeffs, gfp.deriv(coeffs, f.p), f.p)) != 0:
            raise DomainError(f"need p > m for non-squarefree input, got p={f.p}, m={f.degree}")
        parts = [(coeffs, 1)]
    else:
        parts = gfp.squarefree_decomposition(coeffs, f.p)
    out = []
    for part, k in parts:
        for comp, e in gfp.distinct_degree(part, f.p):
            out.append((comp, e, k))
    return out


def factor_profile(f, p=None) -> FactorProfile:
    """Distinct-factor profile of a monic polynomial mod p (p > degree)."""
    f = _as_modp(f, p)
    if f.degree < 1:
        raise DomainError("degree must be >= 1")
    items = []
    for comp, e, k in distinct_degree_components(f):
        items.extend([(e, k)] * (gfp.deg(comp) // e))
    items.sort()
    return FactorProfile(
        distinct_count=len(items),
        degrees=tuple(e for e, _ in items),
        multiplicities=tuple(k for _, k in items),
        squarefree=all(k == 1 for _, k in items),
    )


def _mobius(n: int) -> int:
    ps = prime_factors(n)
    prod = 1
    for q in ps:
        prod *= q
    return 0 if prod != n else (-1) ** len(ps)


def irreducible_count(m: int, p: int) -> int:
    """Number of monic irreducible polynomials of degree m over GF(p)."""
    if m < 1 or not is_prime(p):
        raise DomainError("need m >= 1 and p prime")
    total = sum(_mobius(m // d) * p**d for d in range(1, m + 1) if m % d == 0)
    assert total % m == 0
    return total // m


def squarefree_partition_count(m: int, i: int, p: int) -> int:
    """Squarefree monic degree-m polynomials with i factors, by choosing factors.

    A partition with b_n parts equal to n selects b_n distinct irreducibles
    of each degree n.
    """
    total = 0
    for lam in partitions_with_parts(m, i):
        term = 1
        for n, b in lam.b.items():
            term *= math.comb(irreducible_count(n, p), b)
        total += term
    return total


# ---------------------------------------------------------------------------
# compiled census kernel
#
# Polynomials live in int64 arrays, low degree first, with an explicit degree
# (-1 for zero).  p < 2**31 keeps every product inside int64.


@numba.njit(cache=True)
def _inv(a, p):
    return _powi(a, p - 2, p)


@numba.njit(cache=True)
def _powi(a, e, p):
    r = 1
    a %= p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


@numba.njit(cache=True)
def _rem(a, da, b, db, p):
    """a <- a mod b in place; returns the new degree of a."""
    inv = _inv(b[db], p)
    while da >= db and da >= 0:
        c = a[da] * inv % p
        if c != 0:
            s = da - db
            for j in range(db + 1):
                a[s + j] = (a[s + j] - c * b[j]) % p
        da -= 1
        while da >= 0 and a[da] == 0:
            da -= 1
    return da


@numba.njit(cache=True)
def _quo(a, da, b, db, p, q):
    """q <- a // b (a is destroyed); returns deg q."""
    inv = _inv(b[db], p)
    dq = da - db
    for i in range(dq + 1):
        q[i] = 0
    for k in range(da, db - 1, -1):
        c = a[k] * inv % p
        q[k - db] = c
        if c != 0:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return dq


@numba.njit(cache=True)
def _gcd(a, da, b, db, p, out):
    """out <- monic gcd(a, b); a and b are destroyed.  Returns its degree."""
    while db >= 0:
        da = _rem(a, da, b, db, p)
        a, b = b, a
        da, db = db, da
    if da < 0:
        return -1
    inv = _inv(a[da], p)
    for i in range(da + 1):
        out[i] = a[i] * inv % p
    return da


@numba.njit(cache=True)
def _mulmod(a, da, b, db, g, dg, p, tmp, out):
    for i in range(da + db + 1):
        tmp[i] = 0
    if da < 0 or db < 0:
        return -1
    for i in range(da + 1):
        if a[i] != 0:
            for j in range(db + 1):
                tmp[i + j] = (tmp[i + j] + a[i] * b[j]) % p
    dt = da + db
    while dt >= 0 and tmp[dt] == 0:
        dt -= 1
    dt = _rem(tmp, dt, g, dg, p)
    for i in range(dt + 1):
        out[i] = tmp[i]
    return dt


@numba.njit(cache=True)
def _xpow_mod(h, dh, e, g, dg, p, w):
    """h <- h**e mod g (square and multiply)."""
    res, base, tmp, nxt = w[0], w[1], w[2], w[3]
    res[0] = 1
    dr = 0
    for i in range(dh + 1):
        base[i] = h[i]
    db = dh
    while e > 0:
        if e & 1:
            dr = _mulmod(res, dr, base, db, g, dg, p, tmp, nxt)
            for i in range(dr + 1):
                res[i] = nxt[i]
        e >>= 1
        if e > 0:
            db = _mulmod(base, db, base, db, g, dg, p, tmp, nxt)
            for i in range(db + 1):
                base[i] = nxt[i]
    for i in range(dr + 1):
        h[i] = res[i]
    return dr


@numba.njit(cache=True)
def _distinct_and_squarefree(f, m, p, w):
    """(number of distinct irreducible factors, squarefree flag) of monic f."""
    a, b, g, q, h, c, d = w[4], w[5], w[6], w[7], w[8], w[9], w[10]
    # gcd(f, f')
    for i in range(m + 1):
        a[i] = f[i]
    for i in range(m):
        b[i] = (i + 1) * f[i + 1] % p
    db = m - 1
    while db >= 0 and b[db] == 0:
        db -= 1
    dg = _gcd(a, m, b, db, p, g)
    squarefree = dg == 0
    # radical r = f / gcd(f, f'), stored in q
    for i in range(m + 1):
        a[i] = f[i]
    dr = _quo(a, m, g, dg, p, q)
    count = 0
    # h = x mod r
    dh = 1
    h[0] = 0
    h[1] = 1
    e = 1
    while dr >= 2 * e:
        dh = _xpow_mod(h, dh, p, q, dr, p, w)
        # c = gcd(r, h - x)
        for i in range(dr + 1):
            a[i] = q[i]
        for i in range(max(dh, 1) + 1):
            b[i] = h[i] if i <= dh else 0
        b[1] = (b[1] - 1) % p
        dbb = max(dh, 1)
        while dbb >= 0 and b[dbb] == 0:
            dbb -= 1
        dc = _gcd(a, dr, b, dbb, p, c)
        if dc > 0:
            count += dc // e
            for i in range(dr + 1):
                a[i] = q[i]
            dr = _quo(a, dr, c, dc, p, d)
            for i in range(dr + 1):
                q[i] = d[i]
            # keep h reduced modulo the shrunken radical
            dh = _rem(h, dh, q, dr, p)
        e += 1
    if dr > 0:
        count += 1
    return count, squarefree


@numba.njit(cache=True)
def _census_kernel(m, p, start, stop):
    """counts[i, s] over monic polynomials with index in [start, stop).

    The index enumerates the m low coefficients in base p (constant term is
    the fastest digit); s = 1 for squarefree polynomials.
    """
    counts = np.zeros((m + 1, 2), dtype=np.int64)
    size = 2 * m + 4
    w = np.zeros((11, size), dtype=np.int64)
    f = np.zeros(m + 1, dtype=np.int64)
    f[m] = 1
    for idx in range(start, stop):
        r = idx
        for j in range(m):
            f[j] = r % p
            r //= p
        i, sf = _distinct_and_squarefree(f, m, p, w)
        counts[i, 1 if sf else 0] += 1
    return counts


@dataclass
class Census:
    m: int
    p: int
    counts: dict[int, int] = field(default_factory=dict)
    squarefree: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def squarefree_total(self) -> int:
        return sum(self.squarefree.values())

    def fraction(self, i: int) -> Fraction:
        return Fraction(self.counts.get(i, 0), self.p**self.m)

    def squarefree_fraction(self) -> Fraction:
        return Fraction(self.squarefree_total, self.p**self.m)

    def merge(self, other: "Census") -> "Census":
        if (self.m, self.p) != (other.m, other.p):
            raise DomainError("cannot merge censuses of different (m, p)")
        keys = set(self.counts) | set(other.counts)
        return Census(
            self.m,
            self.p,
            {i: self.counts.get(i, 0) + other.counts.get(i, 0) for i in sorted(keys)},
            {i: self.squarefree.get(i, 0) + other.squarefree.get(i, 0) for i in sorted(keys)},
        )


def _check_census_args(m: int, p: int, budget: int) -> None:
    if m < 1:
        raise DomainError("m must be >= 1")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p <= m:
        raise DomainError(f"need p > m, got p={p}, m={m}")
    if p >= 1 << 31:
        raise DomainError("p must fit the int64 kernel (p < 2**31)")
    if p**m > budget:
        raise BudgetExceeded(f"census of {p}^{m} polynomials exceeds budget {budget}", required=p**m)


def _census_block(m: int, p: int, lo: int, hi: int) -> "Census":
    arr = _census_kernel(m, p, lo, hi)
    return Census(
        m,
        p,
        {i: int(arr[i, 0] + arr[i, 1]) for i in range(1, m + 1)},
        {i: int(arr[i, 1]) for i in range(1, m + 1)},
    )


def exact_factor_census(m: int, p: int, budget: int = CENSUS_BUDGET, blocks: int = 1,
                        workers: int = 1) -> Census:
    """Exhaustive census of all p^m monic degree-m polynomials mod p.

    ``blocks`` splits the index range and ``workers > 1`` spreads the blocks
    over processes; the merged result depends on neither.
    """
    _check_census_args(m, p, budget)
    total = p**m
    edges = [total * b // blocks for b in range(blocks + 1)]
    jobs = [(m, p, lo, hi) for lo, hi in zip(edges, edges[1:])]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_block, *zip(*jobs)))
    else:
        parts = [_census_block(*job) for job in jobs]
    result = Census(m, p, {i: 0 for i in range(1, m + 1)}, {i: 0 for i in range(1, m + 1)})
    for part in parts:
        result = result.merge(part)
    return result


def reference_census(m: int, p: int, budget: int = 200_000) -> Census:
    """Slow census through :func:`factor_profile` (the pure Python path)."""
    _check_census_args(m, p, budget)
    counts = {i: 0 for i in range(1, m + 1)}
    sqf = {i: 0 for i in range(1, m + 1)}
    for idx in range(p**m):
        c, r = [], idx
        for _ in range(m):
            c.append(r % p)
            r //= p
        prof = factor_profile(ModPPoly(p, tuple(c) + (1,)))
        counts[prof.distinct_count] += 1
        if prof.squarefree:
            sqf[prof.distinct_count] += 1
    return Census(m, p, counts, sqf)


def limit_density(m: int, i: int) -> Fraction:
    """Sum over partitions of m into i parts of prod_n 1 / (n^b_n b_n!)."""
    if not 1 <= i <= m <= 12:
        raise DomainError("limit_density needs 1 <= i <= m <= 12")
    total = Fraction(0)
    for lam in partitions_with_parts(m, i):
        term = Fraction(1)
        for n, b in lam.b.items():
            term /= n**b * math.factorial(b)
        total += term
    expected = stirling_density_row(m)[i]
    if total != expected:
        raise ConsistencyError(f"partition sum {total} != Stirling coefficient {expected}")
    return total


@dataclass
class SplittingSample:
    m: int
    p: int
    counts: dict[int, int]
    skipped: int
    drawn: int

    @property
    def used(self) -> int:
        return sum(self.counts.values())

    @property
    def skip_fraction(self) -> float:
        return self.skipped / self.drawn if self.drawn else 0.0

    def fraction(self, i: int) -> float:
        return self.counts.get(i, 0) / self.used if self.used else 0.0


def empirical_splitting(m: int, p: int, H: int, samples: int, seed: int) -> SplittingSample:
    """Distinct-factor counts mod p of sampled monic irreducible integer polynomials.

    By Dedekind-Kummer the count equals the number of primes above p in the
    field generated by a root whenever p does not divide the discriminant.
    Samples with p | Disc are counted as skipped.
    """
    from .polyint import discriminant
    from .sampler import EnumSpec, mc_sample

    if p <= m:
        raise DomainError(f"need p > m, got p={p}, m={m}")
    spec = EnumSpec(m, H, mode="montecarlo", samples=samples, seed=seed, monic_only=True)
    counts = {i: 0 for i in range(1, m + 1)}
    skipped = drawn = 0
    for rep in mc_sample(spec):
        drawn += 1
        poly = rep.poly
        if m >= 2 and discriminant(poly) % p == 0:
            skipped += 1
            continue
        prof = factor_profile(ModPPoly(p, poly.coeffs))
        counts[prof.distinct_count] += 1
    return SplittingSample(m, p, counts, skipped, drawn)


def census_csv(census: Census, digits: int = 12) -> str:
    """CSV rows (m, p, i, count, fraction_lo, fraction_hi)."""
    from .exact import CertifiedInterval

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "p", "i", "count", "fraction_lo", "fraction_hi"])
    for i in sorted(census.counts):
        lo, hi = CertifiedInterval.point(census.fraction(i)).decimals(digits)
        w.writerow([census.m, census.p, i, census.counts[i], lo, hi])
    return buf.getvalue()
