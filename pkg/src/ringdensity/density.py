"""Certified densities for the e-invariant, ring equality and the size of X.

Conventions
-----------
For a splitting profile (a map p -> r(p) in [1, d]) the probability that
|X| = t is the coefficient of z^t in

    f(z) = prod_p alpha_{p,n} (1 + z^{r(p)} beta_{p,n}),

so a_t = C * sum over finite prime sets Y with sum_{p in Y} r(p) = t of
prod_{p in Y} beta_p, where C = prod_p alpha_p = zeta(n+1)/zeta(n).

Only primes p < N are handled exactly.  Everything is done in fixed point
(integers scaled by 2**bits) with floor for lower and ceil for upper bounds.
Primes >= N enter only through eps_N = 1/((n-1)(N-1)^(n-1)), which bounds
both sum_{p >= N} beta_p and 1 - prod_{p >= N} alpha_p.
"""

from __future__ import annotations

import copy
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable

from .errors import BudgetExceeded, DomainError
from .exact import (
    PRECISION,
    CertifiedInterval,
    alpha_beta_ratio,
    alpha_ratio,
    beta_ratio,
    euler_phi,
    fx_ceil,
    fx_floor,
    fx_mul_ceil,
    fx_mul_floor,
    is_prime,
    local_factors,
    prime_factors,
    primes_below,
    tail_epsilon,
    zeta_interval,
    zeta_ratio,
)

DEFAULT_MAX_N = 1 << 21
ONE = 1 << PRECISION


# ---------------------------------------------------------------------------
# splitting profiles


@dataclass(frozen=True)
class SplittingProfile:
    id: str
    degree: int
    galois: bool
    r: Callable[[int], int] = field(compare=False, repr=False)
    field_m: int | None = None  # squarefree m with K = Q(sqrt m), for quadratic K

    def __call__(self, p: int) -> int:
        v = self.r(p)
        if not 1 <= v <= self.degree:
            raise DomainError(f"profile {self.id}: r({p}) = {v} outside [1, {self.degree}]")
        return v


def _multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


def rational_profile() -> SplittingProfile:
    return SplittingProfile("rational", 1, True, lambda p: 1)


def quadratic_profile(d: int) -> SplittingProfile:
    from .quadfield import is_fundamental, kronecker

    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")
    m = d if d % 4 == 1 else d // 4
    return SplittingProfile(f"quadratic:{d}", 2, True, lambda p: 2 if kronecker(d, p) == 1 else 1, m)


def cyclotomic_profile(m: int) -> SplittingProfile:
    if m < 3:
        raise DomainError("cyclotomic profile needs m >= 3")
    deg = euler_phi(m)

    def r(p: int) -> int:
        mp = m
        while mp % p == 0:
            mp //= p
        return euler_phi(mp) // _multiplicative_order(p, mp)

    quad = {3: -3, 4: -1, 6: -3}.get(m)
    return SplittingProfile(f"cyclotomic:{m}", deg, True, r, quad)


def table_profile(values: dict, degree: int, default: int | None = None, galois: bool = False,
                  name: str | None = None) -> SplittingProfile:
    values = {int(p): int(v) for p, v in values.items()}

    def r(p: int) -> int:
        if p in values:
            return values[p]
        if default is None:
            raise DomainError(f"table profile has no entry for p = {p}")
        return default

    ident = name or "table:" + ",".join(f"{p}={v}" for p, v in sorted(values.items())) + (
        f";default={default}" if default is not None else "") + f";degree={degree}" + (";galois" if galois else "")
    return SplittingProfile(ident, degree, galois, r)


def make_profile(spec) -> SplittingProfile:
    """Build a profile from a string such as ``quadratic:-7`` or a dict.

    String forms: ``rational``, ``quadratic:<d>``, ``cyclotomic:<m>`` and
    ``table:<p>=<r>,...;degree=<d>[;default=<r>][;galois]``.
    """
    if isinstance(spec, SplittingProfile):
        return spec
    if isinstance(spec, dict):
        kind = spec["kind"]
        if kind == "rational":
            return rational_profile()
        if kind == "quadratic":
            return quadratic_profile(int(spec["d"]))
        if kind == "cyclotomic":
            return cyclotomic_profile(int(spec["m"]))
        if kind == "table":
            return table_profile(spec["values"], int(spec["degree"]), spec.get("default"),
                                 bool(spec.get("galois", False)))
        raise DomainError(f"unknown profile kind {kind!r}")
    text = str(spec).strip()
    kind, _, arg = text.partition(":")
    try:
        if kind == "rational":
            return rational_profile()
        if kind == "quadratic":
            return quadratic_profile(int(arg))
        if kind == "cyclotomic":
            return cyclotomic_profile(int(arg))
        if kind == "table":
            fields = arg.split(";")
            values = dict(item.split("=") for item in fields[0].split(",") if item)
            opts = {}
            galois = False
            for item in fields[1:]:
                if item == "galois":
                    galois = True
                else:
                    key, _, val = item.partition("=")
                    opts[key] = int(val)
            if "degree" not in opts:
                raise DomainError("table profile needs ;degree=<d>")
            return table_profile(values, opts["degree"], opts.get("default"), galois)
    except ValueError as exc:
        raise DomainError(f"cannot parse profile {text!r}: {exc}") from None
    raise DomainError(f"unknown profile {text!r}")


# ---------------------------------------------------------------------------
# e-invariant, ring equality and containment


def prob_e(k: int, n: int, tol=Fraction(1, 10**6)) -> CertifiedInterval:
    """P_n[e = k] = zeta(n+1)/zeta(n) * phi(k) / k^(n+1)."""
    if k < 1 or n < 2:
        raise DomainError("need k >= 1 and n >= 2")
    return zeta_ratio(n, tol) * Fraction(euler_phi(k), k ** (n + 1))


def prob_ring_equals(k: int, n: int, tol=Fraction(1, 10**6)) -> CertifiedInterval:
    """zeta(n+1)/zeta(n) times the product of beta_{p,n} over primes p | k."""
    if k < 1 or n < 2:
        raise DomainError("need k >= 1 and n >= 2")
    factor = Fraction(1)
    for p in prime_factors(k):
        factor *= local_factors(p, n)[1]
    return zeta_ratio(n, tol) * factor


def prob_X_contains(Y, profile=None, n: int = 2) -> Fraction:
    """Exact probability that every prime above each p in Y lies in X."""
    out = Fraction(1)
    for p in sorted(set(Y)):
        num, den = alpha_beta_ratio(p, n) if is_prime(p) else (None, None)
        if num is None:
            raise DomainError(f"{p} is not prime")
        out *= Fraction(num, den)
    return out


def _tail_sum_interval(m: int, n: int) -> tuple[Fraction, Fraction]:
    """Bounds for sum_{j > m} j^-n (m >= 1) from the integral test."""
    return Fraction(1, (n - 1) * (m + 1) ** (n - 1)), Fraction(1, (n - 1) * m ** (n - 1))


def phi_series_tail(K: int, n: int, bits: int = 160) -> CertifiedInterval:
    """Certified sum_{k > K} phi(k) / k^(n+1).

    Writing phi(k)/k = sum_{d | k} mu(d)/d turns the tail into
    sum_d mu(d) d^-(n+1) sum_{j > K/d} j^-n.  Divisors d <= K use the
    integral-test bounds for the inner sum; all d > K together contribute at
    most zeta(n) / (n K^n) in absolute value.
    """
    from .factorstats import _mobius

    lo = hi = 0
    for d in range(1, K + 1):
        mu = _mobius(d)
        if mu == 0:
            continue
        m = K // d
        t_lo, t_hi = _tail_sum_interval(m, n)
        den = d ** (n + 1)
        a = fx_floor(t_lo.numerator, t_lo.denominator * den, bits)
        b = fx_ceil(t_hi.numerator, t_hi.denominator * den, bits)
        if mu > 0:
            lo, hi = lo + a, hi + b
        else:
            lo, hi = lo - b, hi - a
    rest = zeta_interval(n, 200).hi / (n * Fraction(K) ** n)
    out = CertifiedInterval.from_fixed(lo, hi, bits)
    return CertifiedInterval(max(Fraction(0), out.lo - rest), out.hi + rest)


def prob_e_normalization(K: int, n: int, tol=Fraction(1, 10**6), crude: bool = False) -> CertifiedInterval:
    """sum_{k <= K} P[e = k] plus a certified tail; must contain 1.

    ``crude=True`` uses the plain bound sum_{k > K} phi(k)/k^(n+1) <= sum_{k>K} k^-n.
    """
    bits = 160
    lo = hi = 0
    for k in range(1, K + 1):
        num, den = euler_phi(k), k ** (n + 1)
        lo += fx_floor(num, den, bits)
        hi += fx_ceil(num, den, bits)
    partial = CertifiedInterval.from_fixed(lo, hi, bits)
    if crude:
        tail = CertifiedInterval(Fraction(0), _tail_sum_interval(K, n)[1])
    else:
        tail = phi_series_tail(K, n, bits)
    return zeta_ratio(n, tol) * (partial + tail)


# ---------------------------------------------------------------------------
# the coefficient DP


class _PrimeState:
    """Fixed-point running data over the primes below N for one (profile, n).

    Holds lo/hi bounds for
      * C_N   = prod alpha_p,
      * dp[t] = sum over Y with r-sum t of prod beta_p  (t <= T),
      * e[j][k] = k-th elementary symmetric sum of w_p = alpha_p beta_p over
        primes with r(p) = j (k <= 4), for the combinatorial moments,
      * E and Var partial sums and prod (1 + 2^r beta)/(1 + beta).
    """

    S_MAX = 4

    def __init__(self, profile: SplittingProfile, n: int, T: int, bits: int = PRECISION):
        if n < 2:
            raise DomainError("n must be >= 2")
        self.profile, self.n, self.T, self.bits = profile, n, T, bits
        one = 1 << bits
        self.N = 2  # next prime to process
        self.count = 0
        self.C_lo = self.C_hi = one
        self.dp_lo = [one] + [0] * T
        self.dp_hi = [one] + [0] * T
        d = profile.degree
        self.e_lo = [[one] + [0] * self.S_MAX for _ in range(d + 1)]
        self.e_hi = [[one] + [0] * self.S_MAX for _ in range(d + 1)]
        self.E_lo = self.E_hi = 0
        self.V_lo = self.V_hi = 0
        self.F2_hi = one

    def extend_to(self, N: int) -> None:
        """Process every prime below N."""
        if N <= self.N:
            return
        bits, n, T = self.bits, self.n, self.T
        for p in primes_below(N):
            if p < self.N:
                continue
            r = self.profile(p)
            an, ad = alpha_ratio(p, n)
            bn, bd = beta_ratio(p, n)
            wn, wd = alpha_beta_ratio(p, n)
            a_lo, a_hi = fx_floor(an, ad, bits), fx_ceil(an, ad, bits)
            b_lo, b_hi = fx_floor(bn, bd, bits), fx_ceil(bn, bd, bits)
            w_lo, w_hi = fx_floor(wn, wd, bits), fx_ceil(wn, wd, bits)
            self.C_lo = fx_mul_floor(self.C_lo, a_lo, bits)
            self.C_hi = fx_mul_ceil(self.C_hi, a_hi, bits)
            lo, hi = self.dp_lo, self.dp_hi
            for t in range(T, r - 1, -1):
                if hi[t - r]:
                    lo[t] += fx_mul_floor(lo[t - r], b_lo, bits)
                    hi[t] += fx_mul_ceil(hi[t - r], b_hi, bits)
            el, eh = self.e_lo[r], self.e_hi[r]
            for k in range(self.S_MAX, 0, -1):
                el[k] += fx_mul_floor(el[k - 1], w_lo, bits)
                eh[k] += fx_mul_ceil(eh[k - 1], w_hi, bits)
            self.E_lo += r * w_lo
            self.E_hi += r * w_hi
            # w (1 - w) r^2
            self.V_lo += r * r * fx_mul_floor(w_lo, (1 << bits) - w_hi, bits)
            self.V_hi += r * r * fx_mul_ceil(w_hi, (1 << bits) - w_lo, bits)
            # (1 + 2^r beta) / (1 + beta) = 1 + (2^r - 1) alpha beta
            self.F2_hi = fx_mul_ceil(self.F2_hi, (1 << bits) + (2**r - 1) * w_hi, bits)
            self.count += 1
        nxt = N
        while not is_prime(nxt):
            nxt += 1
        self.N = nxt

    # -- tail quantities -------------------------------------------------

    def eps(self) -> Fraction:
        return tail_epsilon(self.N, self.n)

    def eps_fixed(self) -> int:
        e = self.eps()
        return fx_ceil(e.numerator, e.denominator, self.bits)

    def C_interval_fixed(self) -> tuple[int, int]:
        e = self.eps()
        tail_lo = fx_floor(e.denominator - e.numerator, e.denominator, self.bits)
        return fx_mul_floor(self.C_lo, tail_lo, self.bits), self.C_hi


_SNAPSHOTS: dict[tuple, dict[int, _PrimeState]] = {}


def _state(profile: SplittingProfile, n: int, T: int, N: int) -> _PrimeState:
    """State for (profile, n) with every prime below N processed.

    Snapshots are kept per cutoff and extended from the nearest smaller one,
    so the result depends only on the arguments, never on call history.
    """
    alloc = 64
    while alloc < T:
        alloc *= 2
    snaps = _SNAPSHOTS.setdefault((profile.id, n, alloc), {})
    if N in snaps:
        return snaps[N]
    below = [c for c in snaps if c < N]
    if below:
        st = copy.deepcopy(snaps[max(below)])
        st.profile = profile
    else:
        st = _PrimeState(profile, n, alloc)
    st.extend_to(N)
    snaps[N] = st
    return st


@dataclass
class CoefficientTable:
    n: int
    profile_id: str
    N: int
    cutoff: int
    dp: dict[int, CertifiedInterval]
    intervals: dict[int, CertifiedInterval]
    eps: Fraction

    @property
    def t_max(self) -> int:
        return max(self.intervals)

    def max_width(self) -> Fraction:
        return max(iv.width for iv in self.intervals.values())


def _coefficient_intervals(st: _PrimeState, t_max: int) -> dict[int, CertifiedInterval]:
    bits = st.bits
    C_lo, C_hi = st.C_interval_fixed()
    eps_fx = st.eps_fixed()
    d = st.profile.degree
    one = 1 << bits
    # B[t2] >= mass of prime sets above N with r-sum t2: eps^ceil(t2/d) / (1 - eps)
    inv_geom = fx_ceil(one, one - eps_fx, bits)
    B = [0] * (t_max + 1)
    for t2 in range(1, t_max + 1):
        k = -(-t2 // d)
        v = one
        for _ in range(k):
            v = fx_mul_ceil(v, eps_fx, bits)
        B[t2] = fx_mul_ceil(v, inv_geom, bits)
    out = {}
    for t in range(t_max + 1):
        lo = fx_mul_floor(C_lo, st.dp_lo[t], bits)
        inner = st.dp_hi[t] + sum(fx_mul_ceil(st.dp_hi[t - t2], B[t2], bits) for t2 in range(1, t + 1))
        per_t = fx_mul_ceil(C_hi, inner, bits)
        mass = fx_mul_ceil(C_hi, st.dp_hi[t], bits) + eps_fx
        out[t] = CertifiedInterval.from_fixed(lo, min(per_t, mass, one), bits)
    return out


def coefficient_table(profile, n: int, t_max: int, tol=Fraction(1, 10**5), max_N: int = DEFAULT_MAX_N,
                      N: int | None = None) -> CoefficientTable:
    """Certified intervals for a_t = P_n[|X| = t], t = 0..t_max.

    Lower bounds use the truncated product and subset sums.  Upper bounds
    take the smaller of two valid bounds: the total mass eps_N of all prime
    sets touching p >= N, and a per-t bound that adds the mass of such sets
    with r-sum t2 (at most eps_N^ceil(t2/d) / (1 - eps_N)) times the
    truncated mass at t - t2.  N doubles until every width is at most tol.
    """
    profile = make_profile(profile)
    if t_max < 0:
        raise DomainError("t_max must be >= 0")
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    cutoff = N or 64
    while True:
        st = _state(profile, n, t_max, cutoff)
        intervals = _coefficient_intervals(st, t_max)
        widths = max(iv.width for iv in intervals.values())
        if N is not None or widths <= tol:
            break
        if cutoff * 2 > max_N:
            raise BudgetExceeded(
                f"width {float(widths):.3g} > tol at prime cutoff {cutoff}; raise max_N",
                required=cutoff * 2,
            )
        cutoff *= 2
    dp = {t: CertifiedInterval.from_fixed(st.dp_lo[t], st.dp_hi[t], st.bits) for t in range(t_max + 1)}
    return CoefficientTable(n, profile.id, st.N, cutoff, dp, intervals, st.eps())


# ---------------------------------------------------------------------------
# moments


def expectation_variance(profile, n: int, tol=Fraction(1, 10**4), max_N: int = DEFAULT_MAX_N,
                         N: int | None = None) -> tuple[CertifiedInterval, CertifiedInterval]:
    """E = sum_p alpha beta r(p) and Var = sum_p alpha beta (1 - alpha beta) r(p)^2.

    Primes p >= N add at most d * eps_N to E and d^2 * eps_N to Var.
    """
    profile = make_profile(profile)
    tol = Fraction(tol)
    d = profile.degree
    cutoff = N or 64
    while True:
        st = _state(profile, n, 0, cutoff)
        eps = st.eps()
        E = CertifiedInterval.from_fixed(st.E_lo, st.E_hi, st.bits) + CertifiedInterval(0, d * eps)
        V = CertifiedInterval.from_fixed(st.V_lo, st.V_hi, st.bits) + CertifiedInterval(0, d * d * eps)
        if N is not None or max(E.width, V.width) <= tol:
            return E, V
        if cutoff * 2 > max_N:
            raise BudgetExceeded("expectation/variance tolerance not reached", required=cutoff * 2)
        cutoff *= 2


def series_moments(table: CoefficientTable, profile, s_max: int, tail_from: int | None = None):
    """Intervals for sum_t t^s a_t, s = 1..s_max, from a coefficient table.

    Terms beyond the table are bounded with sum_t 2^t a_t = f(2):
    sum_{t > T} t^s a_t <= max_{t > T} (t^s / 2^t) * f(2).
    """
    profile = make_profile(profile)
    st = _state(profile, table.n, table.t_max, table.cutoff)
    T = table.t_max
    if T + 1 < s_max / math.log(2):
        raise DomainError("table too short for the geometric tail bound")
    eps = st.eps()
    d = profile.degree
    grow = (2**d - 1) * eps
    if grow >= 1:
        raise DomainError("prime cutoff too small for the f(2) tail bound")
    f2 = Fraction(st.F2_hi, 1 << st.bits) / (1 - grow)
    out = {}
    for s in range(1, s_max + 1):
        lo = sum((t**s * table.intervals[t].lo for t in range(T + 1)), Fraction(0))
        hi = sum((t**s * table.intervals[t].hi for t in range(T + 1)), Fraction(0))
        tail = Fraction((T + 1) ** s, 2 ** (T + 1)) * f2
        out[s] = CertifiedInterval(lo, hi + tail)
    return out


def _stirling2(k: int, j: int) -> int:
    """Number of partitions of a k-set into j blocks."""
    return sum((-1) ** (j - i) * math.comb(j, i) * i**k for i in range(j + 1)) // math.factorial(j)


def _power_tail(k: int, d: int, eps: Fraction) -> Fraction:
    """Upper bound for E[T^k], T = sum_{p >= N} r(p) [p in X].

    Expanding (sum_p r_p B_p)^k over set partitions of the k factors,
    E[T^k] <= d^k sum_j S(k, j) (sum_p w_p)^j and sum_p w_p <= eps.
    """
    return d**k * sum(_stirling2(k, j) * eps**j for j in range(1, k + 1))


def _surjection_weight(counts: tuple[int, ...], s: int) -> int:
    """sum over A inside Y of (-1)^(|Y|-|A|) (r-sum of A)^s.

    Y holds counts[j-1] primes with r = j; the value depends only on counts.
    """
    total = 0
    ranges = [range(c + 1) for c in counts]
    for a in product(*ranges):
        sign = (-1) ** (sum(counts) - sum(a))
        mult = 1
        for c, x in zip(counts, a):
            mult *= math.comb(c, x)
        rs = sum((j + 1) * x for j, x in enumerate(a))
        total += sign * mult * rs**s
    return total


def combinatorial_moments(profile, n: int, s_max: int, N: int) -> dict[int, CertifiedInterval]:
    """Moments by inclusion-exclusion over prime sets Y with |Y| <= s.

    P[Y inside X] = prod_{p in Y} alpha beta, and the inner alternating sum
    over subsets A of Y depends only on how many primes of each r-class Y
    holds, so the outer sum factors through elementary symmetric sums.
    Primes p >= N contribute T = sum r(p) [p in X], independent of the
    truncated sum S, so E[(S+T)^s] - E[S^s] = sum_{k>=1} C(s,k) E[S^(s-k)] E[T^k].
    """
    profile = make_profile(profile)
    if not 1 <= s_max <= _PrimeState.S_MAX:
        raise DomainError(f"s must be in [1, {_PrimeState.S_MAX}]")
    st = _state(profile, n, 0, N)
    d = profile.degree
    bits = st.bits
    trunc = {0: (Fraction(1), Fraction(1))}
    for s in range(1, s_max + 1):
        lo = hi = 0
        for counts in product(range(s + 1), repeat=d):
            k = sum(counts)
            if k == 0 or k > s:
                continue
            g = _surjection_weight(counts, s)
            if g == 0:
                continue
            assert g > 0
            p_lo = p_hi = 1 << bits
            for j, c in enumerate(counts, start=1):
                p_lo = fx_mul_floor(p_lo, st.e_lo[j][c], bits)
                p_hi = fx_mul_ceil(p_hi, st.e_hi[j][c], bits)
            lo += g * p_lo
            hi += g * p_hi
        trunc[s] = (Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))
    eps = st.eps()
    out = {}
    for s in range(1, s_max + 1):
        extra = sum(
            math.comb(s, k) * trunc[s - k][1] * _power_tail(k, d, eps) for k in range(1, s + 1)
        )
        out[s] = CertifiedInterval(trunc[s][0], trunc[s][1] + extra)
    return out


def moment(profile, n: int, s: int, tol=Fraction(1, 10**4), max_N: int = DEFAULT_MAX_N):
    """(series, combinatorial) intervals for E[|X|^s], s in 1..4."""
    profile = make_profile(profile)
    if not 1 <= s <= 4:
        raise DomainError("s must be in [1, 4]")
    tol = Fraction(tol)
    T = 60
    cutoff = 64
    while True:
        table = coefficient_table(profile, n, T, N=cutoff)
        series = series_moments(table, profile, s)[s]
        comb = combinatorial_moments(profile, n, s, cutoff)[s]
        if max(series.width, comb.width) <= tol:
            return series, comb
        if cutoff * 2 > max_N:
            raise BudgetExceeded("moment tolerance not reached", required=cutoff * 2)
        cutoff *= 2


# ---------------------------------------------------------------------------
# monotonicity


def _divisors(d: int) -> list[int]:
    return [j for j in range(1, d + 1) if d % j == 0]


def general_threshold(d: int) -> int:
    d1 = math.lcm(*range(1, d + 1))
    return (d - 1) * d1 - d * (d + 1) // 2 + 1


def galois_threshold(d: int) -> int:
    divs = _divisors(d)
    return d * (len(divs) - 1) - sum(divs) + 1


@dataclass
class MonotonicityReport:
    profile_id: str
    n: int
    d: int
    d1: int
    general_threshold: int
    galois_threshold: int | None
    N: int
    rows: list[dict]

    def undecided(self) -> list[dict]:
        return [r for r in self.rows if r["relation"] == "?"]


def monotonicity_scan(profile, n: int, t_max: int, tol=Fraction(1, 10**5),
                      max_N: int = DEFAULT_MAX_N) -> MonotonicityReport:
    """Compare a_t with a_{t+d1} (and with a_{t+d} for Galois profiles)."""
    profile = make_profile(profile)
    d = profile.degree
    d1 = math.lcm(*range(1, d + 1))
    top = t_max + max(d1, d)
    table = coefficient_table(profile, n, top, tol, max_N=max_N)
    iv = table.intervals
    g_thr = galois_threshold(d) if profile.galois else None
    rows = []
    steps = [("lcm", d1, general_threshold(d))]
    if profile.galois and d != d1:
        steps.append(("galois", d, g_thr))
    elif profile.galois:
        steps = [("lcm", d1, min(general_threshold(d), g_thr))]
    for t in range(t_max + 1):
        for kind, step, thr in steps:
            rows.append({
                "t": t,
                "kind": kind,
                "step": step,
                "relation": iv[t].compare(iv[t + step]),
                "predicted": ">" if t >= thr else "",
            })
    return MonotonicityReport(profile.id, n, d, d1, general_threshold(d), g_thr, table.N, rows)


# ---------------------------------------------------------------------------
# Lambda(d, t) and the b-tables (exact, small cutoffs)


@lru_cache(maxsize=None)
def lambda_set(d: int, t: int, divisors_only: bool = False) -> tuple[tuple[int, ...], ...]:
    """Tuples (l_1..l_d) of non-negative integers with sum j l_j = t.

    With ``divisors_only`` the entries at j not dividing d must vanish.
    """
    if d < 1 or t < 0:
        raise DomainError("need d >= 1 and t >= 0")
    if d > 8 or t > 64:
        raise BudgetExceeded("Lambda tables are materialized for d <= 8, t <= 64", required=max(d, t))
    allowed = [j for j in range(1, d + 1) if not divisors_only or d % j == 0]

    def rec(idx, remaining):
        if idx == len(allowed):
            if remaining == 0:
                yield ()
            return
        j = allowed[idx]
        for c in range(remaining // j + 1):
            for rest in rec(idx + 1, remaining - j * c):
                yield (c,) + rest

    out = []
    for combo in rec(0, t):
        lam = [0] * d
        for j, c in zip(allowed, combo):
            lam[j - 1] = c
        out.append(tuple(lam))
    return tuple(sorted(out, reverse=True))


def addition_surjective(d: int, a: int, b: int, divisors_only: bool = False) -> bool:
    """Is Lambda(d,a) x Lambda(d,b) -> Lambda(d,a+b) onto?"""
    sums = {tuple(x + y for x, y in zip(u, v))
            for u in lambda_set(d, a, divisors_only) for v in lambda_set(d, b, divisors_only)}
    return sums == set(lambda_set(d, a + b, divisors_only))


def b_table(profile, n: int, N: int, t_max: int) -> dict[int, list[Fraction]]:
    """b[j][t]: t-th elementary symmetric sum of beta_p over p < N with r(p) = j."""
    profile = make_profile(profile)
    b = {j: [Fraction(1)] + [Fraction(0)] * t_max for j in range(1, profile.degree + 1)}
    for p in primes_below(N):
        row = b[profile(p)]
        beta = local_factors(p, n)[1]
        for t in range(t_max, 0, -1):
            row[t] += row[t - 1] * beta
    return b


def exact_dp(profile, n: int, N: int, t_max: int) -> list[Fraction]:
    """Exact truncated subset sums, one prime at a time."""
    profile = make_profile(profile)
    dp = [Fraction(1)] + [Fraction(0)] * t_max
    for p in primes_below(N):
        r = profile(p)
        beta = local_factors(p, n)[1]
        for t in range(t_max, r - 1, -1):
            dp[t] += dp[t - r] * beta
    return dp


def lambda_dp(profile, n: int, N: int, t_max: int) -> list[Fraction]:
    """The same subset sums regrouped over Lambda(d, t)."""
    profile = make_profile(profile)
    b = b_table(profile, n, N, t_max)
    out = []
    for t in range(t_max + 1):
        total = Fraction(0)
        for lam in lambda_set(profile.degree, t):
            term = Fraction(1)
            for j, c in enumerate(lam, start=1):
                if c:
                    term *= b[j][c] if c <= t_max else 0
            total += term
        out.append(total)
    return out


def growth_table(table: CoefficientTable) -> list[dict]:
    """Exploratory: -log a_t / (t log t) at the interval midpoints (not asserted)."""
    rows = []
    for t, iv in table.intervals.items():
        if t < 2 or iv.lo <= 0:
            continue
        val = -math.log(float(iv.mid)) / (t * math.log(t))
        rows.append({"t": t, "ratio": val})
    return rows


# ---------------------------------------------------------------------------
# rendering


def coefficient_rows(table: CoefficientTable, digits: int = 12) -> list[dict]:
    rows = []
    ts = sorted(table.intervals)
    for t in ts:
        iv = table.intervals[t]
        nxt = table.intervals.get(t + 1)
        row = {"t": t, **iv.as_dict(digits)}
        row["vs_next"] = iv.compare(nxt) if nxt is not None else ""
        rows.append(row)
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    fields = list(dict.fromkeys(k for row in rows for k in row))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, restval="", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
