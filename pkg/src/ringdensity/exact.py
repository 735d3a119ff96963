"""Exact rational constants, certified intervals and small combinatorial tables.

Certified values are closed intervals whose endpoints are exact
``fractions.Fraction`` objects.  Long Euler products are evaluated in
fixed point (integers scaled by ``2**bits``) with every rounding directed
outward, so the returned endpoints are still exact rationals that bracket
the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import DomainError

#: default fixed-point precision (bits after the binary point)
PRECISION = 384


# ---------------------------------------------------------------------------
# primes


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes(segment: int = 1 << 15) -> Iterator[int]:
    """Yield every prime in increasing order (segmented sieve, unbounded)."""
    base: list[int] = []
    lo = 2
    while True:
        hi = lo + segment
        root = math.isqrt(hi - 1)
        if not base or base[-1] < root:
            base = primes_below(root + 1)
        mark = bytearray([1]) * (hi - lo)
        for q in base:
            start = max(q * q, (lo + q - 1) // q * q)
            if start >= hi:
                continue
            mark[start - lo :: q] = bytes(len(range(start - lo, hi - lo, q)))
        for i, flag in enumerate(mark):
            if flag:
                yield lo + i
        lo = hi


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 3:
        return ()
    mark = bytearray([1]) * limit
    mark[0] = mark[1] = 0
    for q in range(2, math.isqrt(limit - 1) + 1):
        if mark[q]:
            mark[q * q :: q] = bytes(len(range(q * q, limit, q)))
    return tuple(i for i, flag in enumerate(mark) if flag)


def primes_below(limit: int) -> list[int]:
    """All primes p < limit."""
    return list(_sieve(int(limit)))


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of |n| in increasing order (trial division)."""
    n = abs(n)
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def euler_phi(k: int) -> int:
    if k < 1:
        raise DomainError("phi needs k >= 1")
    out = k
    for q in prime_factors(k):
        out -= out // q
    return out


# ---------------------------------------------------------------------------
# certified intervals


def _floor_decimal(x: Fraction, digits: int) -> str:
    scale = 10**digits
    v = math.floor(x * scale)
    return _fmt_scaled(v, digits)


def _ceil_decimal(x: Fraction, digits: int) -> str:
    scale = 10**digits
    v = math.ceil(x * scale)
    return _fmt_scaled(v, digits)


def _fmt_scaled(v: int, digits: int) -> str:
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, frac = divmod(v, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value of the float
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed interval [lo, hi] of exact rationals bracketing a real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _as_fraction(self.lo), _as_fraction(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "CertifiedInterval":
        x = _as_fraction(x)
        return cls(x, x)

    @classmethod
    def from_fixed(cls, lo: int, hi: int, bits: int = PRECISION) -> "CertifiedInterval":
        return cls(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, CertifiedInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def intersects(self, other: "CertifiedInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def certainly_lt(self, other: "CertifiedInterval") -> bool:
        return self.hi < other.lo

    def certainly_gt(self, other: "CertifiedInterval") -> bool:
        return self.lo > other.hi

    def compare(self, other: "CertifiedInterval") -> str:
        """'>' or '<' when the intervals are separated, '?' otherwise."""
        if self.certainly_gt(other):
            return ">"
        if self.certainly_lt(other):
            return "<"
        return "?"

    def __add__(self, other):
        if not isinstance(other, CertifiedInterval):
            other = CertifiedInterval.point(other)
        return CertifiedInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return CertifiedInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        if not isinstance(other, CertifiedInterval):
            other = CertifiedInterval.point(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CertifiedInterval):
            other = CertifiedInterval.point(other)
        prods = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return CertifiedInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def reciprocal(self) -> "CertifiedInterval":
        if self.lo <= 0 <= self.hi:
            raise DomainError("reciprocal of an interval containing 0")
        return CertifiedInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if not isinstance(other, CertifiedInterval):
            other = CertifiedInterval.point(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return CertifiedInterval.point(other) * self.reciprocal()

    def square(self) -> "CertifiedInterval":
        if self.lo >= 0:
            return CertifiedInterval(self.lo**2, self.hi**2)
        if self.hi <= 0:
            return CertifiedInterval(self.hi**2, self.lo**2)
        return CertifiedInterval(Fraction(0), max(self.lo**2, self.hi**2))

    def rounded(self, bits: int) -> "CertifiedInterval":
        """Outward rounding onto the grid 2**-bits (keeps denominators small)."""
        s = 1 << bits
        return CertifiedInterval(
            Fraction(math.floor(self.lo * s), s), Fraction(math.ceil(self.hi * s), s)
        )

    def decimals(self, digits: int = 12) -> tuple[str, str]:
        """Decimal strings for (lo, hi), truncated outward."""
        return _floor_decimal(self.lo, digits), _ceil_decimal(self.hi, digits)

    def __str__(self):
        lo, hi = self.decimals(10)
        return f"[{lo}, {hi}]"

    def as_dict(self, digits: int = 12) -> dict:
        lo_d, hi_d = self.decimals(digits)
        return {"lo": str(self.lo), "hi": str(self.hi), "lo_dec": lo_d, "hi_dec": hi_d}


# ---------------------------------------------------------------------------
# fixed-point helpers (non-negative quantities only)


def fx_floor(num: int, den: int, bits: int = PRECISION) -> int:
    return (num << bits) // den


def fx_ceil(num: int, den: int, bits: int = PRECISION) -> int:
    return -((-num << bits) // den)


def fx_mul_floor(a: int, b: int, bits: int = PRECISION) -> int:
    return (a * b) >> bits


def fx_mul_ceil(a: int, b: int, bits: int = PRECISION) -> int:
    return -((-a * b) >> bits)


# ---------------------------------------------------------------------------
# local factors


def _check_local(p: int, n: int) -> None:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def alpha_ratio(p: int, n: int) -> tuple[int, int]:
    """(num, den) of alpha_{p,n} = (1 - p^-n) / (1 - p^-(n+1))."""
    return p * (p**n - 1), p ** (n + 1) - 1


def beta_ratio(p: int, n: int) -> tuple[int, int]:
    """(num, den) of beta_{p,n} = p^-n (1 - 1/p) / (1 - p^-n)."""
    return p - 1, p * (p**n - 1)


def alpha_beta_ratio(p: int, n: int) -> tuple[int, int]:
    """(num, den) of alpha*beta = (p - 1) / (p^(n+1) - 1)."""
    return p - 1, p ** (n + 1) - 1


def local_factors(p: int, n: int) -> tuple[Fraction, Fraction]:
    """Return ``(alpha_{p,n}, beta_{p,n})`` as exact rationals.

    >>> local_factors(2, 2)
    (Fraction(6, 7), Fraction(1, 6))
    """
    _check_local(p, n)
    alpha = (1 - Fraction(1, p**n)) / (1 - Fraction(1, p ** (n + 1)))
    beta = Fraction(1, p**n) * (1 - Fraction(1, p)) / (1 - Fraction(1, p**n))
    assert alpha * (1 + beta) == 1
    return alpha, beta


def tail_epsilon(N: int, n: int) -> Fraction:
    """1 / ((n-1)(N-1)^(n-1)); dominates sum_{m >= N} m^-n."""
    return Fraction(1, (n - 1) * (N - 1) ** (n - 1))


def tail_factor(N: int, n: int) -> CertifiedInterval:
    """Interval bracketing prod_{p >= N} alpha_{p,n}."""
    if N < 2 or n < 2:
        raise DomainError("tail_factor needs N >= 2 and n >= 2")
    eps = tail_epsilon(N, n)
    return CertifiedInterval(max(Fraction(0), 1 - eps), Fraction(1))


class EulerProduct:
    """Running fixed-point bounds on prod_{p < N} alpha_{p,n}.

    Call :meth:`advance` to fold in the next prime; ``N`` is then the next
    prime, i.e. the first one not yet in the product.
    """

    def __init__(self, n: int, bits: int = PRECISION):
        if n < 2:
            raise DomainError(f"n must be >= 2, got {n}")
        self.n = n
        self.bits = bits
        self._primes = primes()
        self.N = next(self._primes)
        self.lo = 1 << bits
        self.hi = 1 << bits
        self.count = 0

    def advance(self) -> int:
        p = self.N
        num, den = alpha_ratio(p, self.n)
        self.lo = fx_mul_floor(self.lo, fx_floor(num, den, self.bits), self.bits)
        self.hi = fx_mul_ceil(self.hi, fx_ceil(num, den, self.bits), self.bits)
        self.N = next(self._primes)
        self.count += 1
        return p

    def tail_lo_fixed(self) -> int:
        eps = tail_epsilon(self.N, self.n)
        return max(0, fx_floor(eps.denominator - eps.numerator, eps.denominator, self.bits))

    def interval_fixed(self) -> tuple[int, int]:
        """Fixed-point (lo, hi) for the full product, tail included."""
        return fx_mul_floor(self.lo, self.tail_lo_fixed(), self.bits), self.hi


def _tol_fixed(tol, bits: int) -> int:
    tol = _as_fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return math.floor(tol * (1 << bits))


@lru_cache(maxsize=64)
def _zeta_ratio_cached(n: int, tol: Fraction, bits: int) -> tuple[CertifiedInterval, int]:
    t = _tol_fixed(tol, bits)
    prod = EulerProduct(n, bits)
    prod.advance()  # the smallest admissible cutoff is N = 3
    lo, hi = prod.interval_fixed()
    while hi - lo > t:
        prod.advance()
        new_lo, new_hi = prod.interval_fixed()
        lo, hi = max(lo, new_lo), min(hi, new_hi)
    return CertifiedInterval.from_fixed(lo, hi, bits), prod.N


def zeta_ratio(n: int, tol, bits: int = PRECISION) -> CertifiedInterval:
    """Certified interval for zeta(n+1)/zeta(n) of width at most ``tol``.

    The product of alpha_{p,n} over p < N is multiplied by the tail interval
    of :func:`tail_factor`; N runs through the primes (starting at 3) and the
    running intersection is returned, so smaller tolerances give nested
    intervals.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return _zeta_ratio_cached(n, _as_fraction(tol), bits)[0]


def zeta_ratio_cutoff(n: int, tol, bits: int = PRECISION) -> int:
    """The prime cutoff N used by :func:`zeta_ratio` for this tolerance."""
    return _zeta_ratio_cached(n, _as_fraction(tol), bits)[1]


def zeta_interval(s: int, terms: int = 2000) -> CertifiedInterval:
    """zeta(s), s >= 2, from a partial sum plus integral remainder bounds."""
    if s < 2:
        raise DomainError("zeta_interval needs s >= 2")
    K = terms
    partial = sum(Fraction(1, k**s) for k in range(1, K + 1))
    lo = partial + Fraction(1, (s - 1) * (K + 1) ** (s - 1))
    hi = partial + Fraction(1, (s - 1) * K ** (s - 1))
    return CertifiedInterval(lo, hi)


# ---------------------------------------------------------------------------
# partitions and the Stirling row


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]
    b: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        parts = tuple(sorted(self.parts, reverse=True))
        if any(q < 1 for q in parts):
            raise DomainError("partition parts must be positive")
        object.__setattr__(self, "parts", parts)
        mult: dict[int, int] = {}
        for q in parts:
            mult[q] = mult.get(q, 0) + 1
        object.__setattr__(self, "b", mult)

    @property
    def total(self) -> int:
        return sum(self.parts)

    def multiplicity(self, i: int) -> int:
        return self.b.get(i, 0)

    def __str__(self):
        return "+".join(map(str, self.parts))


def _parts(m: int, i: int, largest: int):
    if i == 0:
        if m == 0:
            yield ()
        return
    # the remaining i-1 parts are each >= 1 and <= the current part
    for first in range(min(largest, m - (i - 1)), 0, -1):
        if first * i < m:
            break
        for rest in _parts(m - first, i - 1, first):
            yield (first,) + rest


def partitions_with_parts(m: int, i: int) -> list[Partition]:
    """Partitions of m into exactly i parts, lexicographically descending."""
    if m < 1 or not 1 <= i <= m:
        raise DomainError(f"need 1 <= i <= m, got m={m}, i={i}")
    return [Partition(p) for p in _parts(m, i, m)]


def rising_factorial_coefficients(m: int) -> list[int]:
    """Coefficients c_0..c_m of prod_{j=0}^{m-1} (y + j)."""
    coeffs = [1]
    for j in range(m):
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] += j * c
        coeffs = nxt
    return coeffs


def stirling_density_row(m: int) -> dict[int, Fraction]:
    """Coefficient of y^i in prod_{j<m}(y+j)/m! for 1 <= i <= m."""
    if m < 1:
        raise DomainError("m must be >= 1")
    coeffs = rising_factorial_coefficients(m)
    fact = math.factorial(m)
    return {i: Fraction(coeffs[i], fact) for i in range(1, m + 1)}
