"""Integer polynomials: normalization, e-invariant, discriminants, irreducibility.

Coefficient sequences are low degree first: ``[a_0, a_1, ..., a_n]``.
The Sylvester matrix is built leading coefficient first; in that indexing
the polynomial reads ``A_0 x^n + A_1 x^(n-1) + ... + A_n``, so ``A_0`` is the
leading coefficient and ``A_{n-1}`` is the coefficient of ``x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product

from . import gfp
from .errors import BudgetExceeded, DomainError
from .exact import is_prime


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        if not c:
            raise DomainError("the zero polynomial has no degree")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def height(self) -> int:
        return max(abs(a) for a in self.coeffs)

    @property
    def content(self) -> int:
        return reduce(math.gcd, self.coeffs)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * a for i, a in enumerate(self.coeffs))[1:] or (0,))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __neg__(self):
        return IntPolynomial(tuple(-a for a in self.coeffs))

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(abs(a)) if (abs(a) != 1 or i == 0) else ""
            sign = "-" if a < 0 else "+"
            terms.append((sign, coef + ("*" if coef and mono else "") + mono))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {t}" for s, t in terms[1:])


def divide_exact(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial | None:
    """f / g in Z[x] if g divides f, else None."""
    r = list(f.coeffs)
    dg = g.degree
    if f.degree < dg:
        return None
    q = [0] * (f.degree - dg + 1)
    for k in range(f.degree, dg - 1, -1):
        c, rem = divmod(r[k], g.leading)
        if rem:
            return None
        q[k - dg] = c
        if c:
            for j in range(dg + 1):
                r[k - dg + j] -= c * g.coeffs[j]
    if any(r[:dg]):
        return None
    return IntPolynomial(tuple(q))


class Rejection(enum.Enum):
    ZERO = "zero polynomial"
    DEGREE_MISMATCH = "degree mismatch"
    REDUCIBLE = "reducible"


@dataclass(frozen=True)
class NormalizedRep:
    """Minimal polynomial of an algebraic number; stands for its n roots."""

    poly: IntPolynomial

    @property
    def weight(self) -> int:
        return self.poly.degree

    @property
    def degree(self) -> int:
        return self.poly.degree


def normalize(coeffs, degree: int | None = None):
    """Canonical minimal-polynomial representative or a :class:`Rejection`.

    Divides out the content, makes the leading coefficient positive and
    tests irreducibility.
    """
    c = [int(a) for a in coeffs]
    if not any(c):
        return Rejection.ZERO
    poly = IntPolynomial(tuple(c))
    if degree is not None and poly.degree != degree:
        return Rejection.DEGREE_MISMATCH
    g = poly.content
    sign = -1 if poly.leading < 0 else 1
    poly = IntPolynomial(tuple(sign * a // g for a in poly.coeffs))
    if poly.degree == 0 or not is_irreducible(poly):
        return Rejection.REDUCIBLE
    return NormalizedRep(poly)


def e_invariant(rep) -> int:
    """gcd of every coefficient except the constant term."""
    poly = rep.poly if isinstance(rep, NormalizedRep) else rep
    return reduce(math.gcd, poly.coeffs[1:])


# ---------------------------------------------------------------------------
# discriminants


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial) -> list[list[int]]:
    """Sylvester matrix of f and g (rows of f first), leading coefficients first."""
    n, m = f.degree, g.degree
    F = list(reversed(f.coeffs))
    G = list(reversed(g.coeffs))
    size = n + m
    rows = []
    for i in range(m):
        rows.append([0] * i + F + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + G + [0] * (size - m - 1 - i))
    return rows


def bareiss_determinant(matrix) -> int:
    """Exact determinant by fraction-free elimination."""
    a = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j], rem = divmod(num, prev)
                assert rem == 0, "Bareiss step must divide exactly"
            a[i][k] = 0
        prev = pivot
    return sign * a[-1][-1]


def discriminant(poly: IntPolynomial) -> int:
    """(-1)^(n(n-1)/2) det S(f, f') / a_n for degree n >= 2."""
    if not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(tuple(poly))
    n = poly.degree
    if n < 2:
        raise DomainError("discriminant needs degree >= 2")
    det = bareiss_determinant(sylvester_matrix(poly, poly.derivative()))
    q, r = divmod(det, poly.leading)
    if r:
        raise ArithmeticError("Sylvester determinant not divisible by the leading coefficient")
    return q if (n * (n - 1) // 2) % 2 == 0 else -q


def _lagrange_coefficients(xs, ys):
    """Monomial coefficients of the interpolating polynomial (exact)."""
    k = len(xs)
    coeffs = [Fraction(0)] * k
    for i in range(k):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(k):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        for t in range(k):
            coeffs[t] += ys[i] * basis[t] / denom
    return coeffs


def disc_monomial_coefficient(n: int) -> int:
    """Coefficient of A_{n-1}^n A_0^(n-2) in Disc(A_0 x^n + ... + A_n).

    Only A_0 and A_{n-1} occur in the target monomial, so every other
    coefficient is set to zero.  Disc(a x^n + b x) is then sampled on an
    integer grid of (a, b) values and interpolated exactly in each variable.
    """
    if not 2 <= n <= 6:
        raise DomainError("disc_monomial_coefficient supports 2 <= n <= 6")
    deg_bound = 2 * n - 2
    a_vals = list(range(1, deg_bound + 2))
    b_vals = list(range(0, deg_bound + 1))
    # coefficient of b^n in Disc(a x^n + b x), for each grid value of a
    in_b = []
    for a in a_vals:
        ys = []
        for b in b_vals:
            c = [0] * (n + 1)
            c[n] = a
            c[1] += b
            ys.append(discriminant(IntPolynomial(tuple(c))))
        in_b.append(_lagrange_coefficients(b_vals, ys)[n])
    coeff = _lagrange_coefficients(a_vals, in_b)[n - 2]
    assert coeff.denominator == 1
    return int(coeff)


def cubic_discriminant(a: int, b: int, c: int, d: int) -> int:
    """Closed form for a x^3 + b x^2 + c x + d."""
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2


# ---------------------------------------------------------------------------
# irreducibility


def divisors(k: int) -> list[int]:
    k = abs(k)
    if k == 0:
        raise DomainError("0 has infinitely many divisors")
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d * d != k:
                large.append(k // d)
        d += 1
    return small + large[::-1]


def rational_roots(poly: IntPolynomial) -> list[Fraction]:
    n = poly.degree
    a0, an = poly.coeffs[0], poly.leading
    if a0 == 0:
        roots = [Fraction(0)]
        rest = IntPolynomial(poly.coeffs[1:])
        return roots + [r for r in rational_roots(rest) if r != 0] if rest.degree else roots
    out = []
    for num in divisors(a0):
        for den in divisors(an):
            if math.gcd(num, den) != 1:
                continue
            for s in (num, -num):
                if sum(a * s**i * den ** (n - i) for i, a in enumerate(poly.coeffs)) == 0:
                    out.append(Fraction(s, den))
    return sorted(set(out))


def _mod_p_degrees(poly: IntPolynomial, p: int):
    """Degrees of the irreducible factors of poly mod p, or None if unusable."""
    f = gfp.reduce(list(poly.coeffs), p)
    if gfp.deg(f) != poly.degree:
        return None
    parts = gfp.squarefree_decomposition(f, p)
    if len(parts) != 1 or parts[0][1] != 1:
        return None
    degs = []
    for comp, e in gfp.distinct_degree(parts[0][0], p):
        degs.extend([e] * (gfp.deg(comp) // e))
    return degs


def _subset_sums(degs):
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


CERTIFICATE_PRIMES = 24
SEARCH_BUDGET = 2_000_000


def _factor_search(poly: IntPolynomial, budget: int = SEARCH_BUDGET):
    """Exhaustive search for a factor of degree <= n/2 (Mignotte bounded)."""
    n = poly.degree
    norm = math.isqrt(sum(a * a for a in poly.coeffs))
    norm += 1 if norm * norm < sum(a * a for a in poly.coeffs) else 0
    a0, an = poly.coeffs[0], poly.leading
    if a0 == 0:
        return IntPolynomial((0, 1))
    tried = 0
    for k in range(1, n // 2 + 1):
        bounds = [math.comb(k, j) * norm for j in range(k + 1)]
        middle = [range(-bounds[j], bounds[j] + 1) for j in range(1, k)]
        lead_choices = divisors(an)
        const_choices = [s * d for d in divisors(a0) for s in (1, -1)]
        size = len(lead_choices) * len(const_choices) * math.prod(len(r) for r in middle)
        tried += size
        if tried > budget:
            raise BudgetExceeded(f"factor search needs {tried} candidates", required=tried)
        for bk in lead_choices:
            for b0 in const_choices:
                for mid in product(*middle):
                    g = IntPolynomial((b0, *mid, bk))
                    if divide_exact(poly, g) is not None:
                        return g
    return None


def is_irreducible(poly: IntPolynomial) -> bool:
    """Irreducibility over the integers of a primitive polynomial."""
    if not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(tuple(poly))
    n = poly.degree
    if n < 1:
        raise DomainError("degree must be >= 1")
    if poly.content != 1:
        raise DomainError("is_irreducible expects a primitive polynomial")
    if n == 1:
        return True
    if rational_roots(poly):
        return False
    if n <= 3:
        return True
    # each good prime restricts the possible degrees of a rational factor
    possible = set(range(1, n))
    used = 0
    q = n + 1
    while used < CERTIFICATE_PRIMES and q < 2000:
        if is_prime(q) and poly.leading % q:
            degs = _mod_p_degrees(poly, q)
            if degs is not None:
                used += 1
                possible &= _subset_sums(degs)
                if not possible & set(range(1, n)):
                    return True
        q += 1
    return _factor_search(poly) is None


# ---------------------------------------------------------------------------
# square classes


def square_class(D: int) -> tuple[int, int]:
    """Write D = m * y^2 with m squarefree (carrying the sign) and y > 0."""
    if D == 0:
        raise DomainError("square_class(0) is undefined")
    m = -1 if D < 0 else 1
    y = 1
    r = abs(D)
    q = 2
    while q * q * q <= r:
        if r % q == 0:
            e = 0
            while r % q == 0:
                r //= q
                e += 1
            y *= q ** (e // 2)
            if e % 2:
                m *= q
        q += 1 if q == 2 else 2
    # r now has at most two prime factors
    s = math.isqrt(r)
    if s * s == r:
        y *= s
    else:
        m *= r
    return m, y


def is_squarefree(m: int) -> bool:
    return m != 0 and square_class(m)[1] == 1
