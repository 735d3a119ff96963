"""Quadratic fields: Kronecker symbols, splitting, and imaginary class groups.

Ideal classes of the maximal order of discriminant d < 0 are represented by
reduced positive definite forms (a, b, c) with b^2 - 4ac = d.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetExceeded, DomainError
from .exact import (
    CertifiedInterval,
    alpha_ratio,
    fx_ceil,
    fx_floor,
    fx_mul_ceil,
    fx_mul_floor,
    PRECISION,
    primes_below,
    tail_epsilon,
)
from .polyint import is_squarefree

CLASS_GROUP_BUDGET = 10**7


# ---------------------------------------------------------------------------
# symbols


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m > 0."""
    if m <= 0 or m % 2 == 0:
        raise DomainError("jacobi needs an odd positive modulus")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def chi2(a: int) -> int:
    """0 for even a, 1 for a = +-1 mod 8, -1 for a = +-3 mod 8."""
    if a % 2 == 0:
        return 0
    return 1 if a % 8 in (1, 7) else -1


def kronecker(a: int, m: int) -> int:
    """Kronecker symbol (a/m) for m >= 1, built from chi2 and Jacobi symbols."""
    if m < 1:
        raise DomainError("kronecker needs m >= 1")
    result = 1
    while m % 2 == 0:
        m //= 2
        result *= chi2(a)
        if result == 0:
            return 0
    return result * jacobi(a, m) if m > 1 else result


def fundamental_discriminant(m: int) -> int:
    """Discriminant of Q(sqrt m) for squarefree m != 0, 1."""
    if m in (0, 1) or not is_squarefree(m):
        raise DomainError(f"{m} is not a squarefree integer other than 0, 1")
    return m if m % 4 == 1 else 4 * m


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def squarefree_kernel(d: int) -> int:
    """The squarefree m with Q(sqrt d) = Q(sqrt m) for fundamental d."""
    return d if d % 4 == 1 else d // 4


def _require_fundamental(d: int) -> None:
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a fundamental discriminant")


SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"


def splitting_type(d: int, p: int) -> tuple[str, int]:
    """How p decomposes in the quadratic field of discriminant d, with r_K(p)."""
    _require_fundamental(d)
    k = kronecker(d, p)
    if k == 1:
        return SPLIT, 2
    if k == 0:
        return RAMIFIED, 1
    return INERT, 1


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True, order=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (a > 0 and abs(b) <= a <= c):
            return False
        if abs(b) == a or a == c:
            return b >= 0
        return True

    def inverse(self) -> "QuadraticForm":
        return reduce_form(QuadraticForm(self.a, -self.b, self.c))

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def principal_form(d: int) -> QuadraticForm:
    b = d % 2
    return QuadraticForm(1, b, (b * b - d) // 4)


def reduce_form(f: QuadraticForm) -> QuadraticForm:
    """Reduced form equivalent to a positive definite f."""
    a, b, c = f.a, f.b, f.c
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise DomainError("reduction implemented for positive definite forms only")
    while True:
        # normalize b into (-a, a]
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return QuadraticForm(a, b, c)


def compose(f: QuadraticForm, g: QuadraticForm, table: "ClassGroupTable | None" = None) -> QuadraticForm:
    """Reduced representative of the product class (Gauss composition)."""
    d = f.discriminant
    if g.discriminant != d:
        raise DomainError("forms of different discriminants")
    if table is not None and table.d != d:
        raise DomainError("table discriminant does not match the forms")
    if f.a > g.a:
        f, g = g, f
    a1, b1 = f.a, f.b
    a2, b2, c2 = g.a, g.b, g.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, dd = 0, a1
    else:
        dd, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % dd == 0:
        y2, x2, d1 = -1, 0, dd
    else:
        d1, x2, y2 = _xgcd(s, dd)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - d) // (4 * a3)
    return reduce_form(QuadraticForm(a3, b3, c3))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def form_power(f: QuadraticForm, k: int) -> QuadraticForm:
    result = principal_form(f.discriminant)
    base = reduce_form(f)
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def form_order(f: QuadraticForm, limit: int | None = None) -> int:
    one = principal_form(f.discriminant)
    f = reduce_form(f)
    g = f
    k = 1
    while g != one:
        g = compose(g, f)
        k += 1
        if limit is not None and k > limit:
            raise ArithmeticError("form order exceeds the class number")
    return k


@dataclass
class ClassGroupTable:
    d: int
    forms: list[QuadraticForm]
    index: dict[QuadraticForm, int] = field(default_factory=dict)
    _composition: dict[tuple[int, int], int] | None = None

    def __post_init__(self):
        self.index = {f: i for i, f in enumerate(self.forms)}

    @property
    def h(self) -> int:
        return len(self.forms)

    @property
    def principal(self) -> QuadraticForm:
        return principal_form(self.d)

    def compose(self, f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
        return compose(f, g, self)

    @property
    def composition(self) -> dict[tuple[int, int], int]:
        """Full Cayley table: (i, j) -> index of forms[i] * forms[j]."""
        if self._composition is None:
            self._composition = {
                (i, j): self.index[compose(f, g)]
                for i, f in enumerate(self.forms)
                for j, g in enumerate(self.forms)
            }
        return self._composition

    def order(self, f: QuadraticForm) -> int:
        return form_order(f, limit=self.h)


def reduced_forms(d: int, budget: int = CLASS_GROUP_BUDGET) -> ClassGroupTable:
    """All reduced forms of discriminant d < 0 (fundamental), a up to sqrt(|d|/3)."""
    _require_fundamental(d)
    if d >= 0:
        raise DomainError("class groups are computed for negative discriminants only")
    if -d > budget:
        raise BudgetExceeded(f"|d| = {-d} exceeds class group budget {budget}", required=-d)
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            f = QuadraticForm(a, b, c)
            if c >= a and f.is_reduced():
                forms.append(f)
        a += 1
    forms.sort(key=lambda f: (f.a, abs(f.b), -f.b))
    return ClassGroupTable(d, forms)


@lru_cache(maxsize=4096)
def class_group(d: int) -> ClassGroupTable:
    return reduced_forms(d)


def class_number_bruteforce(d: int) -> int:
    """Independent count: run over b, split (b^2 - d)/4 = a c, test reducedness."""
    h = 0
    bmax = math.isqrt(-d // 3) + 1
    for b in range(-bmax, bmax + 1):
        if (b * b - d) % 4:
            continue
        ac = (b * b - d) // 4
        for a in range(max(1, abs(b)), math.isqrt(ac) + 1):
            if ac % a:
                continue
            c = ac // a
            if abs(b) <= a <= c and not ((abs(b) == a or a == c) and b < 0):
                h += 1
    return h


def prime_form(d: int, p: int) -> QuadraticForm | None:
    """A form (p, b, c) representing a prime above p, or None if p is inert."""
    for b in range(0, 2 * p):
        if (b * b - d) % (4 * p) == 0:
            return QuadraticForm(p, b, (b * b - d) // (4 * p))
    return None


INERT_MARKER = "inert"


def prime_class_order(d: int, p: int, table: ClassGroupTable | None = None):
    """Order of the class of a prime above p; the inert marker for inert p.

    An inert prime is (p) itself, hence principal.
    """
    table = table or class_group(d)
    if table.d != d:
        raise DomainError("table discriminant mismatch")
    f = prime_form(d, p)
    if f is None:
        return INERT_MARKER
    return table.order(f)


def t_torsion_violators(d: int, t: int, N: int, table: ClassGroupTable | None = None) -> set[int]:
    """Primes p < N with a prime above p whose t-th power is not principal."""
    if t < 1 or N < 2:
        raise DomainError("need t >= 1 and N >= 2")
    table = table or class_group(d)
    out = set()
    for p in primes_below(N):
        kind, _ = splitting_type(d, p)
        if kind == INERT:
            continue
        order = prime_class_order(d, p, table)
        if kind == RAMIFIED:
            # the prime squares to (p), so its order is 1 or 2
            if t % 2 == 0 or order == 1:
                continue
            out.add(p)
        elif t % order:
            out.add(p)
    return out


def _product_interval(ps, n: int, N: int, bits: int = PRECISION) -> CertifiedInterval:
    """prod_{p in ps} alpha_{p,n} for the p < N, times an unknown tail subproduct."""
    lo = hi = 1 << bits
    for p in ps:
        num, den = alpha_ratio(p, n)
        lo = fx_mul_floor(lo, fx_floor(num, den, bits), bits)
        hi = fx_mul_ceil(hi, fx_ceil(num, den, bits), bits)
    eps = tail_epsilon(N, n)
    tail_lo = max(0, fx_floor(eps.denominator - eps.numerator, eps.denominator, bits))
    return CertifiedInterval.from_fixed(fx_mul_floor(lo, tail_lo, bits), hi, bits)


def torsion_density(d: int, t: int, n: int, tol=None, N: int | None = None) -> CertifiedInterval:
    """Interval for the product of alpha_{p,n} over the t-torsion violators.

    With ``N`` given, the cutoff is fixed; otherwise N doubles from 16 until
    the width is at most ``tol``.  Primes >= N may or may not violate, so each
    contributes a factor in (0, 1] bounded below through the tail lemma.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    table = class_group(d)
    if N is not None:
        return _product_interval(sorted(t_torsion_violators(d, t, N, table)), n, N)
    if tol is None:
        raise DomainError("give either tol or N")
    tol = Fraction(tol)
    N = 16
    while True:
        iv = _product_interval(sorted(t_torsion_violators(d, t, N, table)), n, N)
        if iv.width <= tol:
            return iv
        N *= 2


def character_products(d: int, n: int, N: int) -> tuple[CertifiedInterval, CertifiedInterval]:
    """(f_n(d), g_n(d)): products of alpha_{p,n} over chi_p(d) in {0,1}, resp. = 1."""
    if n < 2:
        raise DomainError("n must be >= 2")
    ps = primes_below(N)
    f_ps = [p for p in ps if kronecker(d, p) in (0, 1)]
    g_ps = [p for p in ps if kronecker(d, p) == 1]
    return _product_interval(f_ps, n, N), _product_interval(g_ps, n, N)


def character_products_tol(d: int, n: int, tol) -> tuple[CertifiedInterval, CertifiedInterval, int]:
    tol = Fraction(tol)
    N = 16
    while True:
        f, g = character_products(d, n, N)
        if f.width <= tol and g.width <= tol:
            return f, g, N
        N *= 2


def class_group_csv(d_values, primes_up_to: int = 30) -> str:
    """CSV rows (d_K, h, forms, prime class orders for p below the bound)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d_K", "h", "forms", "prime_orders"])
    for d in d_values:
        table = class_group(d)
        orders = ";".join(f"{p}:{prime_class_order(d, p, table)}" for p in primes_below(primes_up_to))
        w.writerow([d, table.h, " ".join(str(f) for f in table.forms), orders])
    return buf.getvalue()
