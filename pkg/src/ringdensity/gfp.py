"""Dense polynomial arithmetic over GF(p).

A polynomial is a list of residues ``[c_0, c_1, ..., c_d]`` (low degree
first) with no trailing zeros; ``[]`` is the zero polynomial.
"""

from __future__ import annotations


def trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def reduce(f, p):
    return trim([c % p for c in f])


def deg(f):
    return len(f) - 1


def add(f, g, p):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(f, g, p):
    out = list(f) + [0] * (len(g) - len(f))
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return trim(out)


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def scale(f, c, p):
    return trim([a * c % p for a in f])


def monic(f, p):
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return scale(f, inv, p)


def divmod_(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    if len(r) <= dg:
        return [], trim(r)
    q = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - dg] = c
            for j in range(dg + 1):
                r[k - dg + j] = (r[k - dg + j] - c * g[j]) % p
    return trim(q), trim(r[:dg])


def mod(f, g, p):
    return divmod_(f, g, p)[1]


def exact_div(f, g, p):
    q, r = divmod_(f, g, p)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def gcd(f, g, p):
    """Monic gcd (zero if both are zero)."""
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def deriv(f, p):
    return trim([i * c % p for i, c in enumerate(f)][1:])


def powmod(base, e, m, p):
    result = [1]
    base = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = mod(mul(base, base, p), m, p)
    return result


def squarefree_decomposition(f, p):
    """Yun's algorithm: monic f = prod a_k^k with a_k squarefree and coprime.

    Returns ``[(a_k, k), ...]`` for the non-constant a_k.  Requires p > deg f,
    which rules out the p-th power branch of characteristic p.
    """
    f = monic(f, p)
    if deg(f) >= p:
        raise ValueError("squarefree decomposition here requires p > deg f")
    out = []
    df = deriv(f, p)
    a = gcd(f, df, p)
    b = exact_div(f, a, p)
    c = exact_div(df, a, p) if df else []
    d = sub(c, deriv(b, p), p)
    k = 1
    while deg(b) > 0:
        a = gcd(b, d, p)
        if deg(a) > 0:
            out.append((a, k))
        b = exact_div(b, a, p)
        c = exact_div(d, a, p)
        d = sub(c, deriv(b, p), p)
        k += 1
    return out


def distinct_degree(g, p):
    """Distinct-degree factorization of a squarefree monic g.

    Returns ``[(component, e), ...]`` where each component is the product of
    all monic irreducible factors of g of degree e.
    """
    out = []
    x = [0, 1]
    h = x
    e = 1
    while deg(g) >= 2 * e:
        h = powmod(h, p, g, p)
        c = gcd(g, sub(h, x, p), p)
        if deg(c) > 0:
            out.append((c, e))
            g = exact_div(g, c, p)
            h = mod(h, g, p)
        e += 1
    if deg(g) > 0:
        out.append((g, deg(g)))
    return out
