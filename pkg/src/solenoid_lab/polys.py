"""Exact dense polynomials over Z and Q.

Coefficients are stored lowest degree first: ``[c0, c1, ..., cd]``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce

from .arith import divisors, mobius, totient
from .errors import DomainError


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(trim(p)) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q):
    return add(p, [-c for c in q])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p, c):
    return trim([c * x for x in p])


def divmod_poly(p, q):
    """Quotient and remainder over Q (Fractions)."""
    p = [Fraction(c) for c in trim(p)]
    q = [Fraction(c) for c in trim(q)]
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    while len(p) >= len(q) and p:
        c = p[-1] / q[-1]
        k = len(p) - len(q)
        quot[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        p = trim(p)
    return trim(quot), p


def derivative(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def content(p) -> int:
    return reduce(math.gcd, (int(c) for c in p), 0)


def primitive_part(p):
    """Integer polynomial with content 1 and positive leading coefficient,
    proportional over Q to ``p`` (which may have Fraction coefficients)."""
    p = trim(p)
    if not p:
        return []
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (Fraction(c).denominator for c in p), 1)
    ints = [int(Fraction(c) * den) for c in p]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def gcd(p, q):
    """Monic-up-to-content gcd over Q, returned as a primitive integer polynomial."""
    p, q = trim(p), trim(q)
    while q:
        _, r = divmod_poly(p, q)
        p, q = q, r
    return primitive_part(p)


def exact_quotient(p, q):
    """p / q over Z, asserting q divides p."""
    quot, rem = divmod_poly(p, q)
    if rem:
        raise DomainError("polynomial division is not exact")
    if any(Fraction(c).denominator != 1 for c in quot):
        raise DomainError("quotient has non-integer coefficients")
    return [int(c) for c in quot]


def divides(q, p) -> bool:
    _, rem = divmod_poly(p, q)
    return not rem


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_decomposition(f):
    """Yun's algorithm: pairs (g, k) with f = c * prod g**k, g squarefree
    and pairwise coprime, each g a primitive integer polynomial."""
    f = primitive_part(f)
    out = []
    if degree(f) < 1:
        return out
    fp = derivative(f)
    a = gcd(f, fp)
    b = divmod_poly(f, a)[0]
    c = divmod_poly(fp, a)[0]
    d = sub(c, derivative(b))
    k = 1
    while degree(b) >= 1:
        g = gcd(b, d)
        if degree(g) >= 1:
            out.append((g, k))
        b = divmod_poly(b, g)[0]
        c = divmod_poly(d, g)[0]
        d = sub(c, derivative(b))
        k += 1
    return out


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial (ascending)."""
    num, den = [1], [1]
    for d in divisors(n):
        mu = mobius(n // d)
        xd = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = mul(num, xd)
        elif mu == -1:
            den = mul(den, xd)
    return tuple(exact_quotient(num, den))


def cyclotomic_indices_up_to_degree(d: int) -> list[int]:
    """All n with phi(n) <= d.  phi(n) >= sqrt(n/2) bounds the search."""
    return [n for n in range(1, 2 * d * d + 3) if totient(n) <= d]


def to_str(p, var: str = "x") -> str:
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = f"{c}{mono}"
        terms.append(s)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out
