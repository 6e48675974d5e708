"""Small exact integer matrices stored as tuples of row tuples."""
from __future__ import annotations

from .errors import DomainError

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if not m or any(len(row) != len(m) for row in m):
        raise DomainError("expected a non-empty square integer matrix")
    return m


def parse_matrix(text: str) -> Matrix:
    """``"2,1;1,1"`` -> ((2, 1), (1, 1))."""
    try:
        return as_matrix([r.split(",") for r in text.strip().split(";") if r.strip()])
    except ValueError as exc:
        raise DomainError(f"cannot parse matrix {text!r}") from exc


def format_matrix(m: Matrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m)


def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, c: int) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def power(a: Matrix, n: int) -> Matrix:
    if n < 0:
        raise DomainError("negative matrix powers need an inverse")
    out = identity(len(a))
    base = a
    while n:
        if n & 1:
            out = mul(out, base)
        base = mul(base, base)
        n >>= 1
    return out


def det(a: Matrix) -> int:
    """Fraction-free Bareiss elimination."""
    m = [list(row) for row in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def trace(a: Matrix) -> int:
    return sum(a[i][i] for i in range(len(a)))


def charpoly(a: Matrix) -> list[int]:
    """det(xI - A), ascending coefficients, by Faddeev-LeVerrier."""
    d = len(a)
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    M = tuple(tuple(0 for _ in range(d)) for _ in range(d))
    ident = identity(d)
    for k in range(1, d + 1):
        M = add(mul(a, M), scale(ident, coeffs[d - k + 1]))
        t = trace(mul(a, M))
        coeffs[d - k] = -t // k
    return coeffs
