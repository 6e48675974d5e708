"""Intertwiners, determinant forms and conjugacy of integer matrices over
rings Z[1/p1...pn], assembled into a poset of conjugacy classes.

Conjugacy over a localization is only semi-decided: a bounded witness
search plus local obstructions modulo q and q**2 for small primes q.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import intmat
from .arith import PrimeSet, primes_up_to
from .errors import CapabilityError, DomainError, InvariantViolation

OBSTRUCTION_PRIME_LIMIT = 50
SEARCH_BUDGET = 2_000_000

CONJUGATE = "conjugate"
OBSTRUCTED = "obstructed"
UNKNOWN = "unknown"


# --- integer row reduction ------------------------------------------------------


def _echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], int]:
    """Hermite-reduce ``rows`` on their first ``ncols`` columns by unimodular
    row operations.  Pivots are positive and entries above a pivot lie in
    [0, pivot).  Returns the new rows and the rank."""
    M = [list(r) for r in rows]
    m, r = len(M), 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, m) if M[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[piv] = M[piv], M[r]
            clean = True
            for i in range(r + 1, m):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [x - q * y for x, y in zip(M[i], M[r])]
                    clean = clean and M[i][c] == 0
            if clean:
                break
        if r < m and M[r][c]:
            if M[r][c] < 0:
                M[r] = [-x for x in M[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                if q:
                    M[i] = [x - q * y for x, y in zip(M[i], M[r])]
            r += 1
    return M, r


def integer_kernel(M: list[list[int]]) -> list[list[int]]:
    """Hermite-normal basis of {v in Z^n : M v = 0}."""
    n = len(M[0])
    aug = [[M[i][j] for i in range(len(M))] + [int(j == k) for k in range(n)] for j in range(n)]
    red, rank = _echelon(aug, len(M))
    kernel = [row[len(M):] for row in red[rank:]]
    if not kernel:
        return []
    hnf, k = _echelon(kernel, n)
    return hnf[:k]


# --- intertwiners -----------------------------------------------------------------


@dataclass(frozen=True)
class IntertwinerLattice:
    basis: tuple[intmat.Matrix, ...]
    rank: int


def intertwiner_lattice(A, B) -> IntertwinerLattice:
    """All integer Q with QA = BQ, as a free abelian group."""
    A, B = intmat.as_matrix(A), intmat.as_matrix(B)
    d = len(A)
    if len(B) != d:
        raise DomainError("A and B must have the same size")
    # unknown q[i][j] sits at index i*d + j; equation (QA - BQ)[i][k]
    eqs = []
    for i in range(d):
        for k in range(d):
            row = [0] * (d * d)
            for j in range(d):
                row[i * d + j] += A[j][k]
                row[j * d + k] -= B[i][j]
            eqs.append(row)
    basis = []
    for v in integer_kernel(eqs):
        Q = tuple(tuple(v[i * d : (i + 1) * d]) for i in range(d))
        if intmat.mul(Q, A) != intmat.mul(B, Q):
            raise InvariantViolation("kernel vector is not an intertwiner")
        basis.append(Q)
    return IntertwinerLattice(tuple(basis), len(basis))


def lattice_element(lat: IntertwinerLattice, coords) -> intmat.Matrix:
    d = len(lat.basis[0])
    out = [[0] * d for _ in range(d)]
    for c, Q in zip(coords, lat.basis):
        for i in range(d):
            for j in range(d):
                out[i][j] += c * Q[i][j]
    return tuple(tuple(r) for r in out)


def determinant_form(lat: IntertwinerLattice) -> tuple[int, int, int]:
    """(alpha, beta, gamma) with det(x Q1 + y Q2) = alpha x^2 + beta xy + gamma y^2."""
    if lat.rank != 2 or len(lat.basis[0]) != 2:
        raise CapabilityError("determinant_form handles rank-2 lattices of 2x2 matrices only")
    Q1, Q2 = lat.basis
    alpha, gamma = intmat.det(Q1), intmat.det(Q2)
    beta = intmat.det(intmat.add(Q1, Q2)) - alpha - gamma
    return alpha, beta, gamma


def represented_values(form, limit: int, coord_bound: int) -> set[int]:
    """Values v with 0 < |v| <= limit taken by the form at |x|, |y| <= coord_bound."""
    alpha, beta, gamma = form
    r = np.arange(-coord_bound, coord_bound + 1, dtype=np.int64)
    x, y = np.meshgrid(r, r, indexing="ij")
    v = alpha * x * x + beta * x * y + gamma * y * y
    v = v[(v != 0) & (np.abs(v) <= limit)]
    return {int(t) for t in np.unique(v)}


# --- conjugacy decisions --------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyDecision:
    status: str
    witness: intmat.Matrix | None = None
    det: int | None = None
    coords: tuple[int, ...] | None = None
    modulus: int | None = None
    reason: str = ""
    bound: int | None = None


def _as_prime_set(allowed) -> PrimeSet:
    if isinstance(allowed, PrimeSet):
        if not allowed.is_finite:
            raise DomainError("allowed primes must form a finite set")
        return allowed
    return PrimeSet.finite(allowed)


def _strip(values: np.ndarray, primes) -> np.ndarray:
    v = np.abs(values)
    for p in primes:
        while True:
            hit = (v % p == 0) & (v != 0)
            if not hit.any():
                break
            v = np.where(hit, v // p, v)
    return v


def _unit_residues(primes, modulus: int) -> set[int]:
    """The subgroup of (Z/modulus)^* generated by -1 and the allowed primes."""
    gens = [modulus - 1] + [p % modulus for p in primes]
    group, frontier = {1}, [1]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % modulus
                if y not in group:
                    group.add(y)
                    nxt.append(y)
        frontier = nxt
    return group


def _local_obstruction(form, primes) -> tuple[int, str] | None:
    alpha, beta, gamma = form
    for q in primes_up_to(OBSTRUCTION_PRIME_LIMIT):
        if q in primes:
            continue
        for k in (1, 2):
            mod = q**k
            r = np.arange(mod, dtype=np.int64)
            x, y = np.meshgrid(r, r, indexing="ij")
            vals = set(np.unique((alpha * x * x + beta * x * y + gamma * y * y) % mod).tolist())
            if not vals & _unit_residues(primes, mod):
                return mod, f"det form never hits a unit of the ring modulo {mod}"
    return None


def _search(lat: IntertwinerLattice, primes, bound: int):
    """Lattice points by increasing sup norm; first with S-unit determinant."""
    r = lat.rank
    if r == 2 and len(lat.basis[0]) == 2:
        form = determinant_form(lat)
        for shell in range(1, bound + 1):
            side = range(shell, -shell - 1, -1)
            pts = [(x, y) for x in side for y in side if max(abs(x), abs(y)) == shell]
            arr = np.array(pts, dtype=np.int64)
            x, y = arr[:, 0], arr[:, 1]
            vals = form[0] * x * x + form[1] * x * y + form[2] * y * y
            units = (_strip(vals, primes) == 1) & (vals != 0)
            idx = np.nonzero(units)[0]
            if len(idx):
                return pts[int(idx[0])], bound
        return None, bound
    searched = 0
    for shell in range(1, bound + 1):
        for coords in itertools.product(range(shell, -shell - 1, -1), repeat=r):
            if max(abs(c) for c in coords) != shell:
                continue
            searched += 1
            if searched > SEARCH_BUDGET:
                return None, shell - 1
            D = intmat.det(lattice_element(lat, coords))
            if D and _strip(np.array([D]), primes)[0] == 1:
                return coords, bound
    return None, bound


def conjugate_over_ring(A, B, allowed=(), bound: int = 100) -> ConjugacyDecision:
    """Is B = Q A Q^-1 for some Q in GL_d(Z[1/p : p in allowed])?"""
    A, B = intmat.as_matrix(A), intmat.as_matrix(B)
    S = _as_prime_set(allowed)
    if intmat.charpoly(A) != intmat.charpoly(B):
        raise DomainError("A and B have different characteristic polynomials")
    d = len(A)
    if A == B:
        return ConjugacyDecision(CONJUGATE, intmat.identity(d), 1, None, reason="A = B")
    lat = intertwiner_lattice(A, B)
    if lat.rank == 0:
        return ConjugacyDecision(OBSTRUCTED, reason="no nonzero intertwiner")
    coords, searched = _search(lat, S.primes, bound)
    if coords is not None:
        Q = lattice_element(lat, coords)
        D = intmat.det(Q)
        if intmat.mul(Q, A) != intmat.mul(B, Q) or D == 0:
            raise InvariantViolation("witness failed re-verification")
        return ConjugacyDecision(CONJUGATE, Q, D, tuple(coords), bound=bound)
    if lat.rank == 2 and d == 2:
        hit = _local_obstruction(determinant_form(lat), S.primes)
        if hit is not None:
            return ConjugacyDecision(OBSTRUCTED, modulus=hit[0], reason=hit[1], bound=bound)
    return ConjugacyDecision(UNKNOWN, reason="no witness within the search bound", bound=searched)


# --- rational similarity ---------------------------------------------------------------


def _rank_q(M) -> int:
    rows = [[Fraction(x) for x in r] for r in M]
    rank, ncols = 0, len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c] / rows[rank][c]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _poly_at_matrix(coeffs_desc, A):
    d = len(A)
    out = tuple(tuple(0 for _ in range(d)) for _ in range(d))
    for c in coeffs_desc:
        out = intmat.add(intmat.mul(out, A), intmat.scale(intmat.identity(d), c))
    return out


def rational_similar(A, B) -> bool:
    """Similarity over Q: equal ranks of g(A)^k and g(B)^k for every
    irreducible factor g of the characteristic polynomial and k <= d."""
    A, B = intmat.as_matrix(A), intmat.as_matrix(B)
    cp = intmat.charpoly(A)
    if cp != intmat.charpoly(B):
        return False
    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(sympy.Poly(cp[::-1], x))
    for g, mult in factors:
        coeffs = [int(c) for c in sympy.Poly(g, x).all_coeffs()]
        gA, gB = _poly_at_matrix(coeffs, A), _poly_at_matrix(coeffs, B)
        for k in range(1, mult + 1):
            if _rank_q(intmat.power(gA, k)) != _rank_q(intmat.power(gB, k)):
                return False
    return True


# --- poset ----------------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def classes(self) -> list[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            groups.setdefault(self.find(i), []).append(i)
        return sorted(tuple(g) for g in groups.values())


@dataclass
class Poset:
    labels: list[str]
    levels: list[list[tuple[int, ...]]]
    edges: list[tuple[tuple[int, int], tuple[int, int]]]
    unknown: list[tuple[int, int, int]] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    def first_merge_level(self) -> int | None:
        for n in range(1, len(self.levels)):
            if len(self.levels[n]) < len(self.levels[n - 1]):
                return n
        return None


def _ring_label(primes) -> str:
    return "Z[" + ",".join(f"1/{p}" for p in primes) + "]" if primes else "Z"


def poset_build(matrices, prime_sequence, bound: int = 100) -> Poset:
    """Level n groups matrices conjugate over Z[1/p1...pn]; the last level is
    similarity over Q.  Pairs whose decision is unknown stay apart and are
    listed in ``unknown`` as (level, i, j)."""
    mats = [intmat.as_matrix(M) for M in matrices]
    if not mats:
        raise DomainError("poset_build needs at least one matrix")
    cp = intmat.charpoly(mats[0])
    if any(intmat.charpoly(M) != cp for M in mats):
        raise DomainError("all matrices must share one characteristic polynomial")
    n = len(mats)
    uf = _UnionFind(n)
    labels, levels, unknown, witnesses = [], [], [], {}
    primes: list[int] = []
    for level in range(len(prime_sequence) + 1):
        if level:
            primes.append(int(prime_sequence[level - 1]))
        for i, j in itertools.combinations(range(n), 2):
            if uf.find(i) == uf.find(j):
                continue
            dec = conjugate_over_ring(mats[i], mats[j], primes, bound)
            if dec.status == CONJUGATE:
                uf.union(i, j)
                witnesses[(level, i, j)] = dec
            elif dec.status == UNKNOWN:
                unknown.append((level, i, j))
        labels.append(_ring_label(primes))
        levels.append(uf.classes())
    for i, j in itertools.combinations(range(n), 2):
        if uf.find(i) != uf.find(j) and rational_similar(mats[i], mats[j]):
            uf.union(i, j)
    labels.append("Q")
    levels.append(uf.classes())
    edges = []
    for lv in range(len(levels) - 1):
        for a, cls in enumerate(levels[lv]):
            b = next(k for k, big in enumerate(levels[lv + 1]) if cls[0] in big)
            edges.append(((lv, a), (lv + 1, b)))
    return Poset(labels, levels, edges, unknown, witnesses)


def to_dot(poset: Poset) -> str:
    out = ["digraph conjugacy {", "  rankdir=TB;"]
    for lv, (label, classes) in enumerate(zip(poset.labels, poset.levels)):
        names = []
        for k, cls in enumerate(classes):
            node = f"L{lv}C{k}"
            names.append(node)
            members = ",".join(map(str, cls))
            out.append(f'  {node} [label="{label}: {{{members}}}"];')
        out.append("  { rank=same; " + "; ".join(names) + "; }")
    for (la, a), (lb, b) in poset.edges:
        out.append(f"  L{la}C{a} -> L{lb}C{b};")
    out.append("}")
    return "\n".join(out) + "\n"
