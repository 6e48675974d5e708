"""Entropy and logarithmic Mahler measure.

Polynomials passed to the public functions here are coefficient lists in
*descending* order (leading coefficient first), the numpy convention.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import intmat, polys
from .arith import format_rational, map_parameter, prime_divisors, padic_abs
from .errors import CapabilityError, DomainError, InvariantViolation

SCAN_BUDGET = 10**7
_NEAR_ZERO = 1e-6


def _ascending(coeffs) -> list[int]:
    c = [int(x) for x in coeffs]
    while c and c[0] == 0:
        c.pop(0)
    return c[::-1]


@dataclass(frozen=True)
class AbramovEntropy:
    value: float
    exact_arg: int


def abramov_entropy(r) -> AbramovEntropy:
    """h = sum over all places of log+|r|_v = log max(|a|, |b|)."""
    r = map_parameter(r)
    a, b = r.numerator, r.denominator
    arg = max(abs(a), abs(b))
    # exponentiated place sum: max(1,|r|) * prod_p max(1,|r|_p)
    prod = max(Fraction(1), abs(r))
    for p in prime_divisors(a) + prime_divisors(b):
        prod *= max(Fraction(1), padic_abs(r, p))
    if prod != arg:
        raise InvariantViolation(f"place sum for {format_rational(r)} gave {prod}, expected {arg}")
    return AbramovEntropy(math.log(arg), arg)


def _strip_cyclotomic(g: list[int]) -> list[int]:
    """Divide out every cyclotomic factor of an integer polynomial (ascending)."""
    for n in polys.cyclotomic_indices_up_to_degree(polys.degree(g)):
        phi = list(polys.cyclotomic(n))
        while polys.degree(g) >= len(phi) - 1 and polys.divides(phi, g):
            g = polys.exact_quotient(g, phi)
    return g


def _roots(g: list[int]) -> np.ndarray:
    """Complex roots of a squarefree integer polynomial (ascending coeffs).

    Companion-matrix eigenvalues, polished by Newton steps; falls back to
    mpmath at 50 digits when roots cluster or Newton does not settle.
    """
    desc = np.array(g[::-1], dtype=float)
    roots = np.roots(desc)
    dp = np.polyder(desc)
    for _ in range(4):
        step = np.polyval(desc, roots) / np.polyval(dp, roots)
        roots = roots - np.where(np.isfinite(step), step, 0)
    scale = np.maximum(1.0, np.abs(roots)) ** (len(g) - 1)
    resid = np.abs(np.polyval(desc, roots)) / (np.sum(np.abs(desc)) * scale)
    d = len(roots)
    gaps = np.abs(roots[:, None] - roots[None, :]) + np.eye(d) if d > 1 else np.ones((1, 1))
    if np.all(resid < 1e-12) and gaps.min() > 1e-6:
        return roots
    with mpmath.workdps(50):
        mp_roots = mpmath.polyroots([int(c) for c in g[::-1]], maxsteps=200, extraprec=200)
    return np.array([complex(z) for z in mp_roots])


def _measure_ascending(f: list[int]) -> float:
    f = polys.trim(f)
    if not f:
        raise DomainError("the Mahler measure of the zero polynomial is undefined")
    total = math.log(abs(f[-1]))
    while f[0] == 0:  # roots at 0 contribute nothing
        f = f[1:]
    if len(f) == 1:
        return total
    for g, k in polys.squarefree_decomposition(f):
        g = _strip_cyclotomic(g)
        if polys.degree(g) < 1:
            continue
        logs = np.log(np.abs(_roots(g)))
        total += k * float(np.sum(logs[logs > 0]))
    return total


def mahler_measure(coeffs) -> float:
    """Logarithmic Mahler measure log|lead| + sum log+|root|."""
    return _measure_ascending(_ascending(coeffs))


def is_cyclotomic_product(coeffs) -> bool:
    """Exact Kronecker test for monic f.

    Every cyclotomic Phi_n that can divide f has phi(n) <= deg f; divide
    them out in integer arithmetic and check that 1 remains.
    """
    f = _ascending(coeffs)
    if not f or f[-1] != 1:
        raise DomainError("is_cyclotomic_product needs a monic polynomial")
    if len(f) == 1:
        return True
    if f[0] == 0:
        return False
    return _strip_cyclotomic(f) == [1]


def _fast_measure(desc: tuple[int, ...]) -> float:
    roots = np.roots(np.array(desc, dtype=float))
    logs = np.log(np.abs(roots))
    return float(np.sum(logs[logs > 0]))


def _orbit(desc: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Images of a monic polynomial under f(x) -> ±x^d f(1/x), f(x) -> ±f(-x)
    that are again monic."""
    neg = tuple(c * (-1) ** (i % 2) for i, c in enumerate(desc))  # (-1)^d f(-x)
    out = [desc, neg]
    for f in (desc, neg):
        if abs(f[-1]) == 1:
            out.append(tuple(c * f[-1] for c in reversed(f)))
    return out


def _scan_chunk(args) -> list[tuple[tuple[int, ...], float]]:
    """One degree, one fixed second coefficient (None for degree 1)."""
    degree, height, threshold, second = args
    found = []
    rng = range(-height, height + 1)
    consts = [c for c in rng if c != 0]
    head = (1,) if degree == 1 else (1, second)
    for mid in itertools.product(rng, repeat=max(degree - 2, 0)):
        for c0 in consts:
            desc = head + mid + (c0,)
            if max(_orbit(desc)) != desc:
                continue
            m = _fast_measure(desc)
            if m >= threshold + 1e-9:
                continue
            if m < _NEAR_ZERO and is_cyclotomic_product(desc):
                continue
            m = mahler_measure(desc)
            if 0 < m < threshold:
                found.append((desc, m))
    return found


def lehmer_scan(max_degree: int, max_height: int, threshold: float, workers: int | None = None):
    """Monic integer polynomials of degree 1..max_degree, coefficients in
    [-max_height, max_height] and nonzero constant term, whose measure lies
    strictly between 0 and ``threshold``.  One representative per symmetry
    orbit; sorted by (measure, coefficients).

    Polynomials divisible by x are skipped: they repeat the measure of a
    lower-degree candidate.
    """
    if max_degree < 1 or max_height < 1:
        raise DomainError("max_degree and max_height must be positive")
    count = sum(2 * max_height * (2 * max_height + 1) ** (d - 1) for d in range(1, max_degree + 1))
    if count > SCAN_BUDGET:
        raise CapabilityError(f"{count} candidates exceed the scan budget of {SCAN_BUDGET}")
    if threshold <= 0:
        return []
    jobs = [(1, max_height, threshold, None)]
    for d in range(2, max_degree + 1):
        jobs += [(d, max_height, threshold, c) for c in range(-max_height, max_height + 1)]
    if workers is None:
        workers = int(os.environ.get("SOLENOID_LAB_THREADS", "1") or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    found = [item for part in parts for item in part]
    return sorted(found, key=lambda t: (t[1], t[0]))


@dataclass(frozen=True)
class EntropyCheck:
    mahler: float
    growth: float
    gap: float


def toral_entropy_check(A, N: int) -> EntropyCheck:
    from .zeta import toral_fixed_points

    A = intmat.as_matrix(A)
    F = toral_fixed_points(A, N)
    growth = math.log(F) / N
    m = _measure_ascending(intmat.charpoly(A))
    return EntropyCheck(m, growth, abs(m - growth))
