"""Periodic points, closed orbits, Mertens sums and growth rates for
solenoid systems.

Exact routines use Python integers.  The ``*_table`` helpers return numpy
arrays indexed by n (index 0 unused) and are what the asymptotic fits in
:mod:`solenoid_lab.dirichlet` run on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import (
    PrimeSet,
    divisors,
    mobius,
    multiplicative_order,
    order_valuation,
    prime_divisors,
    valuation_of_power_difference,
)
from .baer import SolenoidSystem
from .errors import CapabilityError, DomainError, InvariantViolation

MERSENNE_CAP = 40


def _relevant_primes(sys: SolenoidSystem) -> list[int]:
    """Primes whose valuations enter F: S itself (finite case) or the
    excluded primes (cofinite case), minus primes dividing a*b, for which
    the valuation of a**n - b**n is always zero."""
    S = sys.prime_set
    ab = sys.a * sys.b
    return [p for p in S.primes if ab % p]


def fixed_points(sys: SolenoidSystem, n: int) -> int:
    if n < 1:
        raise DomainError("n must be a positive integer")
    a, b = sys.a, sys.b
    primes = _relevant_primes(sys)
    if sys.prime_set.is_finite:
        F = abs(a**n - b**n)
        for p in primes:
            v = valuation_of_power_difference(a, b, p, n)
            if v:
                F //= p**v
        return F
    F = 1
    for p in primes:
        F *= p ** valuation_of_power_difference(a, b, p, n)
    return F


def log_fixed_points(sys: SolenoidSystem, n: int) -> float:
    """log F(n) without forming a**n."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    a, b = sys.a, sys.b
    total = 0.0
    if sys.prime_set.is_finite:
        big, small = max(abs(a), abs(b)), min(abs(a), abs(b))
        # a**n - b**n = big**n * (1 - (s*small/big)**n) up to sign, s = ±1
        sign = 1 if (a > 0) == (b > 0) else -1
        total = n * math.log(big) + math.log(abs(1 - (sign * small / big) ** n))
        for p in _relevant_primes(sys):
            total -= valuation_of_power_difference(a, b, p, n) * math.log(p)
        return total
    for p in _relevant_primes(sys):
        total += valuation_of_power_difference(a, b, p, n) * math.log(p)
    return total


def mobius_inversion(F) -> list[int]:
    """O[n] = (1/n) sum_{d|n} mu(n/d) F[d] for F given as F[1..N] (list index n-1).

    Raises InvariantViolation when some O[n] is negative or non-integral.
    """
    O = []
    for n in range(1, len(F) + 1):
        s = sum(mobius(n // d) * F[d - 1] for d in divisors(n))
        if s < 0 or s % n:
            raise InvariantViolation(
                f"orbit count at n={n} is {s}/{n}, not a non-negative integer"
            )
        O.append(s // n)
    return O


def orbit_counts(sys: SolenoidSystem, N: int) -> list[int]:
    if N < 1:
        raise DomainError("N must be at least 1")
    return mobius_inversion([fixed_points(sys, n) for n in range(1, N + 1)])


def entropy(sys: SolenoidSystem) -> float:
    """log max(|a|, |b|), used as the Mertens scale in both modes."""
    return math.log(max(abs(sys.a), abs(sys.b)))


def pi_sum(sys: SolenoidSystem, N: int) -> int:
    return sum(orbit_counts(sys, N))


def mertens_sum(sys: SolenoidSystem, N: int) -> float:
    if N < 1:
        raise DomainError("N must be at least 1")
    return float(mertens_table(sys, N)[N])


@dataclass(frozen=True)
class GrowthEstimate:
    at_N: float
    sup_window: float
    inf_window: float


def growth_estimate(sys: SolenoidSystem, N: int) -> GrowthEstimate:
    if N < 10:
        raise DomainError("growth_estimate needs N >= 10")
    rates = [log_fixed_points(sys, n) / n for n in range(N // 2, N + 1)]
    return GrowthEstimate(rates[-1], max(rates), min(rates))


def mersenne_prime_set(k: int) -> PrimeSet:
    """{2} together with every prime dividing 2**n - 1 for some n <= k."""
    if k < 1:
        raise DomainError("k must be positive")
    if k > MERSENNE_CAP:
        raise CapabilityError(f"mersenne_prime_set is capped at k <= {MERSENNE_CAP}")
    primes = {2}
    for n in range(2, k + 1):
        primes.update(prime_divisors(2**n - 1))
    return PrimeSet.finite(primes)


@dataclass
class OrbitProfile:
    upto: int
    F: list[int]
    O: list[int]
    M: list[float]
    pi: list[int]


def orbit_profile(sys: SolenoidSystem, N: int) -> OrbitProfile:
    F = [fixed_points(sys, n) for n in range(1, N + 1)]
    O = mobius_inversion(F)
    M = [float(x) for x in mertens_table(sys, N)[1:]]
    pi = list(np.cumsum(np.array(O, dtype=object)))
    return OrbitProfile(N, F, O, M, [int(x) for x in pi])


# --- vectorized tables ------------------------------------------------------


def mobius_table(N: int) -> np.ndarray:
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    is_p = np.ones(N + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, N + 1):
        if is_p[p]:
            is_p[2 * p :: p] = False
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu


def _int_valuation_table(N: int, p: int) -> np.ndarray:
    v = np.zeros(N + 1, dtype=np.int64)
    pk = p
    while pk <= N:
        v[::pk] += 1
        pk *= p
    v[0] = 0
    return v


def valuation_table(a: int, b: int, p: int, N: int) -> np.ndarray:
    """v_p(a**n - b**n) for n = 0..N (entry 0 is 0), by lifting the exponent."""
    n = np.arange(N + 1, dtype=np.int64)
    vn = _int_valuation_table(N, p)
    if p == 2:
        odd = valuation_of_power_difference(a, b, 2, 1)
        even = valuation_of_power_difference(a, b, 2, 2) - 1
        out = np.where(n % 2 == 1, odd, even + vn)
    else:
        m = multiplicative_order(a, b, p)
        c = order_valuation(a, b, p)
        out = np.where(n % m == 0, c + vn, 0)
    out[0] = 0
    return out.astype(np.int64)


def log_fixed_points_table(sys: SolenoidSystem, N: int) -> np.ndarray:
    a, b = sys.a, sys.b
    n = np.arange(N + 1, dtype=np.float64)
    if sys.prime_set.is_finite:
        big, small = max(abs(a), abs(b)), min(abs(a), abs(b))
        ratio = (small / big) if (a > 0) == (b > 0) else -(small / big)
        with np.errstate(divide="ignore"):
            out = n * math.log(big) + np.log(np.abs(1.0 - np.power(ratio, n)))
        for p in _relevant_primes(sys):
            out = out - valuation_table(a, b, p, N) * math.log(p)
    else:
        out = np.zeros(N + 1)
        for p in _relevant_primes(sys):
            out = out + valuation_table(a, b, p, N) * math.log(p)
    out[0] = -np.inf
    return out


def _max_squarefree_divisors(N: int) -> int:
    """max over n <= N of 2**omega(n), i.e. the most nonzero Möbius terms."""
    count, prod = 1, 1
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53):
        if prod * p > N:
            break
        prod *= p
        count *= 2
    return count


def fixed_points_table(sys: SolenoidSystem, N: int) -> np.ndarray:
    """Exact F(n) as int64 for cofinite systems (polynomial growth).

    Raises CapabilityError unless the later Möbius sums also fit in int64.
    """
    if sys.prime_set.is_finite:
        raise DomainError("fixed_points_table is for cofinite systems; F grows exponentially otherwise")
    primes = _relevant_primes(sys)
    vals = [valuation_table(sys.a, sys.b, p, N) for p in primes]
    bits = sum((v * math.log2(p) for p, v in zip(primes, vals)), np.zeros(N + 1))
    if bits.max() + math.log2(_max_squarefree_divisors(N)) > 62:
        raise CapabilityError("fixed point counts too large for 64-bit tables")
    F = np.ones(N + 1, dtype=np.int64)
    for p, v in zip(primes, vals):
        F *= np.power(np.int64(p), v)
    F[0] = 0
    return F


def orbit_counts_table(F: np.ndarray) -> np.ndarray:
    """Exact Möbius inversion on an int64 table F[0..N]."""
    N = len(F) - 1
    mu = mobius_table(N)
    nO = np.zeros(N + 1, dtype=np.int64)
    for k in np.nonzero(mu)[0]:
        k = int(k)
        nO[k::k] += mu[k] * F[1 : N // k + 1]
    n = np.arange(N + 1, dtype=np.int64)
    n[0] = 1
    if np.any(nO[1:] % n[1:]) or np.any(nO < 0):
        bad = int(np.nonzero((nO[1:] % n[1:]) | (nO[1:] < 0))[0][0]) + 1
        raise InvariantViolation(f"orbit count at n={bad} is not a non-negative integer")
    O = nO // n
    O[0] = 0
    return O


def mertens_table(sys: SolenoidSystem, N: int) -> np.ndarray:
    """M(n) for n = 0..N, with each term exp(log F(d) - n h) formed in log space.

    Summation order is fixed (ascending divisor index, then cumulative sum),
    so results are reproducible bit for bit.
    """
    h = entropy(sys)
    logF = log_fixed_points_table(sys, N)
    mu = mobius_table(N)
    terms = np.zeros(N + 1)
    for k in np.nonzero(mu)[0]:
        k = int(k)
        m = np.arange(k, N + 1, k)
        with np.errstate(under="ignore"):
            terms[m] += mu[k] * np.exp(logF[m // k] - m * h)
    n = np.arange(N + 1, dtype=np.float64)
    n[0] = 1.0
    terms /= n
    terms[0] = 0.0
    return np.cumsum(terms)
