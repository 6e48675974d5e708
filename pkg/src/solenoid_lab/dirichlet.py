"""Orbit Dirichlet series, Mertens slopes, polylog growth fits and the
connected-group growth construction.

``orbit_density`` is an exact rational computation of the Mertens slope for
finite prime sets.  It shares no code with the numerical summation in
``mertens_slope``, so each checks the other.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import factorint, multiplicative_order, order_valuation, padic_valuation
from .baer import SolenoidSystem, s_integer_system
from .errors import ConstructionError, DomainError
from .orbits import (
    _relevant_primes,
    fixed_points,
    fixed_points_table,
    mersenne_prime_set,
    mertens_table,
    orbit_counts_table,
)


# --- Dirichlet series --------------------------------------------------------


@dataclass(frozen=True)
class DirichletPartial:
    value: float
    tail_bound: float
    exponent: int
    constant: int


def _polynomial_bound(sys: SolenoidSystem) -> tuple[int, int]:
    """(C, A) with F(n) <= C * n**A for every n, from lifting the exponent:
    p**v_p(a^n - b^n) <= p**c_p * p**v_p(n) <= p**c_p * n."""
    a, b = sys.a, sys.b
    C = 1
    primes = _relevant_primes(sys)
    for p in primes:
        if p == 2:
            c = padic_valuation(a - b, 2) + padic_valuation(a + b, 2) - 1
            c = max(c, padic_valuation(a - b, 2))
        else:
            c = order_valuation(a, b, p)
        C *= p**c
    return C, len(primes)


def dirichlet_partial(sys: SolenoidSystem, s: float, N: int) -> DirichletPartial:
    """sum_{n<=N} O(n) n^-s with a rigorous bound on the omitted tail.

    O(n) <= F(n)/n <= C n^(A-1), so the tail is at most C N^(A-s)/(s-A)
    when s > A, and infinite otherwise.
    """
    if sys.prime_set.is_finite:
        raise DomainError("dirichlet_partial needs a cofinite prime set (polynomial orbit growth)")
    if s <= 1:
        raise DomainError("dirichlet_partial needs s > 1")
    if N < 1:
        raise DomainError("N must be positive")
    O = orbit_counts_table(fixed_points_table(sys, N))
    n = np.arange(1, N + 1, dtype=np.float64)
    value = float(np.sum(O[1:] / n**s))
    C, A = _polynomial_bound(sys)
    tail = C * N ** (A - s) / (s - A) if s > A else math.inf
    return DirichletPartial(value, float(tail), A, C)


def dirichlet_reference_3_5(s: float) -> float:
    """Closed form of the orbit Dirichlet series of x -> 2x on the ring
    with only 3 and 5 kept out of the denominators."""
    if s == 0:
        raise DomainError("s = 0 is a pole")
    z = s
    head = 1 - 1 / 2 ** (z + 1)
    mid = (3 / 2 ** (z + 1)) * (1 - 1 / 3 ** (z + 1) - 1 / 2 ** (z + 1) + 1 / 6 ** (z + 1)) / (1 - 3**-z)
    last = (15 / 4 ** (z + 1)) * (1 - 1 / 3 ** (z + 1) - 1 / 5 ** (z + 1) + 1 / 15 ** (z + 1)) / (
        (1 - 3**-z) * (1 - 5**-z)
    )
    return head + mid + last


# --- Mertens constants -------------------------------------------------------------


def mertens_slope(sys: SolenoidSystem, N: int) -> float:
    """(M(N) - M(N/10)) / log 10."""
    if not sys.prime_set.is_finite:
        raise DomainError("mertens_slope needs a finite prime set")
    if N < 1000:
        raise DomainError("mertens_slope needs N >= 1000")
    M = mertens_table(sys, N)
    return float((M[N] - M[N // 10]) / math.log(10))


def orbit_density(sys: SolenoidSystem) -> Fraction:
    """Mean of prod_{p in S} |a^n - b^n|_p over n, as an exact fraction.

    The factor at p depends on n only through v_q(n) for the primes q
    dividing the order m_p (and on v_p(n) itself).  For n drawn uniformly
    these valuations are independent with P(v_q = j) = (1 - 1/q) q^-j, so
    the mean is a finite sum over valuation states: every value below a
    threshold individually, plus one aggregated state above it whose
    contribution is a geometric series.
    """
    if not sys.prime_set.is_finite:
        raise DomainError("orbit_density needs a finite prime set")
    a, b = sys.a, sys.b
    factors = []  # (p, required valuations of n, constant exponent, even-case exponent)
    for p in _relevant_primes(sys):
        if p == 2:
            odd = padic_valuation(a - b, 2)
            even = padic_valuation(a * a - b * b, 2) - 1
            factors.append((2, {2: 1}, odd, even))
        else:
            m = multiplicative_order(a, b, p)
            factors.append((p, dict(factorint(m)) if m > 1 else {}, order_valuation(a, b, p), None))
    qs = sorted({q for _, req, _, _ in factors for q in req} | {p for p, _, _, _ in factors})
    thresholds = {q: max([req.get(q, 0) for _, req, _, _ in factors] + [0]) for q in qs}

    def states(q):
        T = thresholds[q]
        for j in range(T):
            yield j, Fraction(q - 1, q) * Fraction(1, q**j)
        yield None, Fraction(1, q**T)  # v_q(n) >= T

    def weight(q, j):
        """E[q^-v | state] for the valuation v = v_q(n)."""
        if j is not None:
            return Fraction(1, q**j)
        T = thresholds[q]
        # sum_{v>=T} (1-1/q) q^-v q^-v / q^-T
        return Fraction(q - 1, q) * Fraction(1, q**T) / (1 - Fraction(1, q * q))

    total = Fraction(0)
    for combo in itertools.product(*[list(states(q)) for q in qs]):
        state = {q: j for q, (j, _) in zip(qs, combo)}
        prob = math.prod((pr for _, pr in combo), start=Fraction(1))
        term = Fraction(1)
        for p, req, c, even in factors:
            # tail state satisfies every requirement (threshold is the max)
            active = all(state[q] is None or state[q] >= e for q, e in req.items())
            if p == 2:
                term *= Fraction(1, 2**c) if not active else Fraction(1, 2**even) * weight(2, state[2])
            elif active:
                term *= Fraction(1, p**c) * weight(p, state[p])
        total += prob * term
    return total


# --- polylogarithmic growth ------------------------------------------------------------


@dataclass(frozen=True)
class PolylogFit:
    K_hat: float
    C_hat: float


def pi_polylog_fit(sys: SolenoidSystem, N: int) -> PolylogFit:
    """Least squares of log pi(n) against log log n over n in [N/100, N]."""
    if sys.prime_set.is_finite:
        raise DomainError("pi_polylog_fit needs a cofinite prime set")
    if N < 10**4:
        raise DomainError("pi_polylog_fit needs N >= 10^4")
    pi = np.cumsum(orbit_counts_table(fixed_points_table(sys, N)))
    lo = N // 100
    y = np.log(pi[lo:].astype(np.float64))
    if np.all(pi[lo:] == pi[lo]):
        return PolylogFit(0.0, float(pi[lo]))
    x = np.log(np.log(np.arange(lo, N + 1, dtype=np.float64)))
    slope, intercept = np.polyfit(x, y, 1)
    return PolylogFit(float(slope), float(math.exp(intercept)))


# --- growth construction -----------------------------------------------------------------


@dataclass
class GrowthConstruction:
    theta: list[int]  # original targets, theta[0] is theta_2
    amended_theta: list[int]
    multiplicities: list[int]  # stage n = 2, 3, ...
    component_systems: list[SolenoidSystem]
    F_product: list[int]
    flags: list[bool]

    def stages(self) -> range:
        return range(2, len(self.theta) + 2)


def _min_power(base: int, have: int, want: int) -> int:
    """Least m >= 0 with have * base**m >= want (base >= 2)."""
    m = 0
    while have < want:
        have *= base
        m += 1
    return m


def growth_construction(theta, amend_prefix: int = 0) -> GrowthConstruction:
    """Stage n (from 2) adds copies of the system x -> 2x over the primes
    dividing some 2^k - 1 with k < n, chosen so the period-n count first
    reaches theta_n.

    A stage whose target is already exceeded by a factor of at least that
    stage's base would need a negative multiplicity.  For the first
    ``amend_prefix`` stages the target is raised to the current count
    instead; later on this raises ConstructionError.  Flags compare the
    final counts with the original targets: 1 <= F(n)/theta_n <= 2^n.
    """
    theta = [int(t) for t in theta]
    if any(t < 1 for t in theta):
        raise DomainError("targets must be positive integers")
    stages = list(range(2, len(theta) + 2))
    systems = [s_integer_system(mersenne_prime_set(n - 1).primes, 2) for n in stages]
    amended, mult = list(theta), []
    for idx, n in enumerate(stages):
        have = math.prod(fixed_points(systems[k], n) ** mult[k] for k in range(idx))
        base = fixed_points(systems[idx], n)
        want = amended[idx]
        if base == 1:
            mult.append(0)
            continue
        if have >= want * base:
            if idx < amend_prefix:
                amended[idx] = have
                mult.append(0)
                continue
            raise ConstructionError(f"stage {n} would need a negative multiplicity")
        mult.append(_min_power(base, have, want))
    F = [math.prod(fixed_points(systems[k], n) ** mult[k] for k in range(len(stages))) for n in stages]
    flags = [t <= f <= t * 2**n for n, f, t in zip(stages, F, theta)]
    return GrowthConstruction(theta, amended, mult, systems, F, flags)
