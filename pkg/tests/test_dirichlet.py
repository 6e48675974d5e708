import math
from fractions import Fraction

import pytest

from solenoid_lab.arith import padic_abs
from solenoid_lab.baer import localization_system, s_integer_system, s_integers, validate_system
from solenoid_lab.dirichlet import (
    dirichlet_partial,
    dirichlet_reference_3_5,
    growth_construction,
    mertens_slope,
    orbit_density,
    pi_polylog_fit,
)
from solenoid_lab.errors import ConstructionError, DomainError
from solenoid_lab.orbits import fixed_points, mersenne_prime_set

SYS_3_5 = localization_system([3, 5], 2)


def empirical_density(sys, N):
    """Average of prod_{p in S} |a^n - b^n|_p over n <= N, in exact arithmetic."""
    total = Fraction(0)
    for n in range(1, N + 1):
        d = sys.a**n - sys.b**n
        term = Fraction(1)
        for p in sys.prime_set.primes:
            if d % p == 0:
                term *= padic_abs(d, p)
        total += term
    return total / N


def test_rational_system_is_a_single_orbit():
    q = localization_system([], 2)
    for s in (1.5, 2.0, 3.0):
        assert dirichlet_partial(q, s, 200).value == 1.0


def test_single_term():
    assert dirichlet_partial(localization_system([3], 2), 2, 1).value == 1.0


def test_partial_sums_monotone():
    vals = [dirichlet_partial(SYS_3_5, 3, N).value for N in (10, 100, 1000, 10000)]
    assert vals == sorted(vals)
    by_s = [dirichlet_partial(SYS_3_5, s, 2000).value for s in (1.5, 2, 3, 4)]
    assert by_s == sorted(by_s, reverse=True)


def test_partial_sum_tail_bound_is_honest():
    short = dirichlet_partial(SYS_3_5, 3, 1000)
    long = dirichlet_partial(SYS_3_5, 3, 100000)
    assert 0 <= long.value - short.value <= short.tail_bound
    assert math.isinf(dirichlet_partial(SYS_3_5, 2, 100).tail_bound)


def test_partial_rejects_bad_input():
    with pytest.raises(DomainError):
        dirichlet_partial(s_integer_system([2], 2), 3, 10)
    with pytest.raises(DomainError):
        dirichlet_partial(SYS_3_5, 1, 10)


def test_reference_limits():
    assert dirichlet_reference_3_5(60) == pytest.approx(1.0, abs=1e-15)
    assert math.isfinite(dirichlet_reference_3_5(1))
    with pytest.raises(DomainError):
        dirichlet_reference_3_5(0)


def test_reference_matches_partial_sums():
    ref = dirichlet_reference_3_5(4)
    assert dirichlet_partial(SYS_3_5, 4, 20000).value == pytest.approx(ref, abs=1e-6)


@pytest.mark.parametrize("sys,expected", [
    (s_integer_system([2, 3], 2), Fraction(5, 8)),
    (validate_system(s_integers([3, 7]), 2, "endo"), Fraction(269, 576)),
    (s_integer_system([2], 2), Fraction(1)),
])
def test_density_values(sys, expected):
    assert orbit_density(sys) == expected


def test_density_of_z_sixth_by_series():
    # 1/2 from odd n, plus sum_j 3^-2j restricted to even n
    assert orbit_density(s_integer_system([2, 3], 2)) == Fraction(1, 2) + Fraction(1, 8)


@pytest.mark.parametrize("primes,r", [([2, 3], 2), ([2, 3, 5], 2), ([3, 5, 7], 3), ([2, 3], 3), ([2, 3], -3), ([3, 5, 7], Fraction(5, 3))])
def test_density_against_exact_averages(primes, r):
    sys = s_integer_system(primes, r)
    exact = orbit_density(sys)
    # the mean over a long prefix converges to the density at rate O(log N / N)
    assert float(empirical_density(sys, 4000)) == pytest.approx(float(exact), abs=0.01)


def test_mertens_slope_examples():
    assert mertens_slope(s_integer_system([2], 2), 10**5) == pytest.approx(1.0, abs=0.01)
    assert mertens_slope(s_integer_system([2, 3], 2), 10**4) == pytest.approx(0.625, abs=0.01)


def test_mertens_slope_stabilizes():
    sys = s_integer_system([2, 3], 2)
    a, b = mertens_slope(sys, 10**4), mertens_slope(sys, 10**5)
    assert abs(a - b) <= 10 / 10**4 + 1e-9


def test_mertens_slope_matches_density_for_other_systems():
    for sys in (s_integer_system([2, 3], 3), s_integer_system([3, 5, 7], 3)):
        assert mertens_slope(sys, 10**4) == pytest.approx(float(orbit_density(sys)), abs=0.01)


def test_mertens_slope_rejects_bad_input():
    with pytest.raises(DomainError):
        mertens_slope(SYS_3_5, 10**4)
    with pytest.raises(DomainError):
        mertens_slope(s_integer_system([2], 2), 100)


def test_polylog_fit_degenerate():
    fit = pi_polylog_fit(localization_system([], 2), 10**4)
    assert fit.K_hat == 0.0 and fit.C_hat == 1.0


def test_polylog_fit_small_scale():
    fit = pi_polylog_fit(localization_system([3], 2), 10**5)
    assert round(fit.K_hat) == 1


def test_growth_single_stage():
    g = growth_construction([9])
    assert g.multiplicities == [2] and g.F_product == [9] and g.flags == [True]


def test_growth_constant_targets():
    g = growth_construction([1] * 8)
    assert g.multiplicities == [0] * 8 and g.F_product == [1] * 8


def test_growth_product_invariant():
    g = growth_construction([3, 7, 20, 100, 2000])
    for idx, n in enumerate(g.stages()):
        expect = math.prod(fixed_points(c, n) ** m for c, m in zip(g.component_systems, g.multiplicities))
        assert g.F_product[idx] == expect
    for idx, n in enumerate(g.stages()):
        assert g.component_systems[idx].prime_set == mersenne_prime_set(n - 1)


def test_growth_rejects_overshoot_without_amendment():
    theta = [2 ** (n * n) for n in range(2, 13)]
    with pytest.raises(ConstructionError):
        growth_construction(theta)


def test_growth_rejects_bad_targets():
    with pytest.raises(DomainError):
        growth_construction([0, 3])
