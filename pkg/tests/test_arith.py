from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from solenoid_lab.arith import (
    PrimeSet,
    divisors,
    factorint,
    is_prime,
    map_parameter,
    mobius,
    multiplicative_order,
    omega,
    padic_abs,
    padic_valuation,
    parse_rational,
    primes_up_to,
    product_formula_check,
    totient,
    valuation_of_power_difference,
)
from solenoid_lab.errors import DomainError


def brute_valuation(x: int, p: int) -> int:
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@pytest.mark.parametrize("q,p,expected", [(45, 3, 2), (Fraction(3, 5), 5, -1), (1, 7, 0), (-96, 2, 5)])
def test_padic_valuation(q, p, expected):
    assert padic_valuation(q, p) == expected


def test_padic_valuation_errors():
    with pytest.raises(DomainError):
        padic_valuation(0, 3)
    with pytest.raises(DomainError):
        padic_valuation(12, 4)


def test_padic_abs_exact():
    assert padic_abs(Fraction(9, 10), 3) == Fraction(1, 9)
    assert padic_abs(Fraction(9, 10), 5) == 5


@pytest.mark.parametrize("a,b,p,n,expected", [
    (2, 1, 3, 6, 2),
    (3, 1, 2, 2, 3),
    (2, 1, 7, 5, 0),
    (5, 1, 2, 1, 2),
    (3, -1, 2, 4, 4),
])
def test_power_difference_examples(a, b, p, n, expected):
    assert valuation_of_power_difference(a, b, p, n) == expected


def test_power_difference_rejects_bad_input():
    with pytest.raises(DomainError):
        valuation_of_power_difference(6, 1, 3, 2)  # p | ab
    with pytest.raises(DomainError):
        valuation_of_power_difference(4, 2, 3, 2)  # not coprime
    with pytest.raises(DomainError):
        valuation_of_power_difference(2, 1, 3, 0)


@pytest.mark.parametrize("a,b,p,expected", [(2, 1, 7, 3), (2, 1, 3, 2), (5, 16, 11, 1), (3, 2, 5, 2)])
def test_multiplicative_order(a, b, p, expected):
    assert multiplicative_order(a, b, p) == expected


small_primes = st.sampled_from(primes_up_to(60))


@settings(max_examples=200, deadline=None)
@given(a=st.integers(-60, 60), b=st.integers(-60, 60), p=small_primes, n=st.integers(1, 40))
def test_lte_matches_bruteforce(a, b, p, n):
    assume(a != 0 and b != 0 and gcd(a, b) == 1 and (a * b) % p and abs(a) != abs(b))
    assert valuation_of_power_difference(a, b, p, n) == brute_valuation(a**n - b**n, p)


@settings(max_examples=200, deadline=None)
@given(a=st.integers(1, 500), b=st.integers(1, 500), p=small_primes)
def test_order_divides_p_minus_one(a, b, p):
    assume(a % p and b % p)
    m = multiplicative_order(a, b, p)
    assert (p - 1) % m == 0
    assert (pow(a, m, p) - pow(b, m, p)) % p == 0


@pytest.mark.parametrize("n,expected", [(1, 1), (6, 1), (12, 0), (30, -1), (7, -1)])
def test_mobius_examples(n, expected):
    assert mobius(n) == expected


def test_mobius_zero_raises():
    with pytest.raises(DomainError):
        mobius(0)


def test_mobius_multiplicative_below_1000():
    for m in range(1, 1000, 7):
        for n in range(1, 1000, 11):
            if gcd(m, n) == 1:
                assert mobius(m * n) == mobius(m) * mobius(n)


def test_mobius_divisor_sum_is_delta():
    for n in range(1, 300):
        assert sum(mobius(d) for d in divisors(n)) == (1 if n == 1 else 0)


@pytest.mark.parametrize("q", [Fraction(-50, 27), Fraction(1), Fraction(2**100), Fraction(7, 9)])
def test_product_formula_examples(q):
    assert product_formula_check(q)


@settings(max_examples=1000, deadline=None)
@given(num=st.integers(-10**12, 10**12), den=st.integers(1, 10**12))
def test_product_formula_random(num, den):
    assume(num != 0)
    assert product_formula_check(Fraction(num, den))


def test_product_formula_zero_raises():
    with pytest.raises(DomainError):
        product_formula_check(0)


def test_factorint_roundtrip_and_large_inputs():
    for n in [1, 2, 360, 2**61 - 1, (2**31 - 1) * (2**61 - 1), 10**18 + 9, 600851475143]:
        fac = factorint(n)
        prod = 1
        for p, e in fac.items():
            assert is_prime(p)
            prod *= p**e
        assert prod == n


def test_is_prime_against_sieve():
    sieve = set(primes_up_to(5000))
    assert all(is_prime(n) == (n in sieve) for n in range(5000))
    assert is_prime(2**89 - 1) and not is_prime(2**89 + 1)


def test_totient_and_omega():
    assert [totient(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert omega(1) == 0 and omega(360) == 3


def test_parse_and_map_parameter():
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert parse_rational(" 5 ") == 5
    with pytest.raises(DomainError):
        parse_rational("x/2")
    for bad in ("0", "1", "-1", "3/3"):
        with pytest.raises(DomainError):
            map_parameter(bad)


def test_prime_set_behaviour():
    S = PrimeSet.finite([3, 2, 3])
    assert S.primes == (2, 3) and 2 in S and 5 not in S
    C = PrimeSet.cofinite([3, 5])
    assert 2 in C and 3 not in C and not C.is_finite
    assert str(S) == "{2,3}" and str(C) == "P\\{3,5}"
    with pytest.raises(DomainError):
        list(C)
    with pytest.raises(DomainError):
        PrimeSet.finite([4])
