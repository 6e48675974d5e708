"""Exact integer and rational arithmetic: primes, factorization, p-adic
valuations, multiplicative orders and Möbius utilities.

Rationals are ``fractions.Fraction`` throughout; a Fraction is always in
lowest terms with a positive denominator, which is exactly the reduced
form the rest of the package relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

import sympy

from .errors import DomainError


def primes_up_to(limit: int) -> list[int]:
    return [int(p) for p in sympy.primerange(2, limit + 1)]


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((int(p), int(e)) for p, e in sympy.factorint(n).items()))


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{prime: exponent}``."""
    n = abs(int(n))
    if n == 0:
        raise DomainError("cannot factor 0")
    return dict(_factor_cached(n))


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n)) if n not in (0, 1, -1) else []


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(prime_divisors(n))


def totient(n: int) -> int:
    if n < 1:
        raise DomainError("totient needs n >= 1")
    out = n
    for p in factorint(n) if n > 1 else ():
        out -= out // p
    return out


def divisors(n: int) -> list[int]:
    if n < 1:
        raise DomainError("divisors need n >= 1")
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius is defined for n >= 1, got {n}")
    fac = factorint(n) if n > 1 else {}
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q, p: int) -> int:
    """v_p(q) for a nonzero integer or rational q."""
    _require_prime(p)
    q = Fraction(q)
    if q == 0:
        raise DomainError("the p-adic valuation of 0 is undefined")
    return _int_valuation(abs(q.numerator), p) - _int_valuation(q.denominator, p)


def padic_abs(q, p: int) -> Fraction:
    """|q|_p = p**(-v_p(q)), exactly."""
    return Fraction(p) ** -padic_valuation(q, p)


def multiplicative_order(a: int, b: int, p: int) -> int:
    """Least m >= 1 with a**m == b**m (mod p)."""
    _require_prime(p)
    if (a * b) % p == 0:
        raise DomainError(f"p={p} divides a*b")
    return _order_cached(a % p, b % p, p)


@lru_cache(maxsize=65536)
def _order_cached(a: int, b: int, p: int) -> int:
    x = a * pow(b, -1, p) % p
    m = p - 1
    for q in factorint(p - 1) if p > 2 else ():
        while m % q == 0 and pow(x, m // q, p) == 1:
            m //= q
    return m


@lru_cache(maxsize=65536)
def order_valuation(a: int, b: int, p: int) -> int:
    """v_p(a**m - b**m) where m is the multiplicative order of a/b mod p.

    Found by testing residues modulo p, p**2, ... so a**m is never formed.
    """
    m = multiplicative_order(a, b, p)
    k = 1
    while True:
        mod = p ** (k + 1)
        if (pow(a, m, mod) - pow(b, m, mod)) % mod:
            return k
        k += 1


def valuation_of_power_difference(a: int, b: int, p: int, n: int) -> int:
    """v_p(a**n - b**n) by lifting the exponent."""
    _require_prime(p)
    if n < 1:
        raise DomainError("n must be positive")
    if math.gcd(a, b) != 1:
        raise DomainError(f"gcd({a}, {b}) != 1")
    if (a * b) % p == 0:
        raise DomainError(f"p={p} divides a*b; route it through the S-membership rules")
    if a == b or a == -b:
        raise DomainError("a = ±b makes a**n - b**n degenerate")
    if p == 2:
        if n % 2:
            return _int_valuation(abs(a - b), 2)
        return (
            _int_valuation(abs(a - b), 2)
            + _int_valuation(abs(a + b), 2)
            + _int_valuation(n, 2)
            - 1
        )
    m = multiplicative_order(a, b, p)
    if n % m:
        return 0
    return order_valuation(a, b, p) + _int_valuation(n, p)


def product_formula_check(q) -> bool:
    """Self-test: |q| times the product of all |q|_p != 1 is exactly 1."""
    q = Fraction(q)
    if q == 0:
        raise DomainError("the product formula needs q != 0")
    total = abs(q)
    for p in prime_divisors(q.numerator) + prime_divisors(q.denominator):
        total *= padic_abs(q, p)
    return total == 1


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"`` or an integer into a reduced Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def map_parameter(r) -> Fraction:
    """Reduced rational usable as the map x -> r*x (excludes 0 and ±1)."""
    r = parse_rational(r)
    if r in (0, 1, -1):
        raise DomainError(f"map parameter r={r} is not ergodic (r must avoid 0, 1, -1)")
    return r


def format_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class PrimeSet:
    """A finite set of primes, or the cofinite set of all primes except some."""

    kind: str
    primes: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("finite", "cofinite"):
            raise DomainError(f"unknown PrimeSet kind {self.kind!r}")
        ps = tuple(self.primes)
        if list(ps) != sorted(set(ps)):
            raise DomainError("PrimeSet entries must be strictly increasing")
        for p in ps:
            _require_prime(p)
        object.__setattr__(self, "primes", ps)

    @classmethod
    def finite(cls, primes: Iterable[int] = ()) -> PrimeSet:
        return cls("finite", tuple(sorted(set(primes))))

    @classmethod
    def cofinite(cls, excluded: Iterable[int] = ()) -> PrimeSet:
        return cls("cofinite", tuple(sorted(set(excluded))))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __contains__(self, p: int) -> bool:
        return (p in self.primes) == self.is_finite

    def __iter__(self) -> Iterator[int]:
        if not self.is_finite:
            raise DomainError("cannot iterate over a cofinite prime set")
        return iter(self.primes)

    def __str__(self) -> str:
        body = ",".join(map(str, self.primes))
        return "{" + body + "}" if self.is_finite else "P\\{" + body + "}"
