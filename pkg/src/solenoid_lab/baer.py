"""Subgroups of Q via characteristic sequences, and solenoid systems.

Only eventually-constant sequences are representable: a default height
plus finitely many exceptional primes.  Heights are non-negative ints or
``INF``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .arith import (
    PrimeSet,
    format_rational,
    is_prime,
    map_parameter,
    parse_rational,
    prime_divisors,
    primes_up_to,
)
from .errors import DomainError, ValidationError

INF = math.inf

AUTOMORPHISM = "automorphism"
ENDOMORPHISM = "endomorphism"
_MODE_ALIASES = {"auto": AUTOMORPHISM, "endo": ENDOMORPHISM,
                 AUTOMORPHISM: AUTOMORPHISM, ENDOMORPHISM: ENDOMORPHISM}


def _check_height(k):
    if k == INF:
        return INF
    if isinstance(k, float) or int(k) != k or k < 0:
        raise DomainError(f"heights must be non-negative integers or inf, got {k!r}")
    return int(k)


@dataclass(frozen=True)
class CharacteristicSequence:
    """(k_p) equal to ``default`` except at the primes in ``exceptions``.

    Construction canonicalizes: exceptions equal to the default are dropped.
    """

    default: float | int = 0
    exceptions: tuple[tuple[int, float | int], ...] = field(default=())

    def __init__(self, default=0, exceptions: Mapping[int, float | int] | tuple = ()):
        items = dict(exceptions)
        default = _check_height(default)
        canon = []
        for p in sorted(items):
            if not is_prime(p):
                raise DomainError(f"exception key {p} is not prime")
            k = _check_height(items[p])
            if k != default:
                canon.append((p, k))
        object.__setattr__(self, "default", default)
        object.__setattr__(self, "exceptions", tuple(canon))

    def height(self, p: int):
        for q, k in self.exceptions:
            if q == p:
                return k
        return self.default

    def __str__(self) -> str:
        return format_chi(self)


def format_chi(c: CharacteristicSequence) -> str:
    def fmt(k):
        return "inf" if k == INF else str(k)

    body = ", ".join(f"{p}:{fmt(k)}" for p, k in c.exceptions)
    return f"default={fmt(c.default)}" + (f"; {body}" if body else "")


def parse_chi(text: str) -> CharacteristicSequence:
    """Parse ``default=<int|inf>; p1:k1, p2:k2, ...``."""

    def height(tok: str):
        tok = tok.strip().lower()
        if tok in ("inf", "infinity", "∞"):
            return INF
        try:
            return int(tok)
        except ValueError:
            raise DomainError(f"bad height {tok!r}") from None

    default = 0
    exceptions: dict[int, float | int] = {}
    for part in text.replace(";", ",").split(","):
        part = part.strip()
        if not part:
            continue
        if part.startswith("default"):
            _, _, val = part.partition("=")
            default = height(val)
        elif ":" in part:
            p, _, k = part.partition(":")
            try:
                exceptions[int(p)] = height(k)
            except ValueError:
                raise DomainError(f"bad prime {p!r}") from None
        else:
            raise DomainError(f"cannot parse characteristic entry {part!r}")
    return CharacteristicSequence(default, exceptions)


def s_integers(primes) -> CharacteristicSequence:
    """Characteristic of the ring Z[1/p : p in primes]."""
    return CharacteristicSequence(0, {p: INF for p in primes})


def localization(excluded) -> CharacteristicSequence:
    """Characteristic of the ring obtained by inverting every prime except ``excluded``."""
    return CharacteristicSequence(INF, {p: 0 for p in excluded})


def random_s_integers(seed: int, prime_bound: int) -> CharacteristicSequence:
    """Coin-toss subring: each prime up to ``prime_bound`` is inverted with
    probability 1/2, primes beyond the bound get height 0.

    This truncation is an approximation of a genuinely random subring.
    """
    rng = random.Random(seed)
    return s_integers(p for p in primes_up_to(prime_bound) if rng.random() < 0.5)


def same_type(c1: CharacteristicSequence, c2: CharacteristicSequence) -> bool:
    if c1.default != c2.default:
        return False
    keys = {p for p, _ in c1.exceptions} | {p for p, _ in c2.exceptions}
    for p in keys:
        k1, k2 = c1.height(p), c2.height(p)
        if k1 != k2 and INF in (k1, k2):
            return False
    return True


def contains(c: CharacteristicSequence, q) -> bool:
    q = parse_rational(q)
    if q == 0:
        return True
    den = q.denominator
    for p in prime_divisors(den):
        v = 0
        while den % p == 0:
            den //= p
            v += 1
        if v > c.height(p):
            return False
    return True


def infinite_height_set(c: CharacteristicSequence) -> PrimeSet:
    if c.default == INF:
        return PrimeSet.cofinite(p for p, k in c.exceptions if k != INF)
    return PrimeSet.finite(p for p, k in c.exceptions if k == INF)


@dataclass(frozen=True)
class SolenoidSystem:
    """The dual of x -> r*x on the subgroup H(chi)."""

    chi: CharacteristicSequence
    r: Fraction
    mode: str = AUTOMORPHISM

    @property
    def a(self) -> int:
        return self.r.numerator

    @property
    def b(self) -> int:
        return self.r.denominator

    @property
    def prime_set(self) -> PrimeSet:
        return infinite_height_set(self.chi)

    def __str__(self) -> str:
        return f"x -> {format_rational(self.r)} x on H({self.chi}) [{self.mode}]"


def validate_system(c: CharacteristicSequence, r, mode: str = AUTOMORPHISM) -> SolenoidSystem:
    try:
        mode = _MODE_ALIASES[mode]
    except KeyError:
        raise DomainError(f"unknown mode {mode!r}") from None
    r = map_parameter(r)
    needed = prime_divisors(r.denominator)
    if mode == AUTOMORPHISM:
        needed = sorted(set(needed) | set(prime_divisors(r.numerator)))
    for p in needed:
        if c.height(p) != INF:
            raise ValidationError(
                f"x -> {format_rational(r)} x needs k_{p} = inf for an {mode}, "
                f"but k_{p} = {c.height(p)}",
                prime=p,
            )
    return SolenoidSystem(c, r, mode)


def s_integer_system(primes, r, mode: str = AUTOMORPHISM) -> SolenoidSystem:
    return validate_system(s_integers(primes), r, mode)


def localization_system(excluded, r, mode: str = AUTOMORPHISM) -> SolenoidSystem:
    return validate_system(localization(excluded), r, mode)
