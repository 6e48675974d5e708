import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from solenoid_lab import polys
from solenoid_lab.errors import CapabilityError, DomainError
from solenoid_lab.mahler import (
    abramov_entropy,
    is_cyclotomic_product,
    lehmer_scan,
    mahler_measure,
    toral_entropy_check,
)

LEHMER = (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)


def mp_measure(desc):
    """Oracle: high-precision roots from mpmath."""
    with mpmath.workdps(60):
        roots = mpmath.polyroots(list(desc), maxsteps=400, extraprec=200)
        total = mpmath.log(abs(desc[0]))
        for z in roots:
            if abs(z) > 1:
                total += mpmath.log(abs(z))
        return float(total)


def mul_desc(f, g):
    return tuple(polys.mul(f[::-1], g[::-1])[::-1])


def test_measure_examples():
    assert mahler_measure(LEHMER) == pytest.approx(0.1623576120077, abs=1e-9)
    assert mahler_measure([1, -2]) == pytest.approx(math.log(2), abs=1e-12)
    assert mahler_measure([1, -1, -1]) == pytest.approx(math.log((1 + math.sqrt(5)) / 2), abs=1e-12)
    assert mahler_measure([1, 1, 1]) == 0.0
    assert mahler_measure([-5]) == pytest.approx(math.log(5))
    with pytest.raises(DomainError):
        mahler_measure([0])


def test_measure_includes_leading_coefficient():
    assert mahler_measure([3, 0, -2]) == pytest.approx(math.log(3), abs=1e-12)
    assert mahler_measure([2, 1]) == pytest.approx(math.log(2), abs=1e-12)


def test_measure_handles_repeated_roots():
    f = mul_desc(mul_desc((1, -1, -1), (1, -1, -1)), (1, 0, -3))
    assert mahler_measure(f) == pytest.approx(2 * math.log((1 + math.sqrt(5)) / 2) + math.log(3), abs=1e-9)


int_polys = st.lists(st.integers(-4, 4), min_size=2, max_size=9).filter(lambda c: c[0] != 0)


@settings(max_examples=150, deadline=None)
@given(int_polys, int_polys)
def test_measure_is_additive(f, g):
    assume(len(f) + len(g) - 2 <= 8)
    assert mahler_measure(mul_desc(f, g)) == pytest.approx(mahler_measure(f) + mahler_measure(g), abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(int_polys)
def test_measure_matches_high_precision_oracle(f):
    assume(any(f[1:]))
    assert mahler_measure(f) == pytest.approx(mp_measure(f), abs=1e-9)


@pytest.mark.parametrize("f,expected", [
    ((1, 1, 1, 1, 1), True),
    ((1, -1, -1), False),
    ((1, 0, 0, -1), True),  # (x - 1)(x^2 + x + 1)
    ((1, 0), False),
])
def test_cyclotomic_examples(f, expected):
    assert is_cyclotomic_product(f) is expected


def test_cyclotomic_requires_monic():
    with pytest.raises(DomainError):
        is_cyclotomic_product([2, 1])


def monic(degree, height):
    rng = range(-height, height + 1)
    for rest in itertools.product(rng, repeat=degree):
        if rest[-1] != 0:
            yield (1,) + rest


def test_zero_measure_iff_cyclotomic_exhaustive():
    for d in range(1, 5):
        for f in monic(d, 2):
            assert (mahler_measure(f) < 1e-9) == is_cyclotomic_product(f), f


def test_zero_measure_iff_cyclotomic_sampled():
    rng = random.Random(8)
    samples = [(1,) + tuple(rng.randint(-2, 2) for _ in range(d - 1)) + (rng.choice([-2, -1, 1, 2]),)
               for d in range(5, 9) for _ in range(150)]
    # products of cyclotomics are rare at random; add some on purpose
    for a, b in itertools.combinations([1, 2, 3, 4, 5, 6, 8, 10, 12], 2):
        f = polys.mul(polys.cyclotomic(a), polys.cyclotomic(b))
        if len(f) - 1 <= 8:
            samples.append(tuple(f[::-1]))
    for f in samples:
        assert (mahler_measure(f) < 1e-9) == is_cyclotomic_product(f), f


@pytest.mark.parametrize("r,arg", [(Fraction(3, 2), 3), (2, 2), (-2, 2), (Fraction(-5, 7), 7)])
def test_abramov_examples(r, arg):
    h = abramov_entropy(r)
    assert h.exact_arg == arg and h.value == pytest.approx(math.log(arg))


def test_abramov_rejects_units():
    for r in (0, 1, -1):
        with pytest.raises(DomainError):
            abramov_entropy(r)


@settings(max_examples=200, deadline=None)
@given(st.integers(-500, 500), st.integers(1, 500))
def test_abramov_symmetry_and_linear_measure(a, b):
    assume(a != 0 and math.gcd(a, b) == 1 and abs(a) != b)
    r = Fraction(a, b)
    h = abramov_entropy(r)
    assert h == abramov_entropy(1 / r)
    assert h.value == pytest.approx(mahler_measure([b, -a]), abs=1e-12)


def canonical(desc):
    neg = tuple(c * (-1) ** (i % 2) for i, c in enumerate(desc))
    cands = [desc, neg]
    for f in (desc, neg):
        if abs(f[-1]) == 1:
            cands.append(tuple(c * f[-1] for c in reversed(f)))
    return max(cands)


def test_scan_matches_bruteforce_orbits():
    threshold = 0.6
    expected = set()
    for d in range(1, 6):
        for f in monic(d, 1):
            if is_cyclotomic_product(f):
                continue
            if mp_measure(f) < threshold:
                expected.add(canonical(f))
    got = lehmer_scan(5, 1, threshold)
    assert {f for f, _ in got} == expected
    assert len(got) == len(expected)
    assert [m for _, m in got] == sorted(m for _, m in got)


def test_scan_small_cases():
    assert lehmer_scan(2, 1, 0.05) == []
    assert lehmer_scan(6, 1, 0) == []
    with pytest.raises(CapabilityError):
        lehmer_scan(20, 3, 0.1)


def test_scan_finds_lehmer_polynomial():
    found = lehmer_scan(10, 1, 0.17)
    assert LEHMER in [f for f, _ in found]


def test_scan_is_deterministic_with_workers():
    assert lehmer_scan(7, 1, 0.3, workers=1) == lehmer_scan(7, 1, 0.3, workers=2)


@pytest.mark.parametrize("A,exact", [
    ([[2, 1], [1, 1]], math.log((3 + math.sqrt(5)) / 2)),
    ([[0, 1], [1, 1]], math.log((1 + math.sqrt(5)) / 2)),
    ([[3, 10], [1, 3]], math.log(3 + math.sqrt(10))),
])
def test_toral_entropy(A, exact):
    chk = toral_entropy_check(A, 50)
    assert chk.mahler == pytest.approx(exact, abs=1e-12)
    assert chk.gap <= 0.05


def test_toral_entropy_rejects_non_ergodic():
    with pytest.raises(DomainError):
        toral_entropy_check([[1, 1], [0, 1]], 10)
