import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solenoid_lab.arith import PrimeSet
from solenoid_lab.baer import (
    ENDOMORPHISM,
    INF,
    CharacteristicSequence,
    contains,
    format_chi,
    infinite_height_set,
    localization,
    parse_chi,
    random_s_integers,
    s_integers,
    same_type,
    validate_system,
)
from solenoid_lab.errors import DomainError, ValidationError
from solenoid_lab.orbits import fixed_points

PRIMES = [2, 3, 5, 7, 11, 13]
heights = st.sampled_from([0, 1, 2, 5, INF])
sequences = st.builds(
    CharacteristicSequence,
    heights,
    st.dictionaries(st.sampled_from(PRIMES), heights, max_size=4),
)


def test_canonical_form_drops_redundant_exceptions():
    c = CharacteristicSequence(1, {2: 1, 3: 0})
    assert c.exceptions == ((3, 0),)
    assert c == CharacteristicSequence(1, {3: 0})


def test_rejects_bad_heights_and_keys():
    with pytest.raises(DomainError):
        CharacteristicSequence(-1)
    with pytest.raises(DomainError):
        CharacteristicSequence(0, {4: 1})
    with pytest.raises(DomainError):
        CharacteristicSequence(1.5)


@pytest.mark.parametrize("c1,c2,expected", [
    (CharacteristicSequence(1, {2: 0}), CharacteristicSequence(1, {3: 5}), True),
    (CharacteristicSequence(0), CharacteristicSequence(INF), False),
    (CharacteristicSequence(0, {2: INF}), CharacteristicSequence(0, {2: 3}), False),
])
def test_same_type_examples(c1, c2, expected):
    assert same_type(c1, c2) is expected


@settings(max_examples=1000, deadline=None)
@given(a=sequences, b=sequences, c=sequences)
def test_same_type_is_an_equivalence(a, b, c):
    assert same_type(a, a)
    assert same_type(a, b) == same_type(b, a)
    if same_type(a, b) and same_type(b, c):
        assert same_type(a, c)


def test_contains_examples():
    c = CharacteristicSequence(1, {2: 0})
    assert contains(c, Fraction(1, 3))
    assert not contains(c, Fraction(1, 9))
    assert not contains(c, Fraction(1, 2))
    assert contains(c, 0)


@settings(max_examples=300, deadline=None)
@given(c=sequences, x=st.fractions(max_denominator=500), y=st.fractions(max_denominator=500))
def test_contains_is_a_subgroup(c, x, y):
    if contains(c, x) and contains(c, y):
        assert contains(c, x + y)
        assert contains(c, -x)


def test_infinite_height_set_examples():
    assert infinite_height_set(localization([3, 5])) == PrimeSet.cofinite([3, 5])
    assert infinite_height_set(s_integers([2, 3])) == PrimeSet.finite([2, 3])
    assert infinite_height_set(CharacteristicSequence(0)) == PrimeSet.finite([])


def test_validate_system_rules():
    assert validate_system(s_integers([2]), 2).r == 2
    with pytest.raises(ValidationError) as err:
        validate_system(CharacteristicSequence(0), 2)
    assert err.value.prime == 2
    sys = validate_system(CharacteristicSequence(0), 2, "endo")
    assert sys.mode == ENDOMORPHISM
    with pytest.raises(ValidationError) as err:
        validate_system(s_integers([2]), Fraction(2, 3), "endo")
    assert err.value.prime == 3
    with pytest.raises(DomainError):
        validate_system(s_integers([2]), 1)


def test_chi_text_round_trip():
    for text in ["default=1; 2:0", "default=inf; 3:0, 5:0", "default=0", "default=0; 2:inf, 7:3"]:
        c = parse_chi(text)
        assert parse_chi(format_chi(c)) == c
    assert parse_chi("default=1;2:0") == CharacteristicSequence(1, {2: 0})
    with pytest.raises(DomainError):
        parse_chi("default=1; two:0")


def test_random_subring_is_seeded():
    assert random_s_integers(7, 50) == random_s_integers(7, 50)
    c = random_s_integers(7, 50)
    assert all(k == INF for _, k in c.exceptions)


def test_same_type_systems_share_fixed_points():
    rng = random.Random(3)
    for _ in range(20):
        S = sorted({2} | {p for p in PRIMES if rng.random() < 0.4})
        base = s_integers(S)
        # alter finitely many finite heights: same type
        other = CharacteristicSequence(0, dict(base.exceptions) | {q: rng.randint(1, 4) for q in (17, 19) if rng.random() < 0.7})
        assert same_type(base, other)
        s1, s2 = validate_system(base, 2), validate_system(other, 2)
        assert [fixed_points(s1, n) for n in range(1, 51)] == [fixed_points(s2, n) for n in range(1, 51)]
