from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from drazinkit.errors import InvalidDomain, NotAUnit, ParseError, ZeroDenominator
from drazinkit.scalars import (
    GF,
    QQ,
    ZZ,
    Domain,
    Kind,
    ModularInt,
    PrimeFieldElem,
    Zn,
    invert_scalar,
    is_nilpotent_scalar,
    is_prime,
    normalize_rational,
)


@pytest.mark.parametrize(
    "num, den, expected",
    [(2, 4, Fraction(1, 2)), (3, -6, Fraction(-1, 2)), (0, 5, Fraction(0, 1))],
)
def test_normalize_rational(num, den, expected):
    r = normalize_rational(num, den)
    assert r == expected
    assert (r.numerator, r.denominator) == (expected.numerator, expected.denominator)


def test_normalize_rational_zero_denominator():
    with pytest.raises(ZeroDenominator):
        normalize_rational(1, 0)


def test_invert_examples():
    assert invert_scalar(2, GF(7)) == 4
    assert invert_scalar(Fraction(3, 4), QQ) == Fraction(4, 3)
    with pytest.raises(NotAUnit):
        invert_scalar(2, Zn(12))


def test_invert_boxed_stays_boxed():
    x = invert_scalar(PrimeFieldElem(3, 11), None)
    assert isinstance(x, PrimeFieldElem)
    assert x * 3 == 1


def test_integer_units():
    assert invert_scalar(-1, ZZ) == -1
    with pytest.raises(NotAUnit):
        invert_scalar(2, ZZ)


@pytest.mark.parametrize("x, n, expected", [(2, 8, True), (2, 7, False), (6, 12, True), (4, 12, False), (0, 5, True)])
def test_nilpotent_scalar(x, n, expected):
    assert is_nilpotent_scalar(x, Zn(n)) is expected
    assert is_nilpotent_scalar(ModularInt(x, n)) is expected


@given(st.integers(2, 200), st.integers(0, 400))
def test_nilpotent_scalar_matches_powers(n, x):
    # x^k for k >= log2(n) vanishes iff x is nilpotent
    assert is_nilpotent_scalar(x, Zn(n)) == (pow(x, n.bit_length(), n) == 0)


@given(st.integers(2, 10**6))
def test_is_prime_against_trial_division(n):
    slow = all(n % d for d in range(2, int(n**0.5) + 1))
    assert is_prime(n) == slow


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_gf_requires_prime():
    with pytest.raises(InvalidDomain):
        GF(12)
    with pytest.raises(InvalidDomain):
        Zn(1)


@given(st.integers(1, 10**9).filter(is_prime), st.integers(1, 10**9))
def test_field_inverse_property(p, x):
    x %= p
    if x:
        assert x * invert_scalar(x, GF(p)) % p == 1


def test_modular_int_arithmetic():
    a, b = ModularInt(5, 12), ModularInt(9, 12)
    assert a + b == 2
    assert a * b == 9
    assert a - b == 8
    assert -a == 7
    assert a**2 == 1
    assert 1 - a == 8
    with pytest.raises(InvalidDomain):
        a + ModularInt(1, 7)


def test_prime_field_division():
    assert PrimeFieldElem(3, 7) / PrimeFieldElem(5, 7) == 2  # 5 * 2 = 10 = 3


@pytest.mark.parametrize("tag", ["Q", "Z", "GF:7", "Zn:12"])
def test_tag_round_trip(tag):
    d = Domain.from_tag(tag)
    assert d.tag == tag
    assert Domain.from_tag(d.file_tag) == d


@pytest.mark.parametrize("tag", ["", "F:7", "GF:x", "GF", "Q 3"])
def test_bad_tags(tag):
    with pytest.raises(ParseError):
        Domain.from_tag(tag)


def test_parse_literals():
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert GF(7).parse("6") == 6
    with pytest.raises(ParseError):
        GF(7).parse("7")
    with pytest.raises(ParseError):
        GF(7).parse("1/2")
    with pytest.raises(ParseError):
        QQ.parse("1/0")


def test_elements_and_sizes():
    assert list(GF(3).elements()) == [0, 1, 2]
    assert Zn(4).size == 4 and QQ.size is None
    assert GF(5).characteristic == 5 and QQ.characteristic == 0
    assert GF(5).kind is Kind.PRIME_FIELD and GF(5).is_field and not Zn(4).is_field


def test_coerce_rational_into_field():
    assert GF(7).coerce(Fraction(1, 2)) == 4
    with pytest.raises(TypeError):
        ZZ.coerce(Fraction(1, 2))
