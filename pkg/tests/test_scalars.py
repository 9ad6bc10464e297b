from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symspace.scalars import (
    QSqrt2,
    fraction_to_mpf,
    parse_decimal,
    parse_rational,
    qsqrt2_to_real,
)

rationals = st.fractions(
    min_value=Fraction(-100), max_value=Fraction(100), max_denominator=64
)
field_elements = st.builds(QSqrt2, rationals, rationals)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == Fraction(-7)
    assert parse_rational(" 5/8 ") == Fraction(5, 8)
    assert parse_rational("1e-9") == Fraction(1, 10**9)


def test_parse_rational_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rational("one half")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_parse_decimal():
    assert parse_decimal("0.25") == Fraction(1, 4)
    assert parse_decimal("1e-9") == Fraction(1, 10**9)
    with pytest.raises(ValueError):
        parse_decimal("NaN")


def test_known_products():
    one_plus = QSqrt2(1, 1)
    one_minus = QSqrt2(1, -1)
    # (1 + sqrt2)(1 - sqrt2) = 1 - 2 = -1
    assert one_plus * one_minus == QSqrt2(-1, 0)
    # (3 + 2 sqrt2)(3 - 2 sqrt2) = 9 - 8 = 1
    assert QSqrt2(3, 2) * QSqrt2(3, -2) == QSqrt2(1, 0)
    assert QSqrt2(0, 1) * QSqrt2(0, 1) == QSqrt2(2, 0)


def test_inverse_of_silver_ratio():
    # 1/(1 + sqrt2) = sqrt2 - 1
    assert QSqrt2(1, 1).inverse() == QSqrt2(-1, 1)
    assert QSqrt2(1, 1) * QSqrt2(1, 1).inverse() == QSqrt2(1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QSqrt2(0, 0).inverse()


def test_exact_sign():
    # 3 - 2 sqrt2 > 0 because 9 > 8; 7 - 5 sqrt2 < 0 because 49 < 50.
    assert QSqrt2(3, -2).is_positive()
    assert not QSqrt2(7, -5).is_positive()
    assert QSqrt2(-3, 2).sign() == -1
    assert QSqrt2(0, 0).sign() == 0
    assert QSqrt2(0, 1) > 1
    assert QSqrt2(0, 1) < Fraction(3, 2)
    assert abs(QSqrt2(1, -1)) == QSqrt2(-1, 1)


def test_equality_against_rationals():
    assert QSqrt2(Fraction(5, 3)) == Fraction(5, 3)
    assert QSqrt2(1, 1) != 1
    assert bool(QSqrt2(0, 0)) is False
    assert bool(QSqrt2(0, Fraction(1, 8))) is True


def test_str_formats():
    assert str(QSqrt2(Fraction(3, 2))) == "3/2"
    assert str(QSqrt2(0, 2)) == "2*sqrt2"
    assert str(QSqrt2(1, -1)) == "1-1*sqrt2"


def test_immutability():
    x = QSqrt2(1, 2)
    with pytest.raises(AttributeError):
        x.a = Fraction(5)


@given(field_elements, field_elements, field_elements)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == QSqrt2(0)


@given(field_elements)
def test_multiplicative_inverse(x):
    if not x:
        return
    assert x * x.inverse() == QSqrt2(1)


@given(field_elements, field_elements)
def test_sign_respects_order(x, y):
    # sign is computed exactly from a^2 vs 2 b^2, so it must agree with
    # the numeric embedding.
    lhs = qsqrt2_to_real(x, 128)
    rhs = qsqrt2_to_real(y, 128)
    if x < y:
        assert lhs < rhs + mpmath.mpf(2) ** -100
    elif x > y:
        assert lhs > rhs - mpmath.mpf(2) ** -100


def test_numeric_embedding_accuracy():
    # 3 - 2 sqrt2 = 0.17157287525380990... (1/(3 + 2 sqrt2))
    with mpmath.workprec(128):
        value = qsqrt2_to_real(QSqrt2(3, -2), 128)
        reference = mpmath.mpf("0.171572875253809902396622551580603843")
        assert abs(value - reference) < mpmath.mpf(2) ** -100


def test_fraction_to_mpf_exact_for_dyadics():
    with mpmath.workprec(128):
        assert fraction_to_mpf(Fraction(3, 8)) == mpmath.mpf("0.375")
        assert fraction_to_mpf(Fraction(-5, 2)) == mpmath.mpf("-2.5")
