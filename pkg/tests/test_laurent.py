"""
Exact arithmetic in Q[t, 1/t] and Q(t).
"""

from fractions import Fraction

import pytest

from src.knot_algebra.coefficients.laurent import LaurentPoly, RationalFn, parse_rational, rational_to_str
from src.knot_algebra.exceptions import CoefficientArithmeticError


t = LaurentPoly.monomial(1)
one = LaurentPoly.one()


def test_rational_strings():
    assert rational_to_str(Fraction(-3, 6)) == "-1/2"
    assert rational_to_str(4) == "4/1"
    assert parse_rational("6/4") == Fraction(3, 2)
    assert parse_rational(" -7 ") == Fraction(-7)


@pytest.mark.parametrize("bad", ["1.5", "1/2/3", "x", 0.5, True])
def test_parse_rational_refuses_inexact_or_malformed(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_parse_rational_zero_denominator():
    with pytest.raises(CoefficientArithmeticError):
        parse_rational("1/0")


def test_zero_coefficients_are_dropped():
    p = LaurentPoly({2: 0, -1: Fraction(1, 2), 0: 3})
    assert p.terms() == ((-1, Fraction(1, 2)), (0, Fraction(3)))
    assert (t - t).is_zero


def test_ring_operations():
    p = one - t
    assert str(p * p) == "1 - 2t + t^2"
    assert (p * p).exact_quotient(p) == p
    assert (one + t).exact_quotient(p) is None
    assert t ** -2 == LaurentPoly.monomial(-2)
    assert (2 * t) ** -1 == LaurentPoly.monomial(-1, Fraction(1, 2))
    with pytest.raises(CoefficientArithmeticError):
        (one + t) ** -1


def test_string_form_is_ascending():
    p = LaurentPoly({-1: 1, 0: Fraction(-1, 2), 3: Fraction(2, 3)})
    assert str(p) == "t^-1 - 1/2 + (2/3)t^3"
    assert str(LaurentPoly.zero()) == "0"


def test_normalized_and_substitutions():
    p = LaurentPoly({-2: -1, 0: 3})
    assert p.normalized() == LaurentPoly({0: 1, 2: -3})
    assert p.invert_variable() == LaurentPoly({2: -1, 0: 3})
    assert p.substitute_power(2) == LaurentPoly({-4: -1, 0: 3})
    assert p.derivative() == LaurentPoly({-3: 2})


def test_json_round_trip():
    p = LaurentPoly({-1: Fraction(1, 3), 4: -2})
    assert LaurentPoly.from_json(p.to_json()) == p
    r = RationalFn(p, one - t)
    assert RationalFn.from_json(r.to_json()) == r


class TestRationalFn:
    def test_canonical_form(self):
        r = RationalFn(2 * t * (one - t), (one - t) * (one - t) * 2)
        assert r.numerator == t
        assert r.denominator == one - t
        assert str(r) == "t/(1 - t)"

    def test_equality_is_value_equality(self):
        assert RationalFn(t, one - t) == RationalFn(t * t, t - t * t)
        assert RationalFn(one - t * t, one - t) == one + t
        assert (RationalFn(one + t, one - t)).is_polynomial is False

    def test_geometric_series(self):
        g = RationalFn.geometric(1, 1)
        assert g * 2 == RationalFn(2 * t, one - t)
        assert str(g * 2) == "2t/(1 - t)"
        assert g.taylor(4) == [0, 1, 1, 1, 1]
        assert RationalFn.geometric(-1, 2).taylor(6) == [0, 0, -1, 0, 1, 0, -1]

    def test_field_operations(self):
        a = RationalFn(one, one - t)
        b = RationalFn(t, one + t)
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a.derivative() == RationalFn(one, (one - t) * (one - t))

    def test_zero_denominator(self):
        with pytest.raises(CoefficientArithmeticError):
            RationalFn(one, LaurentPoly.zero())
        with pytest.raises(CoefficientArithmeticError):
            RationalFn(one) / RationalFn(LaurentPoly.zero())

    def test_taylor_refuses_poles(self):
        with pytest.raises(CoefficientArithmeticError):
            RationalFn(LaurentPoly.monomial(-1)).taylor(3)
