"""
Exact coefficient rings: Laurent polynomials over Q in one variable t, and rational functions
in t kept in a canonical reduced form. Polynomial gcd and exact division are delegated to sympy
(`Poly` over `QQ`); everything the rest of the package sees is built from `fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

import sympy

from src.knot_algebra.exceptions import CoefficientArithmeticError


T = sympy.Symbol("t")

Scalar = Union[Fraction, int]


def rational_to_str(value: Scalar) -> str:
    """
    Serializes an exact rational as "numerator/denominator" (denominator always written).
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parses "p/q" or "p" into a Fraction. Floats are refused on purpose.
    """
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"refusing non-exact rational {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a 'p/q' string, got {type(text).__name__}")
    parts = text.strip().split("/")
    if len(parts) > 2 or not all(p.strip().lstrip("+-").isdigit() for p in parts):
        raise ValueError(f"malformed rational {text!r}")
    if len(parts) == 2 and int(parts[1]) == 0:
        raise CoefficientArithmeticError(f"zero denominator in {text!r}")
    return Fraction(int(parts[0]), int(parts[1]) if len(parts) == 2 else 1)


def _to_sympy_rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _from_sympy_rational(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


class LaurentPoly:
    """
    An element of Q[t, 1/t], stored as a sorted tuple of (exponent, coefficient) pairs with no
    zero coefficients. Instances are immutable and hashable.
    """

    __slots__ = ("_terms",)

    _terms: tuple[tuple[int, Fraction], ...]

    def __init__(self, coefficients: Optional[Mapping[int, Scalar]] = None):
        collected: dict[int, Fraction] = {}
        for exponent, coefficient in (coefficients or {}).items():
            exponent = int(exponent)
            collected[exponent] = collected.get(exponent, Fraction(0)) + Fraction(coefficient)
        self._terms = tuple(sorted((e, c) for e, c in collected.items() if c != 0))

    @classmethod
    def _from_terms(cls, terms: Iterable[tuple[int, Fraction]]) -> LaurentPoly:
        poly = cls.__new__(cls)
        poly._terms = tuple(sorted((e, c) for e, c in terms if c != 0))
        return poly

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls._from_terms(())

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls._from_terms(((0, Fraction(1)),))

    @classmethod
    def constant(cls, value: Scalar) -> LaurentPoly:
        return cls._from_terms(((0, Fraction(value)),))

    @classmethod
    def monomial(cls, exponent: int, coefficient: Scalar = 1) -> LaurentPoly:
        return cls._from_terms(((int(exponent), Fraction(coefficient)),))

    @classmethod
    def from_poly(cls, poly: sympy.Poly, shift: int = 0) -> LaurentPoly:
        """
        Converts a univariate sympy Poly over QQ, multiplied by t^shift.
        """
        return cls._from_terms(
            (int(monom[0]) + shift, _from_sympy_rational(coeff)) for monom, coeff in poly.terms()
        )

    @classmethod
    def from_sympy(cls, expr) -> LaurentPoly:
        """
        Converts a sympy expression that is a Laurent polynomial in `T`.
        """
        numer, denom = sympy.fraction(sympy.together(sympy.expand(expr)))
        denom_poly = sympy.Poly(denom, T, domain=sympy.QQ)
        if len(denom_poly.terms()) != 1:
            raise CoefficientArithmeticError(f"{expr} is not a Laurent polynomial in t")
        (shift,), scale = denom_poly.terms()[0]
        numer_poly = sympy.Poly(numer, T, domain=sympy.QQ)
        return cls.from_poly(numer_poly, -int(shift)) * (1 / _from_sympy_rational(scale))

    @classmethod
    def from_json(cls, source: Mapping[str, str]) -> LaurentPoly:
        return cls({int(e): parse_rational(c) for e, c in source.items()})

    def to_json(self) -> dict[str, str]:
        return {str(e): rational_to_str(c) for e, c in self._terms}

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def coefficient(self, exponent: int) -> Fraction:
        for e, c in self._terms:
            if e == exponent:
                return c
        return Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def min_exponent(self) -> int:
        if not self._terms:
            raise CoefficientArithmeticError("the zero polynomial has no lowest exponent")
        return self._terms[0][0]

    @property
    def max_exponent(self) -> int:
        if not self._terms:
            raise CoefficientArithmeticError("the zero polynomial has no highest exponent")
        return self._terms[-1][0]

    def shift(self, k: int) -> LaurentPoly:
        """
        Multiplies by t^k.
        """
        return LaurentPoly._from_terms((e + k, c) for e, c in self._terms)

    def invert_variable(self) -> LaurentPoly:
        """
        Substitutes t -> 1/t.
        """
        return LaurentPoly._from_terms((-e, c) for e, c in self._terms)

    def substitute_power(self, k: int) -> LaurentPoly:
        """
        Substitutes t -> t^k for a nonzero integer k.
        """
        if k == 0:
            raise CoefficientArithmeticError("t -> t^0 is not an automorphism of the ring")
        return LaurentPoly._from_terms((e * k, c) for e, c in self._terms)

    def derivative(self) -> LaurentPoly:
        return LaurentPoly._from_terms((e - 1, c * e) for e, c in self._terms if e != 0)

    def normalized(self) -> LaurentPoly:
        """
        Lowest exponent moved to 0 and the lowest coefficient made positive.
        """
        if self.is_zero:
            return self
        shifted = self.shift(-self.min_exponent)
        return -shifted if shifted._terms[0][1] < 0 else shifted

    def to_poly(self) -> tuple[sympy.Poly, int]:
        """
        Returns `(P, s)` with self == t^s * P(t) and P a sympy Poly with nonzero constant term.
        """
        if self.is_zero:
            return sympy.Poly(0, T, domain=sympy.QQ), 0
        s = self.min_exponent
        rep = {(e - s,): _to_sympy_rational(c) for e, c in self._terms}
        return sympy.Poly.from_dict(rep, T, domain=sympy.QQ), s

    def to_sympy(self):
        return sympy.Add(*[_to_sympy_rational(c) * T**e for e, c in self._terms])

    def exact_quotient(self, divisor: LaurentPoly) -> Optional[LaurentPoly]:
        """
        Returns self / divisor when the division is exact in Q[t, 1/t], else None.
        """
        if divisor.is_zero:
            raise CoefficientArithmeticError("division by the zero polynomial")
        if self.is_zero:
            return LaurentPoly.zero()
        p, ps = self.to_poly()
        d, ds = divisor.to_poly()
        quotient, remainder = p.div(d)
        if not remainder.is_zero:
            return None
        return LaurentPoly.from_poly(quotient, ps - ds)

    def _coerce(self, other) -> Optional[LaurentPoly]:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        merged = dict(self._terms)
        for e, c in other._terms:
            merged[e] = merged.get(e, Fraction(0)) + c
        return LaurentPoly._from_terms(merged.items())

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._from_terms((e, -c) for e, c in self._terms)

    def __sub__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                product[e1 + e2] = product.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly._from_terms(product.items())

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if not self.is_monomial:
                raise CoefficientArithmeticError("only monomials are units of Q[t, 1/t]")
            (e, c), = self._terms
            return LaurentPoly.monomial(e * n, Fraction(1) / c ** (-n))
        result = LaurentPoly.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(("LaurentPoly", self._terms))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_json()})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self._terms):
            magnitude = abs(c)
            if e == 0:
                body = _format_scalar(magnitude)
            else:
                power = "t" if e == 1 else f"t^{e}"
                if magnitude == 1:
                    body = power
                elif magnitude.denominator == 1:
                    body = f"{magnitude.numerator}{power}"
                else:
                    body = f"({_format_scalar(magnitude)}){power}"
            if i == 0:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(pieces)


def _format_scalar(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class RationalFn:
    """
    An element of Q(t) in canonical form: numerator and denominator coprime, denominator with
    lowest exponent 0 and lowest coefficient exactly 1. Two canonical forms are equal iff the
    functions are equal, so equality and hashing are componentwise.
    """

    __slots__ = ("_numerator", "_denominator")

    _numerator: LaurentPoly
    _denominator: LaurentPoly

    def __init__(self, numerator, denominator=None):
        num = _as_laurent(numerator)
        den = LaurentPoly.one() if denominator is None else _as_laurent(denominator)
        if den.is_zero:
            raise CoefficientArithmeticError("rational function with zero denominator")
        self._numerator, self._denominator = _canonical_pair(num, den)

    @classmethod
    def geometric(cls, sign: int, period: int) -> RationalFn:
        """
        Closed form of sum_{k>=1} (sign t^period)^k = sign t^p / (1 - sign t^p).
        """
        term = LaurentPoly.monomial(period, sign)
        return cls(term, LaurentPoly.one() - term)

    @classmethod
    def from_json(cls, source: Mapping[str, Mapping[str, str]]) -> RationalFn:
        return cls(
            LaurentPoly.from_json(source["numerator"]),
            LaurentPoly.from_json(source["denominator"]),
        )

    def to_json(self) -> dict[str, dict[str, str]]:
        return {"numerator": self._numerator.to_json(), "denominator": self._denominator.to_json()}

    @property
    def numerator(self) -> LaurentPoly:
        return self._numerator

    @property
    def denominator(self) -> LaurentPoly:
        return self._denominator

    @property
    def is_zero(self) -> bool:
        return self._numerator.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self._denominator == LaurentPoly.one()

    def taylor(self, order: int) -> list[Fraction]:
        """
        Coefficients of t^0 .. t^order of the power-series expansion at t = 0.
        """
        if self.is_zero:
            return [Fraction(0)] * (order + 1)
        if self._numerator.min_exponent < 0:
            raise CoefficientArithmeticError(f"{self} has a pole at t = 0")
        numer = self._numerator.coefficients
        denom = self._denominator.coefficients
        coeffs: list[Fraction] = []
        for k in range(order + 1):
            acc = numer.get(k, Fraction(0))
            for i in range(1, k + 1):
                d_i = denom.get(i)
                if d_i:
                    acc -= d_i * coeffs[k - i]
            coeffs.append(acc)
        return coeffs

    def derivative(self) -> RationalFn:
        n, d = self._numerator, self._denominator
        return RationalFn(n.derivative() * d - n * d.derivative(), d * d)

    def _coerce(self, other) -> Optional[RationalFn]:
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, LaurentPoly) or (
            isinstance(other, (int, Fraction)) and not isinstance(other, bool)
        ):
            return RationalFn(other)
        return None

    def __add__(self, other) -> RationalFn:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFn(
            self._numerator * other._denominator + other._numerator * self._denominator,
            self._denominator * other._denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFn:
        return RationalFn(-self._numerator, self._denominator)

    def __sub__(self, other) -> RationalFn:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RationalFn:
        return (-self) + other

    def __mul__(self, other) -> RationalFn:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFn(
            self._numerator * other._numerator, self._denominator * other._denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFn:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise CoefficientArithmeticError("division by the zero rational function")
        return RationalFn(
            self._numerator * other._denominator, self._denominator * other._numerator
        )

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._numerator == other._numerator and self._denominator == other._denominator

    def __hash__(self) -> int:
        return hash(("RationalFn", self._numerator, self._denominator))

    def __repr__(self) -> str:
        return f"RationalFn({self._numerator!r}, {self._denominator!r})"

    def __str__(self) -> str:
        if self.is_polynomial:
            return str(self._numerator)
        return f"{_wrap(self._numerator)}/{_wrap(self._denominator)}"


def _wrap(poly: LaurentPoly) -> str:
    text = str(poly)
    return f"({text})" if len(poly.terms()) > 1 else text


def _as_laurent(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return LaurentPoly.constant(value)
    raise TypeError(f"cannot use {type(value).__name__} as a Laurent polynomial")


def _canonical_pair(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero:
        return LaurentPoly.zero(), LaurentPoly.one()
    n_poly, n_shift = num.to_poly()
    d_poly, d_shift = den.to_poly()
    common = n_poly.gcd(d_poly)
    n_poly = n_poly.exquo(common)
    d_poly = d_poly.exquo(common)
    # the constant term survives the gcd division because t does not divide d_poly
    lowest = d_poly.nth(0)
    n_poly = n_poly.quo_ground(lowest)
    d_poly = d_poly.quo_ground(lowest)
    return LaurentPoly.from_poly(n_poly, n_shift - d_shift), LaurentPoly.from_poly(d_poly)
