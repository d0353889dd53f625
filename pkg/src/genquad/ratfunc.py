"""Rational functions in one variable: the base differential field Q(x).

Coefficients may be rationals or elements of one number field, which gives
Q(a)(x) for free.  The derivation is ordinary d/dx.
"""

from __future__ import annotations

from fractions import Fraction

from genquad.numberfield import NumberFieldElem
from genquad.poly import Poly, coerce, poly_gcd
from genquad.render import single_term

_SCALARS = (int, Fraction, NumberFieldElem)


class RatFunc:
    """Reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, Poly):
            num = Poly([num])
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly([den])
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = Poly([1])
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
                lc = den.lc
                if lc != 1:
                    num, den = num / lc, den / lc
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------
    @classmethod
    def x(cls) -> "RatFunc":
        return cls(Poly([0, 1]), _reduced=True)

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly([c]), _reduced=True)

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_term()

    def as_rational(self):
        """``Fraction`` value when this is a rational constant, else ``None``."""
        if not self.is_constant():
            return None
        c = self.num.constant_term()
        if isinstance(c, NumberFieldElem):
            return c.as_rational()
        return c

    def coefficient_field(self):
        for c in self.num.coeffs + self.den.coeffs:
            if isinstance(c, NumberFieldElem) and not c.is_rational():
                return c.field
        return None

    def is_over_Q(self) -> bool:
        return all(
            not isinstance(c, NumberFieldElem) or c.is_rational()
            for c in self.num.coeffs + self.den.coeffs
        )

    def to_Q(self) -> "RatFunc":
        """Drop number-field wrappers on coefficients that are rational."""

        def down(c):
            if isinstance(c, NumberFieldElem):
                r = c.as_rational()
                if r is None:
                    raise ValueError("coefficient is not rational")
                return r
            return c

        return RatFunc(self.num.map_coeffs(down), self.den.map_coeffs(down), _reduced=True)

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _wrap(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, _SCALARS):
            return RatFunc(Poly([coerce(other)]), _reduced=True)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            c = coerce(other)
            if c == 0:
                return RatFunc(Poly(), _reduced=True)
            return RatFunc(self.num * c, self.den, _reduced=True)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_constant():
            return hash(self.num.constant_term())
        return hash((self.num, self.den))

    # -- differential structure ------------------------------------------
    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        if d.degree == 0:
            return RatFunc(n.derivative(), d, _reduced=True)
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, value):
        return self.num(value) / self.den(value)

    def compose(self, inner: Poly) -> "RatFunc":
        return RatFunc(self.num.compose(inner), self.den.compose(inner))

    def map_coeffs(self, f) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(f), self.den.map_coeffs(f))

    def to_str(self, var: str = "x") -> str:
        ns = self.num.to_str(var)
        if self.den.degree == 0:
            return ns
        ds = self.den.to_str(var)
        c = self.num.lc if self.num.degree == 0 else None
        if isinstance(c, Fraction) and c.denominator != 1:
            ns = str(c.numerator)
            ds = f"{c.denominator}*({ds})" if " " in ds else f"{c.denominator}*{ds}"
        if not single_term(ns):
            ns = f"({ns})"
        if any(ch in ds for ch in " +-*/"):
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()})"


def as_ratfunc(v) -> RatFunc:
    if isinstance(v, RatFunc):
        return v
    return RatFunc(Poly([coerce(v)]), _reduced=True)
