"""The D_n tower, generalized Riccati equations and reduction of order.

``D(0) = 1`` and ``D(k+1) = d/dx D(k) + u*D(k)``; a solution ``y`` with
``y' = u*y`` has ``y^(k) = D(k)(u) * y``.  Substituting that into a linear
equation yields the generalized Riccati equation for ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from genquad.diff_poly import DiffPoly, evaluate_at, mono_degree, substitute, total_derivative
from genquad.errors import PreconditionError, ValidationError
from genquad.numberfield import NumberFieldElem
from genquad.ratfunc import RatFunc, as_ratfunc
from genquad.render import format_terms


@lru_cache(maxsize=None)
def D(n: int) -> DiffPoly:
    if n < 0:
        raise ValidationError("D(n) needs n >= 0")
    if n == 0:
        return DiffPoly.const(1)
    prev = D(n - 1)
    return total_derivative(prev) + DiffPoly.var(0) * prev


class _Named:
    """Adapter so a symbolic coefficient prints in terms of ``u1``."""

    def __init__(self, poly: DiffPoly, var: str):
        self.poly, self.var = poly, var

    def to_str(self):
        return self.poly.to_str(self.var)

    def __neg__(self):
        return _Named(-self.poly, self.var)


def _is_field_coeff(c) -> bool:
    return isinstance(c, RatFunc)


@dataclass(frozen=True, eq=False)
class LinearODE:
    """Monic ``y^(n) + a_1 y^(n-1) + ... + a_n y = 0``.

    ``coeffs`` holds ``a_1..a_n``.  They are elements of Q(x) (possibly with
    algebraic constants), or differential polynomials in ``u1`` for the
    symbolic output of :func:`reduce_order`.
    """

    coeffs: tuple
    var: str = "y"

    def __post_init__(self):
        cs = tuple(c if isinstance(c, DiffPoly) else as_ratfunc(c) for c in self.coeffs)
        if not cs:
            raise ValidationError("a linear equation needs order n >= 1")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_leading(cls, coeffs, var: str = "y") -> "LinearODE":
        """Build from ``[c_0, c_1, ..., c_n]`` (``c_0`` multiplies ``y^(n)``), dividing by ``c_0``."""
        lead = as_ratfunc(coeffs[0])
        if not lead:
            raise ValidationError("leading coefficient is the zero function")
        return cls(tuple(as_ratfunc(c) / lead for c in coeffs[1:]), var)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def a(self, k: int):
        """``a_k`` with the monic convention ``a_0 = 1``."""
        return RatFunc.const(1) if k == 0 else self.coeffs[k - 1]

    def is_rational(self) -> bool:
        return all(_is_field_coeff(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LinearODE):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def to_str(self, var: str | None = None) -> str:
        from genquad.diff_poly import derivative_name

        var = var or self.var
        n = self.order
        terms = []
        for k in range(n + 1):
            c = self.a(k)
            if not c:
                continue
            if isinstance(c, DiffPoly):
                c = _Named(c, "u1")
            terms.append((c, derivative_name(var, n - k)))
        return format_terms(terms) + " = 0"

    def __str__(self):
        return self.to_str()


@dataclass(frozen=True)
class OrderZeroReduction:
    """Reduction of an order-1 equation: every solution is ``c * y1``."""

    def to_str(self) -> str:
        return "order 0: all solutions are c*y1"


@dataclass(frozen=True, eq=False)
class HomogeneousEq:
    """``P(y, y', ..., y^(n)) = 0`` with ``P`` homogeneous of degree ``m``."""

    P: DiffPoly

    def __post_init__(self):
        if not self.P:
            raise ValidationError("the zero polynomial is not an equation")
        if not self.P.is_homogeneous():
            degs = sorted({mono_degree(m) for m in self.P.terms})
            raise ValidationError(f"P is not homogeneous (monomial degrees {degs})")

    def __eq__(self, other):
        if not isinstance(other, HomogeneousEq):
            return NotImplemented
        return self.P == other.P

    __hash__ = None

    @property
    def degree(self) -> int:
        return self.P.degree()

    @property
    def order(self) -> int:
        return self.P.order

    def to_str(self) -> str:
        return self.P.to_str("y") + " = 0"


@dataclass(frozen=True, eq=False)
class RiccatiEq:
    """``poly(u, u', ...) = 0``."""

    poly: DiffPoly

    @property
    def order(self) -> int:
        return self.poly.order

    def __eq__(self, other):
        if isinstance(other, RiccatiEq):
            return self.poly == other.poly
        return NotImplemented

    __hash__ = None

    def to_str(self) -> str:
        return self.poly.to_str("u") + " = 0"

    def __str__(self):
        return self.to_str()


def riccati_of_linear(L: LinearODE) -> RiccatiEq:
    if not L.is_rational():
        raise ValidationError("coefficients must be explicit rational functions of x")
    n = L.order
    total = DiffPoly()
    for k in range(n + 1):
        total = total + D(n - k) * L.a(k)
    return RiccatiEq(total)


def riccati_of_homogeneous(H: HomogeneousEq) -> RiccatiEq:
    if not isinstance(H, HomogeneousEq):
        H = HomogeneousEq(H)
    return RiccatiEq(evaluate_at(H.P, D, DiffPoly.const(1)))


def riccati_residual(R: RiccatiEq, u):
    return substitute(R.poly, u)


def verify_log_derivative_correspondence(L: LinearODE, u) -> bool:
    """True when ``u`` solves the Riccati equation of ``L``."""
    return not riccati_residual(riccati_of_linear(L), u)


def _as_value(u):
    if isinstance(u, (int, Fraction, NumberFieldElem)):
        return as_ratfunc(u)
    return u


def reduce_order(L: LinearODE, u1=None):
    """Equation of order ``n-1`` for ``w = (y/y1)'`` where ``y1' = u1*y1``.

    Writing ``y = y1*v`` gives ``y^(k) = y1 * sum_j C(k,j) D(k-j)(u1) v^(j)``;
    collecting ``v^(j)`` yields coefficients ``c_j``, with ``c_0`` equal to
    the Riccati residual of ``u1`` (checked to vanish).  With ``u1=None``
    the coefficients are returned as differential polynomials in ``u1``.
    """
    if not L.is_rational():
        raise ValidationError("coefficients must be explicit rational functions of x")
    n = L.order
    if n == 1:
        if u1 is not None and not verify_log_derivative_correspondence(L, _as_value(u1)):
            raise PreconditionError(
                f"u1 does not solve the Riccati equation (residual {riccati_residual(riccati_of_linear(L), _as_value(u1)).to_str()})"
            )
        return OrderZeroReduction()
    if u1 is None:
        d_vals = [D(k) for k in range(n + 1)]
        zero = DiffPoly()
    else:
        u1 = _as_value(u1)
        d_vals = [substitute(D(k), u1) for k in range(n + 1)]
        zero = RatFunc.const(0)

    def c(j):
        acc = zero
        for k in range(j, n + 1):
            acc = acc + d_vals[k - j] * L.a(n - k) * comb(k, j)
        return acc

    if u1 is not None:
        residual = c(0)
        if residual:
            raise PreconditionError(
                f"u1 does not solve the Riccati equation (residual {residual.to_str()})"
            )
    return LinearODE(tuple(c(n - i) for i in range(1, n)), var="w")
