"""Turn equation text into one of the library's equation objects.

Which object is built depends on the variables that occur:

``z`` (with ``y``)
    an algebraic curve ``P(y, z) = 0`` with rational coefficients;
``u``
    ``u^n = Q(u, u', ...)`` with ``deg Q < n``;
``y``
    a linear equation when every term has degree 1 in ``y, y', ...``
    (normalized to be monic, the divisor kept as ``scale``), otherwise a
    homogeneous equation.

Coefficients must be explicit rational functions of ``x``; symbolic
coefficient names such as ``a1`` are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from genquad.analyzer import EquationForm2
from genquad.diff_poly import DiffPoly, mono_degree
from genquad.errors import ParseError, ValidationError
from genquad.expr import evaluate, names_in, parse_equation, parse_expression
from genquad.newton import AlgebraicCurve
from genquad.ratfunc import RatFunc
from genquad.riccati import HomogeneousEq, LinearODE

KINDS = ("linear", "homogeneous", "form2", "curve")


class ClassificationError(ValidationError):
    """The text parsed, but it is not an equation of the requested kind."""


@dataclass(frozen=True, eq=False)
class EquationSource:
    raw: str
    form: object
    scale: RatFunc | None = None

    @property
    def kind(self) -> str:
        return {
            LinearODE: "linear",
            HomogeneousEq: "homogeneous",
            EquationForm2: "form2",
            AlgebraicCurve: "curve",
        }[type(self.form)]


class _Biv:
    """Polynomial in ``y, z`` over Q, just enough for the evaluator."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = {k: v for k, v in t.items() if v != 0}

    @staticmethod
    def w(o):
        return o if isinstance(o, _Biv) else _Biv({(0, 0): Fraction(o)})

    def __add__(self, o):
        o = _Biv.w(o)
        t = dict(self.t)
        for k, v in o.t.items():
            t[k] = t.get(k, 0) + v
        return _Biv(t)

    __radd__ = __add__

    def __neg__(self):
        return _Biv({k: -v for k, v in self.t.items()})

    def __sub__(self, o):
        return self + (-_Biv.w(o))

    def __rsub__(self, o):
        return _Biv.w(o) - self

    def __mul__(self, o):
        o = _Biv.w(o)
        t: dict = {}
        for (a, b), v in self.t.items():
            for (c, d), u in o.t.items():
                t[(a + c, b + d)] = t.get((a + c, b + d), 0) + v * u
        return _Biv(t)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _Biv.w(o)
        if set(o.t) != {(0, 0)}:
            raise ValueError("division by a non-constant polynomial")
        return self * (1 / o.t[(0, 0)])

    def __rtruediv__(self, o):
        return _Biv.w(o) / self

    def __pow__(self, n):
        out = _Biv({(0, 0): Fraction(1)})
        for _ in range(n):
            out = out * self
        return out


def _reject_unknown(names: set, allowed: set):
    extra = sorted(names - allowed)
    if extra:
        hint = (
            "a curve uses only y and z with rational coefficients"
            if "z" in allowed
            else "coefficients must be explicit rational functions of x"
        )
        raise ClassificationError(f"unknown symbol {extra[0]!r}: {hint}")


def _eval_differential(lhs, rhs, var: str) -> DiffPoly:
    x = DiffPoly.const(RatFunc.x())

    def leaf(name, order, pos):
        if name == var:
            return DiffPoly.var(order)
        if order:
            raise ParseError(f"{name!r} cannot be differentiated here", pos)
        return x

    try:
        return evaluate(lhs, leaf, DiffPoly.const) - evaluate(rhs, leaf, DiffPoly.const)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ClassificationError(f"{exc}; {var} may only appear polynomially") from None
    except ZeroDivisionError:
        raise ClassificationError("division by zero") from None


def _linear(P: DiffPoly, text: str) -> EquationSource:
    bad = [m for m in P.terms if mono_degree(m) != 1]
    if bad:
        d = mono_degree(bad[0])
        what = "an inhomogeneous term" if d == 0 else f"a term of degree {d} in y"
        raise ClassificationError(f"not a linear homogeneous equation: {what}")
    n = P.order
    lead = P.coefficient(((n, 1),))
    coeffs = [P.coefficient(((n - k, 1),)) for k in range(n + 1)]
    if n < 1:
        raise ClassificationError("a linear equation needs a derivative of order >= 1")
    return EquationSource(text, LinearODE.from_leading(coeffs), lead)


def _form2(P: DiffPoly, text: str) -> EquationSource:
    if not P:
        raise ClassificationError("the equation is 0 = 0")
    n = P.degree()
    top = P.homogeneous_part(n)
    mono = ((0, n),)
    if n < 1 or set(top.terms) != {mono}:
        raise ClassificationError(f"expected u^n = Q with deg Q < n; the degree-{n} part is not a multiple of u^{n}")
    c = top.coefficient(mono)
    Q = -(P - top) / c
    return EquationSource(text, EquationForm2(n, Q), c)


def _curve(lhs, rhs, text: str) -> EquationSource:
    def leaf(name, order, pos):
        if order:
            raise ParseError(f"{name!r} cannot be differentiated in a curve", pos)
        return _Biv({(1, 0): Fraction(1)} if name == "y" else {(0, 1): Fraction(1)})

    try:
        P = evaluate(lhs, leaf, lambda c: _Biv({(0, 0): c})) - evaluate(rhs, leaf, lambda c: _Biv({(0, 0): c}))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ClassificationError(f"{exc}; a curve must be polynomial in y and z") from None
    except ZeroDivisionError:
        raise ClassificationError("division by zero") from None
    return EquationSource(text, AlgebraicCurve(P.t))


def parse(text: str, kind: str | None = None) -> EquationSource:
    """Parse and classify ``text``; ``kind`` (one of :data:`KINDS`) forces a reading."""
    if kind is not None and kind not in KINDS:
        raise ValidationError(f"unknown equation kind {kind!r}")
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty input", 0)
    try:
        text.encode("ascii")
    except UnicodeEncodeError:
        pos = next(i for i, ch in enumerate(text) if ord(ch) > 127)
        raise ParseError(f"non-ASCII character {text[pos]!r}", pos) from None
    lhs, rhs = parse_equation(text, derivative_vars={"y", "u"})
    names = names_in(lhs) | names_in(rhs)
    if kind is None:
        if "z" in names:
            kind = "curve"
        elif "u" in names:
            kind = "form2"
        elif "y" in names:
            kind = "linear"
            _reject_unknown(names, {"x", "y"})
            P = _eval_differential(lhs, rhs, "y")
            if any(mono_degree(m) != 1 for m in P.terms) and P and P.is_homogeneous():
                kind = "homogeneous"
        else:
            _reject_unknown(names, {"x"})
            raise ClassificationError("no unknown: use y, u or z")
    if kind == "curve":
        _reject_unknown(names, {"y", "z"})
        return _curve(lhs, rhs, text)
    var = "u" if kind == "form2" else "y"
    _reject_unknown(names, {"x", var})
    P = _eval_differential(lhs, rhs, var)
    if kind == "linear":
        return _linear(P, text)
    if kind == "homogeneous":
        if not P or not P.is_homogeneous():
            raise ClassificationError("not a homogeneous equation in y, y', ...")
        return EquationSource(text, HomogeneousEq(P))
    return _form2(P, text)


def parse_function(text: str) -> RatFunc:
    """A rational function of ``x`` such as ``1/x`` or ``(x^2 + 1)/(x - 2)``."""
    node = parse_expression(text)
    _reject_unknown(names_in(node), {"x"})

    def leaf(name, order, pos):
        if order:
            raise ParseError("derivatives are not allowed here", pos)
        return RatFunc.x()

    try:
        return evaluate(node, leaf, RatFunc.const)
    except ZeroDivisionError:
        raise ClassificationError("division by zero") from None


def render(form) -> str:
    """Canonical text; ``parse(render(f)).form == f`` for forms over Q."""
    return form.to_str()
