"""Differential-field layer.

* :func:`derivative`: the derivation on scalars, Q(x) and everything built on it.
* :class:`ParametricRatFunc`: elements of K(y) where y is an adjoined integral
  (``y' = f``) or exponential of integral (``y' = f*y``), differentiated by the
  chain rule ``R' = dR/dx + dR/dy * w``.
* :class:`TowerDescriptor`: a chain of algebraic / integral / exponential
  steps, validated symbol by symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from genquad.errors import ValidationError
from genquad.numberfield import NumberFieldElem
from genquad.poly import Poly, coerce, poly_gcd
from genquad.ratfunc import RatFunc, as_ratfunc


def derivative(v):
    """Derivative of any supported differential-field element."""
    if isinstance(v, (int, Fraction)):
        return Fraction(0)
    return v.derivative()


@dataclass(frozen=True)
class BaseDiffField:
    """Tag for the two concrete base fields: constants or Q(x) with d/dx."""

    kind: str  # "constants" or "rational_functions"

    def derive(self, v):
        if self.kind == "constants":
            return Fraction(0)
        return derivative(v)

    def is_constant(self, v) -> bool:
        if isinstance(v, RatFunc):
            return v.is_constant()
        return True


CONSTANTS = BaseDiffField("constants")
RATIONAL_FUNCTIONS = BaseDiffField("rational_functions")


@dataclass(frozen=True)
class Integral:
    """Regime ``y' = f``."""

    f: object

    def __post_init__(self):
        object.__setattr__(self, "f", as_ratfunc(self.f))

    def w(self) -> Poly:
        return Poly([self.f])


@dataclass(frozen=True)
class ExpIntegral:
    """Regime ``y' = f*y``; ``f`` must be nonzero."""

    f: object

    def __post_init__(self):
        f = as_ratfunc(self.f)
        if not f:
            raise ValidationError("exponential of integral needs f != 0")
        object.__setattr__(self, "f", f)

    def w(self) -> Poly:
        return Poly([RatFunc.const(0), self.f])


DerivationRegime = Integral | ExpIntegral


def _lift_poly(p) -> Poly:
    if not isinstance(p, Poly):
        p = Poly([p])
    return Poly([as_ratfunc(c) for c in p.coeffs])


def _lcm_den(p: Poly) -> Poly:
    out = Poly([1])
    for c in p.coeffs:
        out = out * (c.den // poly_gcd(out, c.den))
    return out


def _reduce_over_Q(num: Poly, den: Poly):
    """Cancel ``num/den`` in Q(x)[y] through a bivariate gcd in Q[x, y].

    Euclid directly in Q(x)[y] lets the rational-function coefficients of the
    remainders grow very quickly, so both sides are cleared of denominators
    and handed to sympy's multivariate gcd instead.
    """
    from sympy import QQ
    from sympy.polys.rings import ring

    R, _, _ = ring("x,y", QQ)
    ln, ld = _lcm_den(num), _lcm_den(den)

    def to_ring(p: Poly, scale: Poly):
        terms = {}
        for k, c in enumerate(p.coeffs):
            q = (c * RatFunc(scale)).num
            for i, v in enumerate(q.coeffs):
                if v != 0:
                    terms[(i, k)] = QQ(v.numerator, v.denominator)
        return R.from_dict(terms) if terms else R.zero

    # num/den = (num*ln * ld) / (den*ld * ln)
    a = to_ring(num, ln) * to_ring(Poly([RatFunc(ld)]), Poly([1]))
    b = to_ring(den, ld) * to_ring(Poly([RatFunc(ln)]), Poly([1]))
    _, a, b = a.cofactors(b)

    def back(p) -> Poly:
        deg_y = max((k for _, k in p.keys()), default=0)
        cols = [[Fraction(0)] for _ in range(deg_y + 1)]
        for (i, k), v in p.items():
            col = cols[k]
            col.extend([Fraction(0)] * (i + 1 - len(col)))
            col[i] = Fraction(int(v.numerator), int(v.denominator))
        return Poly([RatFunc(Poly(c)) for c in cols])

    return back(a), back(b)


def _total_derivative(p: Poly, w: Poly) -> Poly:
    """Derivation of a polynomial in y: coefficient derivatives plus ``p_y * w``."""
    coeff_part = Poly([c.derivative() for c in p.coeffs])
    return coeff_part + p.derivative() * w


class ParametricRatFunc:
    """Element ``num(y)/den(y)`` of K(y) together with its derivation regime."""

    __slots__ = ("num", "den", "regime")
    _compound = True

    def __init__(self, num, den=None, regime: DerivationRegime = None, _reduced=False):
        if regime is None:
            raise ValidationError("a derivation regime is required")
        num = _lift_poly(num)
        den = _lift_poly(RatFunc.const(1) if den is None else den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num:
                den = Poly([RatFunc.const(1)])
            elif den.degree > 0 and all(c.is_over_Q() for c in num.coeffs + den.coeffs):
                num, den = _reduce_over_Q(
                    Poly([c.to_Q() for c in num.coeffs]), Poly([c.to_Q() for c in den.coeffs])
                )
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lc = den.lc
            if lc != 1:
                num, den = num / lc, den / lc
        self.num = num
        self.den = den
        self.regime = regime

    @classmethod
    def y(cls, regime) -> "ParametricRatFunc":
        return cls(Poly([RatFunc.const(0), RatFunc.const(1)]), regime=regime, _reduced=True)

    @classmethod
    def const(cls, c, regime) -> "ParametricRatFunc":
        return cls(Poly([as_ratfunc(c)]), regime=regime, _reduced=True)

    def _wrap(self, other):
        if isinstance(other, ParametricRatFunc):
            if other.regime != self.regime:
                raise ValidationError("mixing elements with different derivation regimes")
            return other
        if isinstance(other, (int, Fraction, NumberFieldElem, RatFunc)):
            return ParametricRatFunc.const(coerce(other), self.regime)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return ParametricRatFunc(self.num + o.num, self.den, self.regime)
        return ParametricRatFunc(self.num * o.den + o.num * self.den, self.den * o.den, self.regime)

    __radd__ = __add__

    def __neg__(self):
        return ParametricRatFunc(-self.num, self.den, self.regime, _reduced=True)

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
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return ParametricRatFunc(self.num * o.num, self.den * o.den, self.regime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero")
        return ParametricRatFunc(self.num * o.den, self.den * o.num, self.regime)

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return ParametricRatFunc.const(1, self.regime) / self ** (-n)
        return ParametricRatFunc(self.num**n, self.den**n, self.regime, _reduced=True)

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.num

    def derivative(self) -> "ParametricRatFunc":
        """``dR/dx + dR/dy * w`` with ``w = f`` or ``w = f*y``."""
        w = self.regime.w()
        n, d = self.num, self.den
        dn = _total_derivative(n, w)
        if d.degree == 0 and d.lc == 1:
            return ParametricRatFunc(dn, d, self.regime)
        dd = _total_derivative(d, w)
        return ParametricRatFunc(dn * d - n * dd, d * d, self.regime)

    def to_str(self, var: str = "y") -> str:
        from genquad.render import format_terms, power_str

        def fmt(p):
            return format_terms(
                (p.coeffs[k], "" if k == 0 else power_str(var, k))
                for k in range(p.degree, -1, -1)
                if p.coeffs[k] != 0
            )

        from genquad.render import single_term

        ns = fmt(self.num)
        if self.den.degree == 0:
            return ns
        ds = fmt(self.den)
        if not single_term(ns):
            ns = f"({ns})"
        if not single_term(ds) or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"ParametricRatFunc({self.to_str()}, {self.regime})"


def derive(e: ParametricRatFunc) -> ParametricRatFunc:
    return e.derivative()


def _compose(e: ParametricRatFunc, inner: Poly) -> ParametricRatFunc:
    return ParametricRatFunc(e.num.compose(inner), e.den.compose(inner), e.regime)


def substitute_shift(e: ParametricRatFunc, rho) -> ParametricRatFunc:
    """Apply ``y -> y + rho`` (integral regime only)."""
    if not isinstance(e.regime, Integral):
        raise ValidationError("y -> y + rho is an automorphism only for an adjoined integral")
    rho = as_ratfunc(rho)
    if not rho.is_constant():
        raise ValidationError("shift must be a constant")
    return _compose(e, Poly([rho, RatFunc.const(1)]))


def substitute_scale(e: ParametricRatFunc, mu) -> ParametricRatFunc:
    """Apply ``y -> mu * y`` (exponential-of-integral regime only, ``mu != 0``)."""
    if not isinstance(e.regime, ExpIntegral):
        raise ValidationError(
            "y -> mu*y is an automorphism only for an adjoined exponential of integral"
        )
    mu = as_ratfunc(mu)
    if not mu.is_constant():
        raise ValidationError("scale must be a constant")
    if not mu:
        raise ValidationError("scale factor mu must be nonzero")
    return _compose(e, Poly([RatFunc.const(0), mu]))


# -- extension towers ---------------------------------------------------

STEP_KINDS = ("algebraic", "integral", "exp_integral")


@dataclass(frozen=True)
class TowerStep:
    kind: str
    payload: str
    name: str


@dataclass(frozen=True)
class TowerDescriptor:
    steps: tuple = ()

    def to_json(self) -> dict:
        out = []
        for s in self.steps:
            key = "minpoly" if s.kind == "algebraic" else "f"
            out.append({"kind": s.kind, "name": s.name, key: s.payload})
        return {"steps": out}

    @classmethod
    def from_json(cls, data) -> "TowerDescriptor":
        if not isinstance(data, dict) or not isinstance(data.get("steps"), list):
            raise ValidationError("tower JSON must be an object with a 'steps' list")
        steps = []
        for i, raw in enumerate(data["steps"], start=1):
            if not isinstance(raw, dict):
                raise ValidationError(f"step {i}: expected an object")
            kind = raw.get("kind")
            if kind not in STEP_KINDS:
                raise ValidationError(f"step {i}: unknown kind {kind!r}")
            key = "minpoly" if kind == "algebraic" else "f"
            if not isinstance(raw.get(key), str):
                raise ValidationError(f"step {i}: missing string field {key!r}")
            steps.append(TowerStep(kind, raw[key], raw.get("name", f"t{i}")))
        return cls(tuple(steps))


class _Level:
    """Arithmetic in Q(x)(t1)...(tk) built from nested :class:`RatFunc`."""

    def __init__(self, depth: int):
        self.depth = depth

    def lift(self, v, from_depth: int):
        for _ in range(from_depth, self.depth):
            v = RatFunc(Poly([v]), _reduced=True)
        return v


def _evaluate_in_tower(text: str, symbols: list[str], position_label: str):
    from genquad.expr import evaluate, parse_expression

    level = _Level(len(symbols) + 1)

    def const(c):
        return level.lift(RatFunc.const(c), 1)

    def leaf(name, order, pos):
        if order:
            raise ValidationError(f"{position_label}: derivatives are not allowed in tower payloads")
        if name == "x":
            return level.lift(RatFunc.x(), 1)
        if name in symbols:
            idx = symbols.index(name) + 1
            return level.lift(_generator(idx), idx + 1)
        raise ValidationError(f"{position_label}: unknown symbol {name!r}")

    try:
        ast = parse_expression(text)
        return evaluate(ast, leaf, const)
    except ZeroDivisionError as exc:
        raise ValidationError(f"{position_label}: division by zero") from exc
    except ValidationError:
        raise
    except Exception as exc:  # parse errors and the like
        raise ValidationError(f"{position_label}: {exc}") from exc


def _generator(level: int):
    """The generator t_level as an element of depth ``level``."""
    one = RatFunc.const(1)
    for _ in range(1, level):
        one = RatFunc(Poly([one]), _reduced=True)
    zero = one * 0 if level > 1 else RatFunc.const(0)
    return RatFunc(Poly([zero, one]), _reduced=True)


def _render_level(v, symbols: list[str]) -> str:
    from genquad.render import power_str, single_term

    if not symbols:
        return v.to_str("x")
    name, inner = symbols[-1], symbols[:-1]

    def fmt(p):
        out = ""
        for k in range(p.degree, -1, -1):
            c = p.coeffs[k]
            if c == 0:
                continue
            cs = _render_level(c, inner)
            mono = power_str(name, k) if k else ""
            if not mono:
                piece = cs
            elif cs in ("1", "-1"):
                piece = mono if cs == "1" else f"-{mono}"
            elif single_term(cs):
                piece = f"{cs}*{mono}"
            else:
                piece = f"({cs})*{mono}"
            if not out:
                out = piece
            elif piece.startswith("-"):
                out += f" - {piece[1:]}"
            else:
                out += f" + {piece}"
        return out or "0"

    ns = fmt(v.num)
    if v.den.degree == 0:
        return ns
    ds = fmt(v.den)
    return f"({ns})/({ds})"


def validate_tower(t: TowerDescriptor) -> TowerDescriptor:
    """Check each step's payload lives in the field built by the earlier steps.

    Algebraic steps must give a polynomial of positive degree in the step's
    own symbol; exponential-of-integral steps need ``f != 0``.  Algebraic
    symbols are treated as independent indeterminates when later payloads
    are checked, so relations they satisfy are not used.
    """
    if isinstance(t, dict):
        t = TowerDescriptor.from_json(t)
    symbols: list[str] = []
    canonical = []
    for i, step in enumerate(t.steps, start=1):
        label = f"step {i} ({step.kind})"
        if step.kind not in STEP_KINDS:
            raise ValidationError(f"{label}: unknown kind")
        if step.name == "x" or step.name in symbols or not step.name.isidentifier():
            raise ValidationError(f"{label}: bad or duplicate symbol name {step.name!r}")
        if step.kind == "algebraic":
            v = _evaluate_in_tower(step.payload, symbols + [step.name], label)
            if v.den.degree != 0:
                raise ValidationError(f"{label}: minimal polynomial must be polynomial in {step.name}")
            if v.num.degree < 1:
                raise ValidationError(f"{label}: minimal polynomial has degree < 1 in {step.name}")
            canonical.append(TowerStep(step.kind, _render_level(v, symbols + [step.name]), step.name))
        else:
            v = _evaluate_in_tower(step.payload, symbols, label)
            if step.kind == "exp_integral" and not v:
                raise ValidationError(f"{label}: f must be nonzero for an exponential of integral")
            canonical.append(TowerStep(step.kind, _render_level(v, symbols), step.name))
        symbols.append(step.name)
    return TowerDescriptor(tuple(canonical))
