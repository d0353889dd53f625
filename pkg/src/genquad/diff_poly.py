"""Differential polynomials in u, u', ..., u^(N) with coefficients in Q(x).

A monomial is a sorted tuple of ``(order, exponent)`` pairs, so
``u * u'^2`` is ``((0, 1), (1, 2))``.  The empty tuple is the unit.
"""

from __future__ import annotations

from fractions import Fraction

from genquad.errors import PreconditionError
from genquad.numberfield import NumberFieldElem
from genquad.ratfunc import RatFunc, as_ratfunc
from genquad.render import format_terms

Monomial = tuple  # tuple[tuple[int, int], ...]

ONE: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for i, p in b:
        exps[i] = exps.get(i, 0) + p
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(p for _, p in m)


def xi_weight(m: Monomial) -> int:
    """Sum of ``order * exponent`` over the factors of ``m``."""
    return sum(i * p for i, p in m)


def mono_order(m: Monomial) -> int:
    return max((i for i, _ in m), default=-1)


def derivative_name(var: str, order: int) -> str:
    if order <= 3:
        return var + "'" * order
    return f"{var}^({order})"


def mono_str(m: Monomial, var: str = "u") -> str:
    parts = []
    for i, p in m:
        name = derivative_name(var, i)
        if p == 1:
            parts.append(name)
        elif i <= 3:
            parts.append(f"{name}^{p}")
        else:
            parts.append(f"({name})^{p}")
    return "*".join(parts)


def _sort_key(m: Monomial):
    return (-xi_weight(m), -mono_degree(m), tuple((-i, -p) for i, p in reversed(m)))


class DiffPoly:
    """Immutable differential polynomial; ``terms`` maps monomials to RatFunc."""

    __slots__ = ("terms",)
    _compound = True

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            c = as_ratfunc(c)
            if c:
                clean[m] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def var(cls, order: int = 0, power: int = 1) -> "DiffPoly":
        if power == 0:
            return cls.const(1)
        return cls({((order, power),): RatFunc.const(1)})

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({ONE: c})

    # -- structure --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        """Highest derivative order present; ``-1`` when u does not occur."""
        return max((mono_order(m) for m in self.terms), default=-1)

    def degree(self) -> int:
        if not self.terms:
            raise PreconditionError("degree of the zero differential polynomial is undefined")
        return max(mono_degree(m) for m in self.terms)

    def homogeneous_part(self, d: int) -> "DiffPoly":
        return DiffPoly({m: c for m, c in self.terms.items() if mono_degree(m) == d})

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) for m in self.terms}) <= 1

    def constant_term(self) -> RatFunc:
        return self.terms.get(ONE, RatFunc.const(0))

    def coefficient(self, m: Monomial) -> RatFunc:
        return self.terms.get(m, RatFunc.const(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _sort_key(mc[0]))

    def map_coeffs(self, f) -> "DiffPoly":
        return DiffPoly({m: f(c) for m, c in self.terms.items()})

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _wrap(other):
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction, NumberFieldElem, RatFunc)):
            return DiffPoly.const(other)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({m: -c for m, c in self.terms.items()})

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
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in o.terms.items():
                m = mono_mul(ma, mb)
                c = ca * cb
                out[m] = out[m] + c if m in out else c
        return DiffPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DiffPoly):
            if set(other.terms) - {ONE}:
                raise ValueError("division by a non-constant differential polynomial")
            other = other.constant_term()
        c = as_ratfunc(other)
        inv = c.inverse()
        return DiffPoly({m: v * inv for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a differential polynomial")
        out = DiffPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- rendering --------------------------------------------------------
    def to_str(self, var: str = "u") -> str:
        return format_terms((c, mono_str(m, var)) for m, c in self.sorted_terms())

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"DiffPoly({self.to_str()})"


def total_derivative(T: DiffPoly) -> DiffPoly:
    """d/dx of ``T``: coefficients by d/dx, each ``u^(i)`` to ``u^(i+1)``."""
    pieces: dict = {}
    for m, c in T.terms.items():
        dc = c.derivative()
        if dc:
            pieces[m] = pieces[m] + dc if m in pieces else dc
        exps = dict(m)
        for i, p in m:
            rest = dict(exps)
            if p == 1:
                del rest[i]
            else:
                rest[i] = p - 1
            rest[i + 1] = rest.get(i + 1, 0) + 1
            nm = tuple(sorted(rest.items()))
            nc = c * p
            pieces[nm] = pieces[nm] + nc if nm in pieces else nc
    return DiffPoly(pieces)


def degree(T: DiffPoly) -> int:
    return T.degree()


def homogeneous_part(T: DiffPoly, d: int) -> DiffPoly:
    return T.homogeneous_part(d)


def xi_condition(P: DiffPoly):
    """Top-weight test.

    Returns ``(holds, witness, top_weight)`` where ``witness`` is the sum of
    the coefficients of the monomials of maximal ξ-weight; the condition
    holds when that sum is a nonzero element of the base field.
    """
    if not P.terms:
        raise PreconditionError("the weighted degree condition needs a nonzero polynomial")
    top = max(xi_weight(m) for m in P.terms)
    witness = RatFunc.const(0)
    for m, c in P.terms.items():
        if xi_weight(m) == top:
            witness = witness + c
    return bool(witness), witness, top


def evaluate_at(T: DiffPoly, values, one=None):
    """Replace ``u^(i)`` by ``values[i]`` (a list or a callable of ``i``)."""
    get = values if callable(values) else values.__getitem__
    cache: dict = {}

    def power(i, p):
        key = (i, p)
        if key not in cache:
            cache[key] = get(i) ** p
        return cache[key]

    total = None
    for m, c in T.sorted_terms():
        term = c if one is None else one * c
        for i, p in m:
            term = term * power(i, p)
        total = term if total is None else total + term
    if total is None:
        return RatFunc.const(0) if one is None else one * 0
    return total


def substitute(T: DiffPoly, v, **kwargs):
    """Evaluate ``T`` at ``u := v``.

    ``v`` may be a rational, a number-field element, a :class:`RatFunc`, a
    :class:`~genquad.diff_core.ParametricRatFunc`, another :class:`DiffPoly`
    (composition) or a :class:`~genquad.puiseux.PuiseuxSeries`, in which case
    truncation is tracked and keyword arguments are forwarded.
    """
    from genquad.puiseux import PuiseuxSeries, substitute_into_diffpoly

    if isinstance(v, PuiseuxSeries):
        return substitute_into_diffpoly(T, v, **kwargs)
    if isinstance(v, (int, Fraction, NumberFieldElem)):
        v = as_ratfunc(v)
    derivs = [v]
    for _ in range(max(T.order, 0)):
        prev = derivs[-1]
        derivs.append(total_derivative(prev) if isinstance(prev, DiffPoly) else prev.derivative())
    one = None
    if isinstance(v, DiffPoly):
        one = DiffPoly.const(1)
    elif not isinstance(v, RatFunc):
        one = v * 0 + 1
    return evaluate_at(T, derivs, one)
