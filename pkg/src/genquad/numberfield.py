"""Simple algebraic number fields Q(a) and root adjunction.

A field is described by a monic irreducible minimal polynomial over Q.
Towers are always flattened to a single primitive element, so every
element lives in exactly one :class:`NumberField` and arithmetic never has
to reconcile two generators.  :func:`adjoin_root` grows a field and returns
the embedding of the old field into the new one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from genquad.errors import CapabilityError
from genquad.factor import DEFAULT_FACTOR_BOUND, factor_over_Q
from genquad.poly import Poly, coerce, poly_gcd, poly_xgcd, resultant, squarefree_decomposition

DEFAULT_EXTENSION_BOUND = 12


class NumberField:
    __slots__ = ("minpoly", "name")

    def __init__(self, minpoly: Poly, name: str = "a"):
        if minpoly.degree < 1:
            raise ValueError("minimal polynomial must have positive degree")
        self.minpoly = minpoly.monic()
        self.name = name

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __call__(self, residue) -> "NumberFieldElem":
        if not isinstance(residue, Poly):
            residue = Poly([residue])
        return NumberFieldElem(self, residue)

    @property
    def gen(self) -> "NumberFieldElem":
        return self(Poly([0, 1]))

    def one(self) -> "NumberFieldElem":
        return self(Poly([1]))

    def __repr__(self):
        return f"NumberField({self.minpoly.to_str(self.name)} = 0)"


class NumberFieldElem:
    """Element of ``Q[a]/(minpoly)`` stored as a reduced residue polynomial."""

    __slots__ = ("field", "residue")

    def __init__(self, field: NumberField, residue: Poly):
        self.field = field
        if residue.degree >= field.degree:
            residue = residue % field.minpoly
        self.residue = residue

    # -- coercion -----------------------------------------------------
    def _other(self, other):
        if isinstance(other, NumberFieldElem):
            if other.field != self.field:
                raise ValueError("elements of different number fields")
            return other.residue
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, self.residue - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, o - self.residue)

    def __neg__(self):
        return NumberFieldElem(self.field, -self.residue)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NumberFieldElem(self.field, (self.residue * o) % self.field.minpoly)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElem":
        if not self.residue:
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = poly_xgcd(self.residue, self.field.minpoly)
        if g.degree != 0:
            raise ZeroDivisionError("residue shares a factor with the minimal polynomial")
        return NumberFieldElem(self.field, s)

    def __truediv__(self, other):
        if isinstance(other, NumberFieldElem):
            return self * other.inverse()
        o = coerce(other)
        if not isinstance(o, Fraction):
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return NumberFieldElem(self.field, self.residue / o)

    def __rtruediv__(self, other):
        o = coerce(other)
        if not isinstance(o, Fraction):
            return NotImplemented
        return self.inverse() * o

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NumberFieldElem):
            return self.field == other.field and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            return self.residue == Poly([other])
        return NotImplemented

    def __hash__(self):
        if self.residue.degree <= 0:
            return hash(self.residue.constant_term())
        return hash((self.field, self.residue))

    def __bool__(self):
        return bool(self.residue)

    # -- queries ------------------------------------------------------
    def is_rational(self) -> bool:
        return self.residue.degree <= 0

    def as_rational(self):
        """The element as a ``Fraction`` when it lies in Q, else ``None``."""
        if self.is_rational():
            return self.residue.constant_term()
        return None

    def derivative(self):
        return Fraction(0)

    def minimal_polynomial(self) -> Poly:
        """Minimal polynomial over Q, from the norm ``Res_t(m(t), z - r(t))``."""
        m = Poly([Poly([c]) for c in self.field.minpoly.coeffs])
        cs = [Poly([-c]) for c in self.residue.coeffs] or [Poly()]
        cs[0] = cs[0] + Poly([0, 1])
        norm = resultant(m, Poly(cs))
        if not isinstance(norm, Poly):
            norm = Poly([norm])
        return squarefree_decomposition(norm)[0][0]

    def to_str(self, var: str | None = None) -> str:
        return self.residue.to_str(var or self.field.name)

    def __repr__(self):
        return f"NumberFieldElem({self.to_str()} in {self.field!r})"


def field_of(*values) -> NumberField | None:
    """The common number field of the given scalars (``None`` for Q)."""
    found = None
    for v in values:
        if isinstance(v, NumberFieldElem):
            if found is None:
                found = v.field
            elif found != v.field:
                raise ValueError("values from different number fields")
    return found


@dataclass(frozen=True)
class Extension:
    """Result of adjoining a root: the new field, the root, and the old→new map."""

    field: NumberField | None
    root: object
    embed: Callable = field(repr=False)
    grew: bool = False


def _identity(v):
    return v


def _residue_in_t(c) -> Poly:
    """Coefficient of a polynomial over Q(a) as a polynomial in the symbol a."""
    if isinstance(c, NumberFieldElem):
        return c.residue
    return Poly([c])


def norm_shifted(g: Poly, base: NumberField, k: int) -> Poly:
    """``Res_t(m(t), g(z - k t))`` as a polynomial in z over Q.

    ``g`` has coefficients in ``base``; the generator is replaced by ``t``.
    """
    m = Poly([Poly([c]) for c in base.minpoly.coeffs])
    shift = Poly([Poly([0, 1]), Poly([-k])])  # z - k t as a polynomial in t
    acc = Poly()
    power = Poly([Poly([1])])
    for c in g.coeffs:
        r = _residue_in_t(c)
        term = Poly([Poly([a]) for a in r.coeffs]) * power
        acc = acc + term
        power = power * shift
    n = resultant(m, acc)
    if not isinstance(n, Poly):
        n = Poly([n])
    return n


def _lift_rational_poly(p: Poly, fld: NumberField) -> Poly:
    return Poly([fld(Poly([c])) for c in p.coeffs])


def factor_over_field(
    g: Poly, base: NumberField | None, bound: int = DEFAULT_FACTOR_BOUND
) -> list[tuple[Poly, int]]:
    """Monic irreducible factors of ``g`` over ``base`` (Trager's norm method)."""
    if not g:
        raise ValueError("cannot factor the zero polynomial")
    if base is None or base.degree == 1:
        if base is not None:
            g = g.map_coeffs(lambda c: c.as_rational() if isinstance(c, NumberFieldElem) else c)
        facs = factor_over_Q(g, bound)
        if base is not None:
            facs = [(_lift_rational_poly(f, base), m) for f, m in facs]
        return facs
    out = []
    for h, mult in squarefree_decomposition(g):
        if h.degree == 1:
            out.append((h, mult))
            continue
        for k in _shifts():
            n = norm_shifted(h, base, k)
            if n.degree > bound:
                raise CapabilityError(
                    f"norm of degree {n.degree} exceeds factorization bound {bound}"
                )
            if poly_gcd(n, n.derivative()).degree == 0:
                break
        alpha = base.gen
        inner = Poly([alpha * k, base.one()])  # z + k*a
        for f, _ in factor_over_Q(n, bound):
            shifted = _lift_rational_poly(f, base).compose(inner)
            piece = poly_gcd(h, shifted)
            if piece.degree > 0:
                out.append((piece, mult))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].to_str("z")))
    return out


def _shifts():
    k = 0
    while True:
        yield k
        k = -k if k > 0 else -k + 1


def roots_in_field(g: Poly, base: NumberField | None) -> list:
    """All roots of ``g`` that lie in ``base`` itself."""
    roots = []
    for f, _ in factor_over_field(g, base):
        if f.degree == 1:
            roots.append(-f.coeff(0) / f.lc)
    return roots


def adjoin_root(
    base: NumberField | None,
    m: Poly,
    bound: int = DEFAULT_EXTENSION_BOUND,
    name: str = "a",
    factor_bound: int = DEFAULT_FACTOR_BOUND,
) -> Extension:
    """Return a field containing a root of ``m`` together with that root.

    If ``m`` has a root in ``base`` the field does not grow.  Otherwise the
    lowest-degree irreducible factor is adjoined through a primitive element
    of the compositum whose minimal polynomial is the (square-free) norm.
    """
    if not m or m.degree < 1:
        raise ValueError("adjoin_root needs a nonconstant polynomial")
    facs = factor_over_field(m, base, factor_bound)
    g = facs[0][0]
    if g.degree == 1:
        return Extension(base, -g.coeff(0) / g.lc, _identity, False)
    base_deg = 1 if base is None else base.degree
    if base_deg * g.degree > bound:
        raise CapabilityError(
            f"extension of degree {base_deg * g.degree} exceeds bound {bound} "
            f"(adjoining a root of {g.to_str('z')})"
        )
    if base is None or base.degree == 1:
        gq = g.map_coeffs(lambda c: c.as_rational() if isinstance(c, NumberFieldElem) else c)
        new = NumberField(gq, name)

        def embed(v, _new=new):
            if isinstance(v, NumberFieldElem):
                v = v.as_rational()
            return _new(Poly([v]))

        return Extension(new, new.gen, embed, True)
    for k in _shifts():
        n = norm_shifted(g, base, k)
        if poly_gcd(n, n.derivative()).degree == 0:
            break
    new = NumberField(n, name)
    gamma = new.gen
    # alpha in terms of gamma: gcd over Q(gamma)[t] of m_alpha(t) and g(gamma - k t)
    m_alpha = _lift_rational_poly(base.minpoly, new)
    shift = Poly([gamma, new(Poly([-k]))])
    acc = Poly()
    power = Poly([new.one()])
    for c in g.coeffs:
        r = _residue_in_t(c)
        acc = acc + _lift_rational_poly(r, new) * power
        power = power * shift
    lin = poly_gcd(m_alpha, acc)
    if lin.degree != 1:
        raise ArithmeticError("primitive element construction failed")
    alpha_img = -lin.coeff(0)
    beta = gamma - alpha_img * k

    def embed(v, _new=new, _alpha=alpha_img):
        r = v.residue(_alpha) if isinstance(v, NumberFieldElem) else v
        return r if isinstance(r, NumberFieldElem) else _new(Poly([r]))

    return Extension(new, beta, embed, True)


def embed_poly(p: Poly, embed) -> Poly:
    return p.map_coeffs(embed)
