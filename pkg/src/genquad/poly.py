"""Dense univariate polynomials over an exact coefficient field.

Coefficients are stored in ascending order.  Any object with field
arithmetic and an ``== 0`` test works as a coefficient: ``Fraction``,
:class:`~genquad.numberfield.NumberFieldElem`, :class:`~genquad.ratfunc.RatFunc`
or even another :class:`Poly` (for bivariate work in :func:`resultant`).
Plain ``int`` inputs are promoted to ``Fraction`` so that division stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


def coerce(c):
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, int):
        return Fraction(c)
    return c


def is_zero(c) -> bool:
    return c == 0


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [coerce(c) for c in coeffs]
        while cs and is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    # -- basic queries ------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_term(self):
        return self.coeff(0)

    # -- arithmetic ---------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if getattr(other, "_compound", False):
            return None
        return Poly([other])

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if getattr(other, "_compound", False):
                return NotImplemented
            c = coerce(other)
            return Poly([a * c for a in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [None] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if is_zero(ai):
                continue
            for j, bj in enumerate(b):
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return Poly([Fraction(0) if c is None else c for c in out])

    def __rmul__(self, other):
        if getattr(other, "_compound", False):
            return NotImplemented
        c = coerce(other)
        return Poly([c * a for a in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, Poly):
            q, r = divmod(self, other)
            if r:
                raise ArithmeticError("inexact polynomial division")
            return q
        c = coerce(other)
        if is_zero(c):
            raise ZeroDivisionError("polynomial division by zero scalar")
        return Poly([a / c for a in self.coeffs])

    def __divmod__(self, other: "Poly"):
        if not isinstance(other, Poly):
            other = Poly([other])
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if len(rem) - 1 < dq:
            return Poly(), Poly(rem)
        quo = [lc - lc] * (len(rem) - dq)  # zero of the coefficient ring
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if is_zero(c):
                continue
            t = c / lc
            quo[k - dq] = t
            for i, oc in enumerate(other.coeffs):
                rem[k - dq + i] = rem[k - dq + i] - t * oc
        return Poly(quo), Poly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if getattr(other, "_compound", False):
            return NotImplemented
        try:
            return self.coeffs == Poly([other]).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- calculus and composition ---------------------------------------
    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        """Horner evaluation at any value supporting ``*`` and ``+``."""
        if not self.coeffs:
            return Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, a) -> "Poly":
        """``p(x + a)``."""
        return self.compose(Poly([a, 1]))

    def map_coeffs(self, f) -> "Poly":
        return Poly([f(c) for c in self.coeffs])

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self / self.lc

    def reverse(self, degree: int | None = None) -> "Poly":
        d = self.degree if degree is None else degree
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return Poly(reversed(cs[: d + 1]))

    def to_str(self, var: str = "x") -> str:
        from genquad.render import format_poly

        return format_poly(self, var)

    def __repr__(self):
        return f"Poly({self.to_str()})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over a field (zero only if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = Poly([1]), Poly()
    t0, t1 = Poly(), Poly([1])
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    lc = r0.lc
    return r0 / lc, s0 / lc, t0 / lc


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over a characteristic-zero field.

    Returns monic square-free, pairwise coprime factors with multiplicities;
    their product times ``p.lc`` is ``p``.
    """
    if not p:
        raise ValueError("square-free decomposition of the zero polynomial")
    f = p.monic()
    out = []
    if f.degree == 0:
        return out
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    if not p:
        raise ValueError("square-free part of the zero polynomial")
    out = Poly([1])
    for f, _ in squarefree_decomposition(p):
        out = out * f
    return out


def _exact_div(a, b):
    if isinstance(a, Poly) or isinstance(b, Poly):
        if not isinstance(a, Poly):
            a = Poly([a])
        if not isinstance(b, Poly):
            b = Poly([b])
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("Bareiss step is not exact")
        return q
    return a / b


def determinant(rows):
    """Fraction-free (Bareiss) determinant over an integral domain."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_matrix(p: Poly, q: Poly):
    """Sylvester matrix with the ``deg q`` rows of ``p`` first."""
    dp, dq = p.degree, q.degree
    size = dp + dq
    zero = Fraction(0)
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(dq):
        rows.append([zero] * i + pc + [zero] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + qc + [zero] * (size - dq - 1 - i))
    return rows


def resultant(p: Poly, q: Poly):
    """Resultant as the determinant of :func:`sylvester_matrix` (``p`` rows first).

    Coefficients may themselves be polynomials (the variable eliminated is
    the outer one).  ``res(z - y, z + y) = 2y`` under this convention.
    """
    if not p or not q:
        return Fraction(0)
    if p.degree == 0 and q.degree == 0:
        return Fraction(1)
    if q.degree == 0:
        return q.lc ** p.degree
    if p.degree == 0:
        return p.lc ** q.degree
    return determinant(sylvester_matrix(p, q))


def binomial_expand(a, b, n: int):
    """Coefficients of ``(a + b*z)**n`` as a list indexed by power of z."""
    return [comb(n, k) * a ** (n - k) * b**k for k in range(n + 1)]
