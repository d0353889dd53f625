"""Rational solutions of the classical Riccati equation ``u' + u^2 + a1*u + a2 = 0``.

With ``v = u + a1/2`` the equation becomes ``v' + v^2 = r`` where
``r = a1'/2 + a1^2/4 - a2``; rational ``v`` correspond to solutions of
``y'' = r*y`` with a rational logarithmic derivative.  Those are found by the
first case of Kovacic's algorithm: local square-root data of ``r`` at each
pole and at infinity give finitely many exponent combinations ``(ω, d)``,
and each survives only if a polynomial ``P`` of degree ``d`` satisfies
``P'' + 2ωP' + (ω' + ω^2 - r)P = 0``; then ``v = ω + P'/P``.

Poles and square roots may require algebraic constants; they are adjoined
up to the configured extension-degree bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from genquad.errors import ValidationError
from genquad.factor import DEFAULT_FACTOR_BOUND
from genquad.numberfield import (
    DEFAULT_EXTENSION_BOUND,
    NumberFieldElem,
    adjoin_root,
    factor_over_field,
    roots_in_field,
)
from genquad.poly import Poly, poly_gcd, squarefree_part
from genquad.ratfunc import RatFunc


def _series_div(num: list, den: list, n: int) -> list:
    """First ``n`` coefficients of ``num/den`` as power series (``den[0] != 0``)."""
    out = []
    inv = 1 / den[0]
    num = list(num) + [0] * max(0, n - len(num))
    for k in range(n):
        acc = num[k]
        for i in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[i] * out[k - i]
        out.append(acc * inv)
    return out


def _series_sqrt(a: list, s0, n: int) -> list:
    """Square root of ``a[0] + a[1] t + ...`` with leading coefficient ``s0``."""
    s = [s0]
    two_s0 = 2 * s0
    for k in range(1, n):
        acc = a[k] if k < len(a) else 0
        for i in range(1, k):
            acc = acc - s[i] * s[k - i]
        s.append(acc / two_s0)
    return s


def _valuation(p: Poly) -> int:
    return next(k for k, c in enumerate(p.coeffs) if c != 0)


@dataclass
class _Local:
    """Kovacic data at one place: ``sqrt_part`` (a RatFunc) and the two exponents."""

    sqrt_part: object
    alpha_plus: object
    alpha_minus: object


class _Impossible(Exception):
    pass


def _laurent_at(N: Poly, Dn: Poly, c, n_terms: int):
    """``(order, coefficients)`` of ``N/Dn`` at ``x = c``: ``sum coeffs[i] t^(i - order)``."""
    Ns, Ds = N.shift(c), Dn.shift(c)
    k = _valuation(Ds)
    kn = _valuation(Ns)
    Ds = Poly(Ds.coeffs[k:])
    Ns = Poly(Ns.coeffs[kn:])
    order = k - kn
    return order, _series_div(list(Ns.coeffs), list(Ds.coeffs), n_terms)


def _laurent_at_infinity(N: Poly, Dn: Poly, n_terms: int):
    """``(o, coeffs)`` with ``N/Dn = sum coeffs[i] x^(-(o + i))``."""
    o = Dn.degree - N.degree
    return o, _series_div(list(reversed(N.coeffs)), list(reversed(Dn.coeffs)), n_terms)


def _sqrt_in(F, value):
    roots = roots_in_field(Poly([-value, 0, 1]), F)
    return roots[0] if roots else None


def _radicands(N, Dn, poles):
    """Elements whose square roots the local analysis needs."""
    out = []
    for c in poles:
        order, co = _laurent_at(N, Dn, c, 1)
        if order == 2:
            out.append(1 + 4 * co[0])
        elif order >= 4 and order % 2 == 0:
            out.append(co[0])
    o, co = _laurent_at_infinity(N, Dn, 1)
    if o == 2:
        out.append(1 + 4 * co[0])
    elif o <= 0 and o % 2 == 0:
        out.append(co[0])
    return out


def _local_finite(N, Dn, c, F) -> _Local:
    x = RatFunc.x()
    t = x - c
    order, _ = _laurent_at(N, Dn, c, 1)
    if order == 1:
        zero = RatFunc.const(0)
        return _Local(zero, Fraction(1), Fraction(1))
    if order == 2:
        _, co = _laurent_at(N, Dn, c, 1)
        root = _sqrt_in(F, 1 + 4 * co[0])
        half = Fraction(1, 2)
        return _Local(RatFunc.const(0), half + half * root, half - half * root)
    if order % 2:
        raise _Impossible
    nu = order // 2
    _, co = _laurent_at(N, Dn, c, nu + 1)
    a = _sqrt_in(F, co[0])
    s = _series_sqrt(co, a, nu - 1)
    part = RatFunc.const(0)
    for i, si in enumerate(s):
        part = part + t ** (i - nu) * si
    # coefficient of t^(-nu-1) in r - part^2: index nu - 1 in co, minus square contribution
    sq = 0
    for i in range(len(s)):
        j = nu - 1 - i
        if 0 <= j < len(s):
            sq = sq + s[i] * s[j]
    b = co[nu - 1] - sq
    half = Fraction(1, 2)
    return _Local(part, half * (b / a + nu), half * (-b / a + nu))


def _local_infinity(N, Dn, F) -> _Local:
    x = RatFunc.x()
    if not N:
        return _Local(RatFunc.const(0), Fraction(0), Fraction(1))
    o, co = _laurent_at_infinity(N, Dn, 1)
    half = Fraction(1, 2)
    if o > 2:
        return _Local(RatFunc.const(0), Fraction(0), Fraction(1))
    if o == 2:
        root = _sqrt_in(F, 1 + 4 * co[0])
        return _Local(RatFunc.const(0), half + half * root, half - half * root)
    if o % 2:
        raise _Impossible
    nu = -o // 2
    _, co = _laurent_at_infinity(N, Dn, nu + 2)
    a = _sqrt_in(F, co[0])
    s = _series_sqrt(co, a, nu + 1)
    part = RatFunc.const(0)
    for i, si in enumerate(s):
        part = part + x ** (nu - i) * si
    # coefficient of x^(nu-1) in r - part^2; r's x^(nu-1) coefficient sits at index nu + 1
    sq = 0
    for i in range(len(s)):
        j = nu + 1 - i
        if 0 <= j < len(s):
            sq = sq + s[i] * s[j]
    b = co[nu + 1] - sq
    return _Local(part, half * (b / a - nu), half * (-b / a - nu))


def _nullspace(rows: list[list], ncols: int) -> list[list]:
    """Basis of the right nullspace, in reduced echelon normalization."""
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def _polynomial_solutions(omega: RatFunc, r: RatFunc, d: int) -> list[Poly]:
    """Polynomials ``P`` of degree <= d with ``P'' + 2ωP' + (ω' + ω² - r)P = 0``."""
    x = RatFunc.x()
    c0 = omega.derivative() + omega * omega - r
    images = []
    for i in range(d + 1):
        xi = x**i
        images.append(xi.derivative().derivative() + 2 * omega * xi.derivative() + c0 * xi)
    den = Poly([1])
    for im in images:
        den = den * (im.den // poly_gcd(den, im.den))
    polys = [(im * RatFunc(den)).num for im in images]
    height = max((p.degree for p in polys), default=-1) + 1
    rows = [[p.coeff(k) for p in polys] for k in range(height)]
    out = []
    for vec in _nullspace(rows, d + 1):
        P = Poly(vec)
        if P.degree >= 0:
            out.append(P.monic())
    return out


def _to_Q(u: RatFunc) -> RatFunc:
    return u.to_Q() if u.is_over_Q() else u


def rational_solutions_order2(
    a1: RatFunc,
    a2: RatFunc,
    bound: int = DEFAULT_EXTENSION_BOUND,
    factor_bound: int = DEFAULT_FACTOR_BOUND,
) -> list[RatFunc]:
    """All rational ``u`` with ``u' + u^2 + a1 u + a2 = 0`` (basis solutions for pencils)."""
    if not (a1.is_over_Q() and a2.is_over_Q()):
        raise ValidationError("rational-solution search needs coefficients in Q(x)")
    a1, a2 = a1.to_Q(), a2.to_Q()
    r = a1.derivative() / 2 + a1 * a1 / 4 - a2
    N, Dn = r.num, r.den
    F = None
    # grow F until it holds every pole of r and every square root the local data needs
    while True:
        poles = []
        if Dn.degree > 0:
            sqf = squarefree_part(Dn)
            poles = roots_in_field(sqf, F)
            if len(poles) < sqf.degree:
                for g, _ in factor_over_field(sqf, F, factor_bound):
                    if g.degree > 1:
                        F = adjoin_root(F, g, bound=bound, factor_bound=factor_bound).field
                        break
                continue
        missing = None
        for rad in _radicands(N, Dn, poles):
            if _sqrt_in(F, rad) is None:
                missing = rad
                break
        if missing is None:
            break
        F = adjoin_root(F, Poly([-missing, 0, 1]), bound=bound, factor_bound=factor_bound).field
    try:
        locals_ = [(c, _local_finite(N, Dn, c, F)) for c in poles]
        inf = _local_infinity(N, Dn, F)
    except _Impossible:
        return []
    x = RatFunc.x()
    found: list[RatFunc] = []
    for signs in itertools.product((1, -1), repeat=len(locals_) + 1):
        s_inf, s_fin = signs[0], signs[1:]
        alpha_inf = inf.alpha_plus if s_inf > 0 else inf.alpha_minus
        d = alpha_inf
        omega = inf.sqrt_part * s_inf
        for sc, (c, loc) in zip(s_fin, locals_):
            alpha = loc.alpha_plus if sc > 0 else loc.alpha_minus
            d = d - alpha
            omega = omega + loc.sqrt_part * sc + (x - c).inverse() * alpha
        if isinstance(d, NumberFieldElem):
            d = d.as_rational()
            if d is None:
                continue
        d = Fraction(d)
        if d.denominator != 1 or d < 0:
            continue
        for P in _polynomial_solutions(omega, r, int(d)):
            v = omega + RatFunc(P.derivative(), P)
            u = _to_Q(v - a1 / 2)
            if all(u != f for f in found):
                found.append(u)
    return found
