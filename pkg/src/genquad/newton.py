"""Puiseux branches at y = ∞ of an algebraic function ``P(y, z) = 0``.

The expansion uses Duval's rational Newton-Puiseux iteration in
``s = 1/y``.  Each branch is first produced as a parametrization

    s = λ T^r,    z = Σ β_e T^e    (β_e in a number field F)

which stands for ``r * [F:Q]`` roots of ``P`` (the ``r`` choices of ``T``
times the conjugates of ``F``).  It is then rewritten as a descending series
in ``y^(1/r)`` through ``T = κ y^(-1/r)`` with ``κ^(-r) = λ``.

Bookkeeping during the iteration: the original unknown is
``z = Z(T) + c T^M z'`` and the work polynomial ``W(T, z')`` has only
nonnegative powers of ``T``.  One Newton step on an edge with slope ``m/q``
and characteristic root ``ξ`` substitutes ``T -> ξ^v T^q`` and
``z' -> T^m (ξ^u + z'')`` where ``u q - v m = 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm

from genquad.errors import CapabilityError, CertificationError, ValidationError
from genquad.factor import DEFAULT_FACTOR_BOUND
from genquad.numberfield import (
    DEFAULT_EXTENSION_BOUND,
    NumberField,
    NumberFieldElem,
    adjoin_root,
    factor_over_field,
)
from genquad.poly import Poly, determinant, poly_gcd, resultant
from genquad.puiseux import PuiseuxSeries
from genquad.ratfunc import RatFunc

log = logging.getLogger(__name__)


# -- curves -----------------------------------------------------------------


def _as_bivariate(P) -> dict:
    """Normalize to ``{(y_degree, z_degree): Fraction}``."""
    if isinstance(P, dict):
        out = {k: Fraction(v) for k, v in P.items() if v != 0}
    elif isinstance(P, Poly):
        out = {}
        for j, c in enumerate(P.coeffs):
            c = c if isinstance(c, Poly) else Poly([c])
            for a, v in enumerate(c.coeffs):
                if v != 0:
                    out[(a, j)] = Fraction(v)
    else:
        raise ValidationError("curve must be a dict or a polynomial in z over Q[y]")
    return out


def _z_poly_over_Qy(terms: dict) -> Poly:
    m = max(j for _, j in terms)
    coeffs = []
    for j in range(m + 1):
        cs = [Fraction(0)] * (1 + max([a for a, jj in terms if jj == j], default=0))
        for (a, jj), v in terms.items():
            if jj == j:
                cs[a] = v
        coeffs.append(RatFunc(Poly(cs)))
    return Poly(coeffs)


class AlgebraicCurve:
    """``P(y, z) = 0`` with rational coefficients, made square-free in ``z``."""

    __slots__ = ("terms", "note")

    def __init__(self, P):
        terms = _as_bivariate(P)
        if not terms or max(j for _, j in terms) < 1:
            raise ValidationError("P must have positive degree in z")
        self.note = None
        zp = _z_poly_over_Qy(terms)
        g = poly_gcd(zp, zp.derivative())
        if g.degree > 0:
            red = zp // g
            den = Poly([1])
            for c in red.coeffs:
                den = den * c.den // poly_gcd(den, c.den)
            red = red.map_coeffs(lambda c: c * RatFunc(den))
            terms = {}
            for j, c in enumerate(red.coeffs):
                for a, v in enumerate(c.num.coeffs):
                    if v != 0:
                        terms[(a, j)] = Fraction(v)
            self.note = f"input not square-free in z; using its square-free part of degree {red.degree}"
            log.info(self.note)
        self.terms = terms

    def __eq__(self, other):
        if not isinstance(other, AlgebraicCurve):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    @property
    def degree(self) -> int:
        return max(j for _, j in self.terms)

    def coeff_poly(self, j: int) -> Poly:
        """Coefficient of ``z^j`` as a polynomial in ``y``."""
        top = max([a for a, jj in self.terms if jj == j], default=-1)
        return Poly([self.terms.get((a, j), 0) for a in range(top + 1)])

    def to_str(self) -> str:
        from genquad.render import format_terms, power_str

        items = sorted(self.terms.items(), key=lambda kv: (-kv[0][1], -kv[0][0]))
        pieces = []
        for (a, j), c in items:
            mono = "*".join(s for s in (power_str("z", j) if j else "", power_str("y", a) if a else "") if s)
            pieces.append((c, mono))
        return format_terms(pieces) + " = 0"


# -- branches ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Parametrization:
    """``s = lam * T^r``, ``z = sum beta_e T^e`` known below ``floor_T`` (None: exact)."""

    lam: object
    r: int
    Z: dict
    floor_T: Fraction | None
    field: NumberField | None


@dataclass(frozen=True, eq=False)
class Branch:
    series: PuiseuxSeries
    ramification: int
    field: NumberField | None
    multiplicity: int
    param: Parametrization = field(repr=False)

    @property
    def exact(self) -> bool:
        return self.series.floor is None

    def leading_exponent(self):
        ex = self.series.exponents()
        return ex[0][0] if ex else None

    def to_json(self) -> dict:
        from genquad.render import scalar_str

        lead = self.leading_exponent()
        fl = self.series.floor_exponent
        return {
            "ramification": self.ramification,
            "multiplicity": self.multiplicity,
            "leading_exponent": None if lead is None else _q(lead),
            "coefficients": [
                {"exponent": _q(e), "value": scalar_str(c)} for e, c in self.series.exponents()
            ],
            "minpoly": [] if self.field is None else [_q(c) for c in self.field.minpoly.coeffs],
            "floor": None if fl is None else _q(fl),
            "series": self.series.to_str("y"),
        }


def _q(e: Fraction) -> str:
    e = Fraction(e)
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


# -- Newton polygon machinery ---------------------------------------------------


def _lower_hull(points):
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (j0, i0), (j1, i1) = hull[-2], hull[-1]
            cross = (j1 - j0) * (p[1] - i0) - (i1 - i0) * (p[0] - j0)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _edges(W: dict, positive_only: bool):
    """``(q, m, l, j_left)`` for the lower-hull edges of ``W``; slope ``m/q`` is the z-valuation."""
    lowest: dict = {}
    for i, j in W:
        if j not in lowest or i < lowest[j]:
            lowest[j] = i
    hull = _lower_hull(lowest.items())
    out = []
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        mu = Fraction(i1 - i2, j2 - j1)
        if positive_only and mu <= 0:
            continue
        q, m = mu.denominator, mu.numerator
        out.append((q, m, q * i1 + m * j1, j1))
    return out


def _bezout(q: int, m: int):
    """``(u, v)`` with ``u q - v m = 1`` and ``0 <= v < q``."""
    if q == 1:
        return 1, 0
    v = pow(-m, -1, q)
    u, rem = divmod(1 + v * m, q)
    assert rem == 0
    return u, v


class _Powers:
    def __init__(self, base):
        self.base = base
        self.cache = {}

    def __call__(self, k: int):
        if k not in self.cache:
            self.cache[k] = self.base**k
        return self.cache[k]


def _step(W: dict, q: int, m: int, l: int, xi, u: int, v: int) -> dict:
    xu, xv = _Powers(xi), _Powers(xi)
    out: dict = {}
    for (i, j), a in W.items():
        base = a * xv(v * i)
        e0 = q * i + m * j - l
        for t in range(j + 1):
            c = base * comb(j, t) * xu(u * (j - t))
            key = (e0, t)
            out[key] = out[key] + c if key in out else c
    return {k: c for k, c in out.items() if c != 0}


@dataclass
class _State:
    W: dict
    F: NumberField | None
    lam: object
    r: int
    Z: dict
    c: object
    M: int
    separated: bool
    deg: int  # [F:Q]


def _embed_state(st: _State, ext) -> _State:
    e = ext.embed
    return _State(
        {k: e(c) for k, c in st.W.items()},
        ext.field,
        e(st.lam),
        st.r,
        {k: e(c) for k, c in st.Z.items()},
        e(st.c),
        st.M,
        st.separated,
        st.deg,
    )


def _field_degree(F) -> int:
    return 1 if F is None else F.degree


def _children(st: _State, top: bool, ext_bound: int, factor_bound: int):
    edges = _edges(st.W, positive_only=not top)
    for q, m, l, j1 in edges:
        phi_terms = {}
        for (i, j), a in st.W.items():
            if q * i + m * j == l:
                phi_terms[(j - j1) // q] = a
        phi = Poly([phi_terms.get(k, 0) for k in range(max(phi_terms) + 1)])
        for psi, mult in factor_over_field(phi, st.F, factor_bound):
            try:
                ext = adjoin_root(st.F, psi, bound=ext_bound, factor_bound=factor_bound)
            except CapabilityError as exc:
                raise CapabilityError(
                    f"{exc}; characteristic polynomial {phi.to_str('Z')} of edge slope {Fraction(m, q)}"
                ) from exc
            s2 = _embed_state(st, ext) if ext.grew else st
            xi = ext.root
            u, v = _bezout(q, m)
            xv = xi**v
            Z = {q * e: b * xv**e for e, b in s2.Z.items()}
            c_new = s2.c * xv**s2.M
            M_new = q * s2.M + m
            Z[M_new] = c_new * xi**u
            yield _State(
                _step(s2.W, q, m, l, xi, u, v),
                s2.F,
                s2.lam * xv**s2.r,
                q * s2.r,
                Z,
                c_new,
                M_new,
                mult == 1,
                _field_degree(s2.F),
            )


def _next_floor(st: _State):
    """T-exponent of the first unknown term, or ``None`` when ``z' = 0`` is exact."""
    if not any(j == 0 for _, j in st.W):
        return None
    edges = _edges(st.W, positive_only=True)
    mu = min(Fraction(m, q) for q, m, _, _ in edges)
    return st.M + mu


def _finish(st: _State, terms: int, exact_zero: bool) -> Parametrization:
    keys = sorted(st.Z)
    if exact_zero:
        floor_T = None
    else:
        floor_T = _next_floor(st)
    if len(keys) > terms:
        floor_T = Fraction(keys[terms])
        keys = keys[:terms]
    return Parametrization(st.lam, st.r, {e: st.Z[e] for e in keys}, floor_T, st.F)


def _to_branch(par: Parametrization, ext_bound: int, factor_bound: int) -> Branch:
    F = par.field
    lam = par.lam
    Z = dict(par.Z)
    mult = _field_degree(F)
    kappa = Fraction(1)
    if lam != 1:
        target = Poly([-lam] + [0] * (par.r - 1) + [1])
        ext = adjoin_root(F, target, bound=ext_bound, factor_bound=factor_bound, name="a")
        if ext.grew:
            Z = {e: ext.embed(b) for e, b in Z.items()}
            F = ext.field
        kappa = 1 / ext.root
    terms = {-e: b * kappa**e for e, b in Z.items()}
    floor = None if par.floor_T is None else -Fraction(par.floor_T) / par.r
    series = PuiseuxSeries.from_exponents({Fraction(j, par.r): c for j, c in terms.items()}, floor=floor)
    return Branch(series, par.r, F, mult, par)


def expand_at_infinity(
    C: AlgebraicCurve,
    terms: int = 6,
    bound: int = DEFAULT_EXTENSION_BOUND,
    factor_bound: int = DEFAULT_FACTOR_BOUND,
) -> list[Branch]:
    """One branch per conjugacy class of roots of ``P(y, z)`` near ``y = ∞``.

    ``terms`` is the number of nonzero terms kept per branch; expansion
    continues past it when needed to separate branches.
    """
    if not isinstance(C, AlgebraicCurve):
        C = AlgebraicCurve(C)
    if terms < 1:
        raise ValidationError("terms must be >= 1")
    dy = max(a for a, _ in C.terms)
    W0 = {(dy - a, j): c for (a, j), c in C.terms.items()}
    start = _State(W0, None, Fraction(1), 1, {}, Fraction(1), 0, False, 1)
    params: list[Parametrization] = []
    stack = [(start, True)]
    while stack:
        st, top = stack.pop()
        if not any(j == 0 for _, j in st.W):
            # z' = 0 solves W exactly; other roots (if any) come from the edges
            params.append(_finish(st, terms, exact_zero=True))
            if st.separated:
                continue
        elif st.separated and len(st.Z) >= terms:
            params.append(_finish(st, terms, exact_zero=False))
            continue
        kids = list(_children(st, top, bound, factor_bound))
        stack.extend((k, False) for k in reversed(kids))
    branches = [_to_branch(p, bound, factor_bound) for p in params]
    branches.sort(key=_branch_key)
    return branches


def _branch_key(b: Branch):
    lead = b.leading_exponent()
    return (
        -(lead if lead is not None else Fraction(-10**9)),
        b.ramification,
        b.multiplicity,
        b.series.to_str("y"),
    )


# -- certification ----------------------------------------------------------------


def _eval_bivariate(terms: dict, S: PuiseuxSeries, dz: int = 0) -> PuiseuxSeries:
    """``(1/dz!) d^dz P/dz^dz`` at ``z = S`` (S treated as exact)."""
    total = PuiseuxSeries({}, 1, None)
    powers = [PuiseuxSeries.constant(1)]
    top = max(j for _, j in terms)
    for _ in range(top):
        powers.append(powers[-1] * S)
    for (a, j), c in terms.items():
        if j < dz:
            continue
        coef = c * comb(j, dz)
        total = total + PuiseuxSeries.monomial(coef, a) * powers[j - dz]
    return total


def _lead(s: PuiseuxSeries):
    ex = s.exponents()
    return ex[0][0] if ex else None


@dataclass(frozen=True)
class Certificate:
    residual_valuation: Fraction | None  # None: residual is exactly 0
    bound: Fraction | None


def certify_branch(C: AlgebraicCurve, b: Branch) -> Certificate:
    """Check ``P(y, S)`` for the truncated series ``S`` of ``b``.

    If the true root is ``S + E`` with ``E`` of exponent at most ``floor``,
    Taylor expansion gives ``P(S) = -sum_k P_k(S) E^k`` with
    ``P_k = (1/k!) d^k P/dz^k``, so the residual's leading exponent is at
    most ``B = max_k (lead(P_k(S)) + k*floor)``.  An exact branch must give
    a zero residual.
    """
    if not isinstance(C, AlgebraicCurve):
        C = AlgebraicCurve(C)
    S = PuiseuxSeries(b.series.terms, b.series.p, None)
    residual = _eval_bivariate(C.terms, S)
    val = _lead(residual)
    if b.series.floor is None:
        if val is not None:
            raise CertificationError(f"exact branch leaves a nonzero residual of exponent {val}")
        return Certificate(None, None)
    fl = b.series.floor_exponent
    cands = []
    for k in range(1, C.degree + 1):
        lk = _lead(_eval_bivariate(C.terms, S, k))
        if lk is not None:
            cands.append(lk + k * fl)
    bound = max(cands)
    if val is not None and val > bound:
        raise CertificationError(
            f"residual exponent {val} exceeds the certified bound {bound}"
        )
    return Certificate(val, bound)


# -- Vieta check --------------------------------------------------------------------


def _poly_s_times(p: Poly, k: int) -> Poly:
    return Poly([0] * k + list(p.coeffs)) if k >= 0 else Poly(p.coeffs[-k:])


def _class_product(par: Parametrization):
    """Product of all roots in the class as ``(Laurent valuation, Poly in s over Q, precision)``."""
    if not par.Z:
        return None
    F = par.field
    lam, r = par.lam, par.r
    e0 = min(par.Z)
    top = max(par.Z)
    shat = [par.Z.get(e0 + k, 0) for k in range(top - e0 + 1)]
    zero = Fraction(0)
    inv_lam = 1 / lam
    # multiplication-by-Shat matrix on the basis 1, T, ..., T^(r-1) of F[s][T]/(lam T^r - s)
    M = [[Poly([zero]) for _ in range(r)] for _ in range(r)]
    for b in range(r):
        for k, c in enumerate(shat):
            if c == 0:
                continue
            n = k + b
            qn, rn = divmod(n, r)
            M[rn][b] = M[rn][b] + Poly([0] * qn + [c * inv_lam**qn])
    G = determinant(M)
    if not isinstance(G, Poly):
        G = Poly([G])
    const = (Fraction((-1) ** (r + 1)) * inv_lam) ** e0
    H = G * const
    if F is None:
        normed = H.map_coeffs(lambda c: c.as_rational() if isinstance(c, NumberFieldElem) else c)
        deg = 1
    else:
        deg = F.degree
        width = max((c.residue.degree if isinstance(c, NumberFieldElem) else 0) for c in H.coeffs) + 1
        rows = []
        for d in range(width):
            col = []
            for c in H.coeffs:
                res = c.residue if isinstance(c, NumberFieldElem) else Poly([c])
                col.append(res.coeff(d))
            rows.append(Poly(col))
        m = Poly([Poly([c]) for c in F.minpoly.coeffs])
        normed = resultant(m, Poly(rows))
        if not isinstance(normed, Poly):
            normed = Poly([normed])
    prec = None if par.floor_T is None else (Fraction(par.floor_T) - e0) / r
    return e0 * deg, normed, prec


@dataclass(frozen=True)
class VietaReport:
    ok: bool
    compared_terms: int | None  # None: exact identity
    valuation: int


def vieta_check(C: AlgebraicCurve, branches: list[Branch]) -> VietaReport:
    """Compare the product of all roots with ``(-1)^m a_0 / a_m`` at ``y = ∞``."""
    if not isinstance(C, AlgebraicCurve):
        C = AlgebraicCurve(C)
    m = C.degree
    a0, am = C.coeff_poly(0), C.coeff_poly(m)
    if not a0:
        ok = any(not b.param.Z for b in branches)
        return VietaReport(ok, None, 0)
    val = 0
    prod = Poly([1])
    prec = None
    for b in branches:
        cp = _class_product(b.param)
        if cp is None:
            return VietaReport(False, None, 0)
        v, poly, pr = cp
        low = next(k for k, c in enumerate(poly.coeffs) if c != 0)
        val += v + low
        prod = prod * Poly(poly.coeffs[low:])
        if pr is not None:
            prec = pr if prec is None else min(prec, pr)
    # compare prod * rev(am) with (-1)^m rev(a0) * s^(deg am - deg a0 - val)
    rev_am = Poly(list(reversed(am.coeffs)))
    rev_a0 = Poly(list(reversed(a0.coeffs)))
    shift = am.degree - a0.degree - val
    lhs = prod * rev_am
    rhs = rev_a0 * Fraction((-1) ** m)
    if shift >= 0:
        rhs = _poly_s_times(rhs, shift)
    else:
        lhs = _poly_s_times(lhs, -shift)
    diff = lhs - rhs
    if prec is None:
        return VietaReport(not diff, None, val)
    n = -(-prec.numerator // prec.denominator)
    base = max(0, -shift)
    ok = all(diff.coeff(base + k) == 0 for k in range(n)) and all(
        diff.coeff(k) == 0 for k in range(base)
    )
    return VietaReport(ok, n, val)
