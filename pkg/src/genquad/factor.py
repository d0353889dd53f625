"""Factorization of univariate polynomials over the rationals.

Pipeline: square-free decomposition, rational-root extraction, then
Kronecker's interpolation search for the remaining factors.  Kronecker's
method is exponential in the degree, so when its candidate count exceeds
``KRONECKER_BUDGET`` the remaining square-free, root-free part is handed to
sympy's factorizer instead.
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from math import gcd, lcm

from sympy import divisors

from genquad.errors import CapabilityError
from genquad.poly import Poly, squarefree_decomposition

log = logging.getLogger(__name__)

DEFAULT_FACTOR_BOUND = 16
KRONECKER_BUDGET = 4000


def primitive_integer(p: Poly) -> list[int]:
    """Integer coefficient list of the primitive part of ``p`` with positive lc."""
    den = 1
    for c in p.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_eval(cs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _int_divmod(num: list[int], den: list[int]):
    """Exact division over Z; returns quotient or None."""
    num = list(num)
    dn, dd = len(num) - 1, len(den) - 1
    if dn < dd:
        return None
    quo = [0] * (dn - dd + 1)
    lc = den[-1]
    for k in range(dn, dd - 1, -1):
        c = num[k]
        if c == 0:
            continue
        if c % lc:
            return None
        t = c // lc
        quo[k - dd] = t
        for i, dc in enumerate(den):
            num[k - dd + i] -= t * dc
    if any(num[:dd]):
        return None
    return quo


def _rational_roots(cs: list[int]):
    """Split off linear factors ``q*x - p``; returns (linear factors, rest)."""
    linears = []
    while len(cs) > 1 and cs[0] == 0:
        linears.append([0, 1])
        cs = cs[1:]
    if len(cs) <= 1:
        return linears, cs
    changed = True
    while changed and len(cs) > 2:
        changed = False
        for q in divisors(abs(cs[-1])):
            for p in divisors(abs(cs[0])):
                for s in (p, -p):
                    if gcd(s, q) != 1:
                        continue
                    quo = _int_divmod(cs, [-s, q])
                    if quo is not None:
                        linears.append([-s, q])
                        cs = quo
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    if len(cs) == 2:
        linears.append(cs)
        cs = [1]
    return linears, cs


def _interpolate(points: list[int], values: list[int]):
    """Lagrange interpolation; integer coefficient list or None."""
    n = len(points)
    acc = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(points, values)):
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        scale = Fraction(yi, denom)
        for k in range(n):
            acc[k] += scale * basis[k]
    if any(c.denominator != 1 for c in acc):
        return None
    out = [int(c) for c in acc]
    while out and out[-1] == 0:
        out.pop()
    return out


class _BudgetExceeded(Exception):
    pass


def _kronecker(cs: list[int]) -> list[list[int]]:
    """Irreducible factors of a primitive, root-free, square-free integer polynomial."""
    n = len(cs) - 1
    if n <= 3:
        return [cs]
    for d in range(2, n // 2 + 1):
        candidates = []
        x = 0
        while len(candidates) < 3 * (d + 1):
            for a in ((x,) if x == 0 else (x, -x)):
                v = _int_eval(cs, a)
                candidates.append((len(divisors(abs(v))), a, v))
            x += 1
        candidates.sort()
        chosen = candidates[: d + 1]
        points = [a for _, a, _ in chosen]
        choices = []
        total = 1
        for i, (_, _, v) in enumerate(chosen):
            ds = divisors(abs(v))
            opts = list(ds) if i == 0 else [s * e for e in ds for s in (1, -1)]
            choices.append(opts)
            total *= len(opts)
        if total > KRONECKER_BUDGET:
            raise _BudgetExceeded
        for values in itertools.product(*choices):
            g = _interpolate(points, list(values))
            if g is None or len(g) - 1 != d or g[0] == 0:
                continue
            if cs[-1] % g[-1] or cs[0] % g[0]:
                continue
            quo = _int_divmod(cs, g)
            if quo is None:
                continue
            if g[-1] < 0:
                g = [-c for c in g]
                quo = [-c for c in quo]
            return _kronecker(g) + _kronecker(quo)
    return [cs]


def _sympy_factor(cs: list[int]) -> list[list[int]]:
    import sympy

    t = sympy.Symbol("t")
    expr = sum(c * t**k for k, c in enumerate(cs))
    _, facs = sympy.factor_list(expr, t)
    out = []
    for f, mult in facs:
        coeffs = [int(c) for c in reversed(sympy.Poly(f, t).all_coeffs())]
        out.extend([coeffs] * mult)
    return out


def _to_monic(cs: list[int]) -> Poly:
    return Poly([Fraction(c, cs[-1]) for c in cs])


def factor_over_Q(p: Poly, bound: int = DEFAULT_FACTOR_BOUND) -> list[tuple[Poly, int]]:
    """Irreducible factorization over Q.

    Returns monic irreducible factors with multiplicities, sorted by degree
    and then coefficients; ``p`` equals ``p.lc`` times their product.

    >>> [str(f.to_str()) for f, _ in factor_over_Q(Poly([-1, 0, 0, 0, 1]))]
    ['x - 1', 'x + 1', 'x^2 + 1']
    """
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    if any(not isinstance(c, Fraction) for c in p.coeffs):
        raise TypeError("factor_over_Q needs rational coefficients")
    if p.degree > bound:
        raise CapabilityError(f"degree {p.degree} exceeds factorization bound {bound}")
    out: list[tuple[Poly, int]] = []
    for sqf, mult in squarefree_decomposition(p):
        linears, rest = _rational_roots(primitive_integer(sqf))
        pieces = [lin for lin in linears]
        if len(rest) > 1:
            try:
                pieces.extend(_kronecker(rest))
            except _BudgetExceeded:
                log.debug("Kronecker budget exceeded at degree %d; using sympy", len(rest) - 1)
                pieces.extend(_sympy_factor(rest))
        out.extend((_to_monic(cs), mult) for cs in pieces)
    out.sort(key=lambda fm: (fm[0].degree, [(c.numerator, c.denominator) for c in fm[0].coeffs], fm[1]))
    return out


def is_irreducible(p: Poly, bound: int = DEFAULT_FACTOR_BOUND) -> bool:
    facs = factor_over_Q(p, bound)
    return len(facs) == 1 and facs[0][1] == 1


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots in increasing order."""
    if not p:
        raise ValueError("rational roots of the zero polynomial")
    roots = set()
    for f, _ in squarefree_decomposition(p):
        linears, _ = _rational_roots(primitive_integer(f))
        for a, b in linears:
            roots.add(Fraction(-a, b))
    return sorted(roots)
