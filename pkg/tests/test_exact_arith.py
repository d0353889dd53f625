"""Polynomials, factorization, number fields and rational functions against sympy."""

from fractions import Fraction

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from conftest import nonzero_polys, polys, ratfuncs, small_q
from hypothesis import given, settings
from hypothesis import strategies as st

from genquad.errors import CapabilityError
from genquad.factor import factor_over_Q, is_irreducible, rational_roots
from genquad.numberfield import NumberField, adjoin_root, factor_over_field, roots_in_field
from genquad.poly import (
    Poly,
    determinant,
    poly_gcd,
    poly_xgcd,
    resultant,
    squarefree_decomposition,
    squarefree_part,
)
from genquad.ratfunc import RatFunc

X = sympy.Symbol("x")


def to_sympy(p: Poly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in map(Fraction, p.coeffs)])) or [0], X)


def from_sympy(sp) -> Poly:
    return Poly([Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs())])


# -- Poly ----------------------------------------------------------------------------


@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Poly()


@given(polys(4), nonzero_polys(3))
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys(4), polys(4))
def test_gcd_matches_sympy(a, b):
    g = poly_gcd(a, b)
    expected = sympy.gcd(to_sympy(a), to_sympy(b))
    if not a and not b:
        assert not g
    else:
        assert g == from_sympy(expected.monic())


@given(nonzero_polys(4), nonzero_polys(4))
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g


@given(nonzero_polys(3), nonzero_polys(3))
def test_resultant_matches_sympy(a, b):
    if a.degree < 1 or b.degree < 1:
        return
    # sympy.resultant has sign slips when one input is a monomial, so the
    # oracle is the determinant of sympy's own Sylvester matrix
    fa, fb = to_sympy(a).as_expr(), to_sympy(b).as_expr()
    assert resultant(a, b) == Fraction(str(sylvester(fa, fb, X, 1).det()))


def test_resultant_example():
    # Res(x^2 - 2, x^2 - 3) = (3 - 2)^2
    assert resultant(Poly([-2, 0, 1]), Poly([-3, 0, 1])) == 1


@given(st.lists(st.lists(small_q, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_sympy(rows):
    expected = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows]).det()
    assert determinant(rows) == Fraction(str(expected))


@given(nonzero_polys(3), nonzero_polys(2))
def test_squarefree_decomposition_reassembles(a, b):
    p = a * b * b
    if p.degree < 1:
        return
    parts = squarefree_decomposition(p)
    prod = Poly([1])
    for f, k in parts:
        prod = prod * f**k
        assert poly_gcd(f, f.derivative()).degree == 0
    assert prod.monic() == p.monic()
    sp = squarefree_part(p)
    assert poly_gcd(sp, sp.derivative()).degree == 0


@pytest.mark.parametrize(
    "coeffs",
    [
        [-1, 0, 0, 0, 1],  # x^4 - 1
        [6, -11, 6, -1],
        [1, 0, 0, 0, 1],  # x^4 + 1, irreducible
        [-2, 0, 0, 0, 0, 0, 1],
        [4, 0, 0, 0, 1],  # x^4 + 4 = (x^2 - 2x + 2)(x^2 + 2x + 2)
        [1, 2, 1, 0, 0, 0, 1, 1],
    ],
)
def test_factor_matches_sympy(coeffs):
    p = Poly(coeffs)
    facs = factor_over_Q(p)
    _, expected = sympy.factor_list(to_sympy(p))
    got = sorted((f.degree, k) for f, k in facs)
    want = sorted((int(sympy.degree(f, X)), k) for f, k in expected)
    assert got == want
    prod = Poly([1])
    for f, k in facs:
        prod = prod * f**k
    assert prod.monic() == p.monic()


def test_rational_roots():
    assert sorted(rational_roots(Poly([-6, 11, -6, 1]))) == [1, 2, 3]
    assert rational_roots(Poly([-2, 0, 1])) == []
    assert is_irreducible(Poly([-2, 0, 1]))


# -- number fields ------------------------------------------------------------------

SQRT2 = NumberField(Poly([-2, 0, 1]))
CUBE = NumberField(Poly([-2, 0, 0, 1]))


@st.composite
def elems(draw, field=CUBE):
    cs = draw(st.lists(small_q, min_size=1, max_size=field.degree))
    return field(Poly(cs))


@settings(max_examples=200)
@given(elems(), elems(), elems())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@given(elems())
def test_minimal_polynomial_annihilates(a):
    m = a.minimal_polynomial()
    acc = CUBE(Poly([0]))
    for k, c in enumerate(m.coeffs):
        acc = acc + a**k * c
    assert acc == 0
    assert is_irreducible(m)


def test_adjoin_tower_to_primitive_element():
    e1 = adjoin_root(None, Poly([-2, 0, 1]))
    e2 = adjoin_root(e1.field, Poly([-3, 0, 1]))
    assert e2.grew and e2.field.degree == 4
    assert e2.root**2 == 3
    assert e2.embed(e1.root) ** 2 == 2
    # a root already present does not grow the field
    again = adjoin_root(e2.field, Poly([-3, 0, 1]))
    assert not again.grew


def test_adjoin_bound():
    with pytest.raises(CapabilityError):
        adjoin_root(None, Poly([-2, 0, 0, 0, 0, 1]), bound=4)


def test_factor_over_extension():
    # x^4 - 2 over Q(sqrt 2) splits as (x^2 - a)(x^2 + a)
    facs = factor_over_field(Poly([-2, 0, 0, 0, 1]), SQRT2)
    assert sorted(f.degree for f, _ in facs) == [2, 2]
    roots = roots_in_field(Poly([-2, 0, 1]), SQRT2)
    assert len(roots) == 2 and all(r * r == 2 for r in roots)


# -- rational functions ---------------------------------------------------------------


@settings(max_examples=200)
@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * a.inverse() == 1


@given(ratfuncs(), ratfuncs())
def test_ratfunc_leibniz(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


def test_ratfunc_render():
    x = RatFunc.x()
    assert (1 / x).to_str() == "1/x"
    assert ((x * x + 1) / (x - 2)).to_str() == "(x^2 + 1)/(x - 2)"


def test_rational_examples():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)
    assert Fraction(2, 4) == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        Fraction(3, 7) / Fraction(0, 1)


def test_factor_errors():
    with pytest.raises(ValueError):
        factor_over_Q(Poly())
    with pytest.raises(CapabilityError):
        factor_over_Q(Poly([1] + [0] * 16 + [1]))
    assert len(factor_over_Q(Poly([1, 0, 1]))) == 1


def test_bivariate_resultants():
    y = Poly([0, 1])
    one, zero = Poly([1]), Poly([0])
    assert resultant(Poly([-y, zero, one]), Poly([Poly([-3]), one])) == Poly([9, -1])
    assert resultant(Poly([zero, one]), Poly([zero, one])) == Poly()
    # fixed sign: rows of p first gives +2y
    assert resultant(Poly([-y, one]), Poly([y, one])) == Poly([0, 2])


def test_adjoin_examples():
    e = adjoin_root(None, Poly([-2, 0, 1]))
    assert e.grew and e.field.minpoly == Poly([-2, 0, 1])
    same = adjoin_root(e.field, Poly([-2, 0, 1]))
    assert not same.grew and same.field == e.field
    with pytest.raises(CapabilityError):
        adjoin_root(None, Poly([1] + [0] * 15 + [1]), bound=12)


@pytest.mark.parametrize("m", [[-2, 0, 1], [1, 1, 1], [-2, 0, 0, 1], [1, 0, 0, 0, 1]])
def test_adjoined_root_is_a_root(m):
    m = Poly(m)
    base = adjoin_root(None, Poly([-3, 0, 1])).field
    e = adjoin_root(base, m)
    acc = 0
    for k, c in enumerate(m.coeffs):
        acc = acc + e.root**k * c
    assert acc == 0
