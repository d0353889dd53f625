import pytest
from conftest import ratfuncs
from hypothesis import given, settings
from hypothesis import strategies as st

from genquad.diff_poly import (
    DiffPoly,
    degree,
    derivative_name,
    homogeneous_part,
    mono_mul,
    substitute,
    total_derivative,
    xi_condition,
    xi_weight,
)
from genquad.errors import PreconditionError
from genquad.ratfunc import RatFunc
from genquad.riccati import D

x = RatFunc.x()
u = DiffPoly.var


@st.composite
def monomials(draw, max_order=3):
    orders = draw(st.lists(st.integers(0, max_order), min_size=0, max_size=3, unique=True))
    return tuple(sorted((o, draw(st.integers(1, 3))) for o in orders))


@st.composite
def diffpolys(draw, max_terms=3):
    out = DiffPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        m = draw(monomials(2))
        c = draw(ratfuncs(1))
        out = out + DiffPoly({m: c}) if c else out
    return out


def test_total_derivative_examples():
    assert total_derivative(u(0)) == u(1)
    assert total_derivative(u(0) ** 2) == 2 * u(0) * u(1)
    assert total_derivative(x * u(1)) == u(1) + x * u(2)
    assert total_derivative(x * u(1)).to_str() == "x*u'' + u'"


def test_degree_and_parts():
    T = u(0) ** 2 + x * u(1) + 1
    assert degree(T) == 2
    assert homogeneous_part(T, 1) == x * u(1)
    assert homogeneous_part(D(3), 3) == u(0) ** 3
    with pytest.raises(PreconditionError):
        degree(DiffPoly())


def test_xi_examples():
    assert xi_weight(((1, 2), (3, 1))) == 5
    holds, witness, w = xi_condition(u(0) * u(2) - u(1) ** 2)
    assert not holds and not witness and w == 2
    holds, witness, _ = xi_condition(u(0) * u(2) + u(1) ** 2)
    assert holds and witness == 2
    for m in (1, 2, 3):
        P = (x + 1) * u(2) ** m + u(0) ** m
        assert xi_condition(P)[0]
    with pytest.raises(PreconditionError):
        xi_condition(DiffPoly())


def test_substitution_examples():
    assert substitute(u(1) + u(0) ** 2, 1 / x) == 0
    v = (x + 2) / (x - 1)
    assert substitute(u(0), v) == v
    assert substitute(u(1) + u(0) ** 2 - 3 * u(0) + 2, 1) == 0


def test_rendering():
    assert [derivative_name("u", k) for k in range(6)] == ["u", "u'", "u''", "u'''", "u^(4)", "u^(5)"]
    assert (u(4) ** 2 + u(0)).to_str() == "(u^(4))^2 + u"
    assert D(3).to_str() == "u'' + 3*u*u' + u^3"


@settings(max_examples=60)
@given(diffpolys(), diffpolys())
def test_total_derivative_is_a_derivation(a, b):
    assert total_derivative(a + b) == total_derivative(a) + total_derivative(b)
    assert total_derivative(a * b) == total_derivative(a) * b + a * total_derivative(b)


@settings(max_examples=60)
@given(diffpolys())
def test_derivative_does_not_raise_degree(T):
    dT = total_derivative(T)
    if T and dT:
        assert degree(dT) <= degree(T)


@given(monomials(), monomials())
def test_xi_weight_additive(m1, m2):
    assert xi_weight(mono_mul(m1, m2)) == xi_weight(m1) + xi_weight(m2)


@settings(max_examples=40)
@given(diffpolys(2), diffpolys(2), ratfuncs(1))
def test_substitute_is_a_ring_homomorphism(a, b, v):
    assert substitute(a + b, v) == substitute(a, v) + substitute(b, v)
    assert substitute(a * b, v) == substitute(a, v) * substitute(b, v)
