from fractions import Fraction

import pytest
import sympy
from conftest import ratfuncs, small_q
from hypothesis import given, settings
from hypothesis import strategies as st

from genquad.diff_poly import DiffPoly, substitute, xi_condition
from genquad.errors import PreconditionError, ValidationError
from genquad.poly import Poly
from genquad.ratfunc import RatFunc
from genquad.riccati import (
    D,
    HomogeneousEq,
    LinearODE,
    OrderZeroReduction,
    reduce_order,
    riccati_of_homogeneous,
    riccati_of_linear,
    riccati_residual,
    verify_log_derivative_correspondence,
)

x = RatFunc.x()
u = DiffPoly.var
X = sympy.Symbol("x")


def c(v):
    return RatFunc.const(v)


def test_D_examples():
    assert D(0) == DiffPoly.const(1)
    assert D(2) == u(1) + u(0) ** 2
    assert D(3).to_str() == "u'' + 3*u*u' + u^3"
    with pytest.raises(ValidationError):
        D(-1)


@pytest.mark.parametrize("n", range(11))
def test_D_tower_law(n):
    P = D(n)
    for coeff in P.terms.values():
        assert coeff.is_constant()
        assert Fraction(coeff.constant_value()).denominator == 1
    assert P.degree() == n
    assert P.homogeneous_part(n) == u(0) ** n
    if n >= 1:
        assert P.order == n - 1


def _to_sympy(r: RatFunc):
    num = sum(sympy.Rational(str(Fraction(cf))) * X**k for k, cf in enumerate(r.num.coeffs))
    den = sum(sympy.Rational(str(Fraction(cf))) * X**k for k, cf in enumerate(r.den.coeffs))
    return num / den


@settings(max_examples=15)
@given(ratfuncs(1), st.integers(1, 6))
def test_rewrite_identity_against_sympy(v, k):
    """d^k/dx^k exp(F) / exp(F) with F' = v equals D_k(v)."""
    F = sympy.Function("F")
    y = sympy.exp(F(X))
    expr = sympy.diff(y, X, k) / y
    vs = _to_sympy(v)
    for j in range(k, 0, -1):
        expr = expr.subs(sympy.Derivative(F(X), (X, j)), sympy.diff(vs, X, j - 1))
    ours = _to_sympy(substitute(D(k), v))
    assert sympy.simplify(expr - ours) == 0


def test_riccati_of_linear_examples():
    a1, a2 = x + 1, 1 / x
    assert riccati_of_linear(LinearODE((a1, a2))).poly == u(1) + u(0) ** 2 + a1 * u(0) + a2
    assert riccati_of_linear(LinearODE((a1,))).poly == u(0) + a1
    R = riccati_of_linear(LinearODE((c(-3), c(2))))
    assert R.to_str() == "u' + u^2 - 3*u + 2 = 0"


def test_riccati_of_homogeneous_examples():
    assert riccati_of_homogeneous(HomogeneousEq(u(0) * u(2) - u(1) ** 2)).poly == u(1)
    assert riccati_of_homogeneous(HomogeneousEq(u(1))).poly == u(0)
    assert riccati_of_homogeneous(HomogeneousEq(u(2) ** 2)).poly == (u(1) + u(0) ** 2) ** 2
    with pytest.raises(ValidationError):
        HomogeneousEq(u(0) ** 2 + u(1))


def test_log_derivative_examples():
    L = LinearODE((c(-3), c(2)))
    assert verify_log_derivative_correspondence(L, c(1))
    assert not verify_log_derivative_correspondence(L, c(0))
    assert riccati_residual(riccati_of_linear(L), c(0)) == 2
    euler = LinearODE((1 / x, -1 / x**2))
    assert verify_log_derivative_correspondence(euler, 1 / x)


def test_from_leading():
    L = LinearODE.from_leading([x**2, x, c(-1)])
    assert L == LinearODE((1 / x, -1 / x**2))
    with pytest.raises(ValidationError):
        LinearODE.from_leading([c(0), c(1)])


def test_reduce_order_examples():
    L = LinearODE((c(-3), c(2)))
    assert reduce_order(L, 1) == LinearODE((c(-1),))
    assert reduce_order(L, 1).to_str() == "w' - w = 0"
    assert reduce_order(L).to_str() == "w' + (2*u1 - 3)*w = 0"
    a1, a2 = x, x + 2
    sym = reduce_order(LinearODE((a1, a2)))
    assert sym.coeffs[0] == 2 * u(0) + a1
    assert isinstance(reduce_order(LinearODE((c(-1),)), 1), OrderZeroReduction)
    with pytest.raises(PreconditionError, match="residual"):
        reduce_order(L, 3)


@st.composite
def linear_odes(draw, max_order=4):
    n = draw(st.integers(1, max_order))
    return LinearODE(tuple(draw(ratfuncs(1)) for _ in range(n)))


@settings(max_examples=20)
@given(linear_odes(3), ratfuncs(1))
def test_reduce_order_on_factored_operators(L, v):
    """``(d - g)(d - u1)`` has ``u1`` as a logarithmic derivative, and ``w = (y/y1)'``
    then satisfies ``w' + (u1 - g) w = 0``."""
    # L' = (d - g) o (d - u1) = d^2 - (u1 + g) d + (g*u1 - u1')
    g = L.coeffs[0]
    u1 = v
    L2 = LinearODE((-(u1 + g), g * u1 - u1.derivative()))
    assert verify_log_derivative_correspondence(L2, u1)
    red = reduce_order(L2, u1)
    # w = (y/y1)' solves w' + (2 u1 - u1 - g) w = w' + (u1 - g) w
    assert red == LinearODE((u1 - g,))


@settings(max_examples=20)
@given(st.lists(small_q, min_size=1, max_size=4).filter(lambda r: len(set(r)) == len(r)))
def test_constant_coefficients_have_characteristic_roots(roots):
    p = Poly([1])
    for r in roots:
        p = p * Poly([-r, 1])
    n = len(roots)
    L = LinearODE(tuple(c(p.coeff(n - k)) for k in range(1, n + 1)))
    for r in roots:
        assert verify_log_derivative_correspondence(L, c(r))


def test_homogeneous_riccati_matches_xi_condition():
    """A term a*y^(n)^m makes both the xi-condition hold and u^m lead the Riccati form."""
    import random

    rng = random.Random(7)
    for _ in range(20):
        m = rng.randint(1, 3)
        n = rng.randint(1, 3)
        P = (c(rng.randint(1, 5)) + x) * u(n) ** m
        for _ in range(3):
            mono = DiffPoly.const(1)
            for _ in range(m):
                mono = mono * u(rng.randint(0, n - 1))
            P = P + c(rng.randint(-3, 3)) * mono
        holds, witness, weight = xi_condition(P)
        assert holds
        R = riccati_of_homogeneous(HomogeneousEq(P))
        top = R.poly.homogeneous_part(weight)
        assert top == u(0) ** weight * witness
