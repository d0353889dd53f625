"""Leading-term analysis, the weighted-degree gate and the solvability pipeline.

Leading-term analysis looks at ``T = u^n - Q`` with ``deg Q < n`` evaluated
on a Puiseux series ``s = z_k θ^(k/p) + ...``:

* ``k/p > 0``: ``s^n`` dominates, so ``T(s)`` has leading term
  ``z_k^n θ^(n k/p)``, which nothing can cancel;
* ``k/p < 0``: every non-constant monomial of ``T`` has negative degree, so
  the constant term ``T_0`` survives;
* ``k/p = 0``: only the degree-0 coefficient ``z_0`` matters and ``T(z_0)``
  is computed exactly.

Derivations never raise the leading exponent in either regime, which is why
the derivatives inside ``Q`` cannot interfere.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from genquad.diff_poly import (
    ONE,
    DiffPoly,
    substitute,
    xi_condition,
    xi_weight,
)
from genquad.errors import CapabilityError, TruncationError, ValidationError
from genquad.factor import DEFAULT_FACTOR_BOUND
from genquad.numberfield import (
    DEFAULT_EXTENSION_BOUND,
    NumberFieldElem,
    adjoin_root,
    factor_over_field,
    field_of,
    roots_in_field,
)
from genquad.poly import Poly, poly_gcd
from genquad.puiseux import PuiseuxSeries, ZeroMarker, leading_term, substitute_into_diffpoly
from genquad.ratfunc import RatFunc, as_ratfunc
from genquad.render import scalar_str
from genquad.riccati import (
    HomogeneousEq,
    LinearODE,
    RiccatiEq,
    reduce_order,
    riccati_of_homogeneous,
    riccati_of_linear,
)

log = logging.getLogger(__name__)

SEARCH_CLASSES = ("constants", "euler", "rational2")


# -- equation shape u^n = Q ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class EquationForm2:
    """``u^n = Q(u, u', ...)`` with ``deg Q < n``."""

    n: int
    Q: DiffPoly

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if self.Q and self.Q.degree() >= self.n:
            raise ValidationError(f"deg Q = {self.Q.degree()} is not below n = {self.n}")

    def __eq__(self, other):
        if not isinstance(other, EquationForm2):
            return NotImplemented
        return self.n == other.n and self.Q == other.Q

    __hash__ = None

    @property
    def T(self) -> DiffPoly:
        return DiffPoly.var(0, self.n) - self.Q

    @property
    def T0(self) -> RatFunc:
        return self.T.constant_term()

    def to_str(self) -> str:
        lhs = "u" if self.n == 1 else f"u^{self.n}"
        return f"{lhs} = {self.Q.to_str('u')}"


@dataclass(frozen=True)
class PositiveDegreeImpossible:
    witness: object
    exponent: Fraction
    kind: str = "positive-degree-impossible"


@dataclass(frozen=True)
class NegativeDegreeImpossible:
    witness: object
    kind: str = "negative-degree-impossible"


@dataclass(frozen=True)
class DegreeZeroCandidate:
    z0: object
    residual: object
    note: str | None = None
    kind: str = "degree-zero-candidate"

    @property
    def solves(self) -> bool:
        return not self.residual


LeadingTermVerdict = PositiveDegreeImpossible | NegativeDegreeImpossible | DegreeZeroCandidate


def _attach_regime(s: PuiseuxSeries, regime):
    if regime is None:
        return s
    if s.regime is not None and s.regime != regime:
        raise ValidationError("series regime does not match the requested regime")
    return PuiseuxSeries(s.terms, s.p, s.floor, regime)


def leading_term_analysis(E: EquationForm2, s: PuiseuxSeries, regime=None) -> LeadingTermVerdict:
    """Classify the candidate series ``s`` for ``u^n = Q`` by its leading degree."""
    s = _attach_regime(s, regime)
    T = E.T
    T0 = E.T0
    if not T0:
        return DegreeZeroCandidate(
            RatFunc.const(0), RatFunc.const(0), "T0 = 0, so u = 0 is a solution"
        )
    lt = leading_term(s)
    if isinstance(lt, ZeroMarker):
        if lt.floor is None:
            return NegativeDegreeImpossible(T0)
        raise TruncationError(
            "series has no known terms; its leading degree cannot be classified",
            floor=lt.floor,
        )
    k, zk = lt
    if k > 0:
        need = E.n * k
        value = substitute_into_diffpoly(T, s, required_floor=need - Fraction(1, 10**9))
        top = leading_term(value)
        witness = zk**E.n
        if isinstance(top, ZeroMarker) or top[0] != need or top[1] != witness:
            raise AssertionError("leading term of T(s) is not z_k^n; is deg Q < n?")
        return PositiveDegreeImpossible(witness, need)
    if k < 0:
        rest = substitute_into_diffpoly(T - T0, s)
        bound = rest.lead_bound()
        if bound is not None and bound >= 0:
            raise TruncationError(
                "cannot confirm that T - T0 has negative degree at this truncation",
                floor=rest.floor_exponent,
            )
        return NegativeDegreeImpossible(T0)
    residual = substitute(T, as_ratfunc(zk) if not isinstance(zk, RatFunc) else zk)
    return DegreeZeroCandidate(zk, residual)


# -- weighted-degree gate --------------------------------------------------------


@dataclass(frozen=True)
class XiGateResult:
    holds: bool
    witness: RatFunc
    weight: int
    riccati: RiccatiEq | None = None
    form: EquationForm2 | None = None
    shape_ok: bool | None = None
    note: str | None = None


def xi_gate(H) -> XiGateResult:
    """Weighted-degree test, then the ``u^w = Q`` shape check on the Riccati form."""
    if not isinstance(H, HomogeneousEq):
        H = HomogeneousEq(H)
    holds, witness, w = xi_condition(H.P)
    if not holds:
        return XiGateResult(False, witness, w)
    R = riccati_of_homogeneous(H)
    top = R.poly.homogeneous_part(w)
    expected = DiffPoly.var(0, w) * witness if w else DiffPoly.const(witness)
    if w == 0:
        return XiGateResult(True, witness, w, R, None, False, "top weight 0: the Riccati form is a nonzero constant")
    Q = -(R.poly - expected) / witness
    shape = top == expected and (not Q or Q.degree() < w)
    form = EquationForm2(w, Q) if shape else None
    return XiGateResult(True, witness, w, R, form, shape)


# -- candidate search -------------------------------------------------------------


def _coefficient_field(R: RiccatiEq):
    fields = set()
    for c in R.poly.terms.values():
        f = c.coefficient_field()
        if f is not None:
            fields.add(f)
    if len(fields) > 1:
        raise CapabilityError("coefficients from several number fields")
    return fields.pop() if fields else None


def _constraint_poly(R: RiccatiEq, derivs) -> Poly:
    """Polynomial in ``c`` whose roots are the admissible constants.

    ``derivs[k]`` is ``u^(k)`` as a polynomial in ``c`` with RatFunc coefficients.
    The substituted equation must vanish identically in ``x``.
    """
    from genquad.diff_poly import evaluate_at

    one = Poly([RatFunc.const(1)])
    value = evaluate_at(R.poly, derivs, one)
    if not isinstance(value, Poly):
        value = Poly([value])
    if not value:
        return Poly()
    den = Poly([1])
    for c in value.coeffs:
        den = den * (c.den // poly_gcd(den, c.den))
    nums = [(c * RatFunc(den)).num for c in value.coeffs]
    height = max(p.degree for p in nums) + 1
    g = Poly()
    for k in range(height):
        row = Poly([p.coeff(k) for p in nums])
        g = row if not g else poly_gcd(g, row)
    return g


def _roots_with_fields(g: Poly, base, bound: int, factor_bound: int) -> list:
    """Roots of ``g``: for each irreducible factor, those in the field one root generates."""
    if not g:
        raise CapabilityError("every constant solves this equation; the search class is degenerate")
    out = []
    for f, _ in factor_over_field(g, base, factor_bound):
        if f.degree == 1:
            out.append(-f.coeff(0) / f.lc)
            continue
        ext = adjoin_root(base, f, bound=bound, factor_bound=factor_bound)
        lifted = f.map_coeffs(ext.embed) if ext.grew else f
        out.extend(roots_in_field(lifted, ext.field))
    return out


def _constants(R: RiccatiEq, bound, factor_bound):
    zero = Poly()
    derivs = lambda k: Poly([RatFunc.const(0), RatFunc.const(1)]) if k == 0 else zero  # noqa: E731
    g = _constraint_poly(R, derivs)
    return [RatFunc.const(c) for c in _roots_with_fields(g, _coefficient_field(R), bound, factor_bound)]


def _euler(R: RiccatiEq, bound, factor_bound):
    x = RatFunc.x()
    from math import factorial

    def derivs(k):
        return Poly([RatFunc.const(0), x ** (-(k + 1)) * ((-1) ** k * factorial(k))])

    g = _constraint_poly(R, derivs)
    return [as_ratfunc(c) / x for c in _roots_with_fields(g, _coefficient_field(R), bound, factor_bound)]


def _classical_coefficients(R: RiccatiEq):
    """``(a1, a2)`` when ``R`` is ``u' + u^2 + a1 u + a2``, else ``None``."""
    allowed = {((1, 1),), ((0, 2),), ((0, 1),), ONE}
    if set(R.poly.terms) - allowed:
        return None
    if R.poly.coefficient(((1, 1),)) != 1 or R.poly.coefficient(((0, 2),)) != 1:
        return None
    return R.poly.coefficient(((0, 1),)), R.poly.constant_term()


def _rational2(R: RiccatiEq, bound, factor_bound):
    from genquad.rational_riccati import rational_solutions_order2

    coeffs = _classical_coefficients(R)
    if coeffs is None:
        raise ValidationError(
            "the rational2 search needs a classical Riccati equation u' + u^2 + a1*u + a2 = 0 "
            "(a linear equation of order 2)"
        )
    return rational_solutions_order2(*coeffs, bound=bound, factor_bound=factor_bound)


def _order_one(R: RiccatiEq):
    """``u + a1 = 0`` has the single solution ``u = -a1``."""
    if R.poly.order <= 0 and set(R.poly.terms) <= {((0, 1),), ONE} and R.poly.coefficient(((0, 1),)) == 1:
        return [-R.poly.constant_term()]
    return None


_SEARCHERS = {"constants": _constants, "euler": _euler, "rational2": _rational2}


def canonical_key(u: RatFunc):
    s = u.to_str()
    return (len(s.lstrip("-")), s.lstrip("-"), s.startswith("-"))


def _clean(u: RatFunc) -> RatFunc:
    return u.to_Q() if u.is_over_Q() else u


def find_riccati_solutions(
    R: RiccatiEq,
    search="constants",
    bound: int = DEFAULT_EXTENSION_BOUND,
    factor_bound: int = DEFAULT_FACTOR_BOUND,
) -> list[RatFunc]:
    """Solutions of ``R`` inside the given search class(es), each verified by substitution."""
    classes = [search] if isinstance(search, str) else list(search)
    found: list[RatFunc] = []
    for cls in classes:
        if cls not in _SEARCHERS:
            raise ValidationError(f"unknown search class {cls!r}; choose from {', '.join(SEARCH_CLASSES)}")
        for u in _SEARCHERS[cls](R, bound, factor_bound):
            u = _clean(u)
            if substitute(R.poly, u):
                raise AssertionError(f"candidate {u.to_str()} failed verification")
            if all(u != f for f in found):
                found.append(u)
    found.sort(key=canonical_key)
    return found


# -- pipeline ----------------------------------------------------------------------


@dataclass
class PipelineStep:
    equation: LinearODE
    riccati: RiccatiEq
    candidates: list
    searched: list
    notes: list = field(default_factory=list)
    chosen: RatFunc | None = None
    reduced: object = None


@dataclass
class SolvabilityReport:
    equation: LinearODE
    steps: list
    status: str
    xi_condition: XiGateResult | None = None

    @property
    def u_chain(self) -> list:
        return [s.chosen for s in self.steps if s.chosen is not None]

    def to_json(self) -> dict:
        first = self.steps[0]
        out = {
            "equation": self.equation.to_str(),
            "riccati": first.riccati.to_str(),
            "candidates": [candidate_json(u) for u in first.candidates],
            "status": self.status,
            "chain": [_step_json(s) for s in self.steps],
        }
        if first.reduced is not None:
            out["reduced"] = first.reduced.to_str()
        if self.xi_condition is not None:
            out["xi_condition"] = {
                "holds": self.xi_condition.holds,
                "witness": self.xi_condition.witness.to_str(),
            }
        return out


def candidate_json(u: RatFunc) -> dict:
    s = u.to_str()
    out = {"u": s, "verified": True, "y1": f"exp(int {s} dx)"}
    F = field_of(*u.num.coeffs, *u.den.coeffs)
    if F is not None:
        out["field"] = F.minpoly.to_str(F.name)
    return out


def _step_json(s: PipelineStep) -> dict:
    out = {
        "equation": s.equation.to_str(),
        "riccati": s.riccati.to_str(),
        "searched": s.searched,
        "candidates": [candidate_json(u) for u in s.candidates],
        "chosen": None if s.chosen is None else s.chosen.to_str(),
        "reduced": None if s.reduced is None else s.reduced.to_str(),
    }
    if s.notes:
        out["notes"] = list(s.notes)
    return out


@dataclass(frozen=True)
class PipelineConfig:
    search: tuple = SEARCH_CLASSES
    bound: int = DEFAULT_EXTENSION_BOUND
    factor_bound: int = DEFAULT_FACTOR_BOUND
    max_depth: int = 8


def solve_by_quadratures(L: LinearODE, config: PipelineConfig | None = None) -> SolvabilityReport:
    """Look for ``y1 = exp(int u)``, reduce the order, repeat.

    Only equations whose coefficients stay in Q(x) (possibly with algebraic
    constants) are searched again; a failed search never claims the
    equation is unsolvable.
    """
    config = config or PipelineConfig()
    steps = []
    current = L
    status = "candidate-not-found-in-search-class"
    for _ in range(config.max_depth):
        R = riccati_of_linear(current)
        notes = []
        direct = _order_one(R)
        if direct is not None:
            cands = [_clean(u) for u in direct]
            searched = ["order1"]
        else:
            classes = []
            for c in config.search:
                if c == "rational2" and _classical_coefficients(R) is None:
                    notes.append("rational2 skipped: not a classical Riccati equation")
                    continue
                if c == "rational2" and not all(v.is_over_Q() for v in R.poly.terms.values()):
                    notes.append("rational2 skipped: coefficients are not in Q(x)")
                    continue
                classes.append(c)
            cands = []
            for c in classes:
                try:
                    got = find_riccati_solutions(R, c, config.bound, config.factor_bound)
                except CapabilityError as exc:
                    notes.append(f"{c}: {exc}")
                    continue
                cands.extend(u for u in got if all(u != v for v in cands))
            cands.sort(key=canonical_key)
            searched = classes
        step = PipelineStep(current, R, cands, searched, notes)
        steps.append(step)
        if not cands:
            status = "candidate-not-found-in-search-class"
            break
        step.chosen = cands[0]
        if current.order == 1:
            status = "fully-resolved"
            break
        reduced = reduce_order(current, step.chosen)
        step.reduced = reduced
        if not reduced.is_rational():
            status = "candidate-chain-partial"
            break
        current = reduced
    else:
        status = "candidate-chain-partial"
    return SolvabilityReport(L, steps, status)
