"""Truncated Puiseux series in descending powers of a transcendental θ.

A series stores terms ``c_j * θ^(j/p)`` for integer ``j`` above a floor; the
floor says what is *not* known: the true value may differ from the stored
terms by anything of exponent at most ``floor/p``.  ``floor=None`` means the
stored terms are the exact value.  Every operation propagates floors
pessimistically, so a coefficient is only reported when the inputs justify it.

Multiplication floor.  For descending series the error of ``a*b`` comes from
``A*E_b + E_a*B + E_a*E_b``, whose exponents are bounded by
``max(lead(a) + floor(b), lead(b) + floor(a))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from genquad.diff_core import ExpIntegral, Integral, derivative
from genquad.errors import TruncationError, ValidationError
from genquad.poly import coerce
from genquad.render import exponent_str, format_terms

DEFAULT_INVERSE_DEPTH = 8


@dataclass(frozen=True)
class ZeroMarker:
    """No term survives above ``floor``: the value is 0 up to ``O(θ^floor)``."""

    floor: Fraction | None

    def to_str(self, var: str = "t") -> str:
        if self.floor is None:
            return "0"
        return f"O({var}^({_frac(self.floor)}))"


def _frac(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def _is_zero(c) -> bool:
    return c == 0


class PuiseuxSeries:
    __slots__ = ("p", "terms", "floor", "regime")
    _compound = True

    def __init__(self, terms=None, p: int = 1, floor: int | None = None, regime=None, _normalize=True):
        if p < 1:
            raise ValidationError("ramification must be >= 1")
        clean = {}
        for j, c in (terms or {}).items():
            if floor is not None and j <= floor:
                continue
            c = coerce(c)
            if not _is_zero(c):
                clean[j] = c
        self.p = p
        self.terms = clean
        self.floor = floor
        self.regime = regime
        if _normalize:
            self._normalize()

    def _normalize(self):
        g = self.p
        for j in self.terms:
            g = gcd(g, j)
        if self.floor is not None:
            g = gcd(g, self.floor)
        if g > 1:
            self.terms = {j // g: c for j, c in self.terms.items()}
            self.p //= g
            if self.floor is not None:
                self.floor //= g

    # -- constructors ----------------------------------------------------
    @classmethod
    def constant(cls, c, regime=None, floor: Fraction | None = None) -> "PuiseuxSeries":
        return cls.from_exponents({Fraction(0): c}, floor=floor, regime=regime)

    @classmethod
    def theta(cls, regime=None) -> "PuiseuxSeries":
        return cls({1: Fraction(1)}, 1, None, regime)

    @classmethod
    def monomial(cls, c, exponent, regime=None) -> "PuiseuxSeries":
        return cls.from_exponents({Fraction(exponent): c}, regime=regime)

    @classmethod
    def from_exponents(cls, mapping, floor=None, regime=None) -> "PuiseuxSeries":
        """Build from ``{Fraction exponent: coefficient}`` and an optional exponent floor."""
        exps = [Fraction(e) for e in mapping]
        if floor is not None:
            exps.append(Fraction(floor))
        p = 1
        for e in exps:
            p = lcm(p, e.denominator)
        terms = {int(Fraction(e) * p): c for e, c in mapping.items()}
        fl = None
        if floor is not None:
            fl = int(Fraction(floor) * p)
        return cls(terms, p, fl, regime)

    # -- queries -----------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.floor is None

    @property
    def floor_exponent(self) -> Fraction | None:
        return None if self.floor is None else Fraction(self.floor, self.p)

    def exponents(self):
        """Known ``(exponent, coefficient)`` pairs in descending order."""
        return [(Fraction(j, self.p), self.terms[j]) for j in sorted(self.terms, reverse=True)]

    def coefficient(self, exponent) -> object:
        e = Fraction(exponent)
        if self.floor is not None and e <= self.floor_exponent:
            raise TruncationError(
                f"coefficient of exponent {e} is below the known floor {self.floor_exponent}",
                required_floor=e,
                floor=self.floor_exponent,
            )
        if (e * self.p).denominator != 1:
            return Fraction(0)
        return self.terms.get(int(e * self.p), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms and self.floor is None

    def lead_bound(self) -> Fraction | None:
        """Largest exponent that may carry a nonzero term (known or not)."""
        cands = []
        if self.terms:
            cands.append(Fraction(max(self.terms), self.p))
        if self.floor is not None:
            cands.append(self.floor_exponent)
        return max(cands) if cands else None

    def lifted(self, p: int) -> "PuiseuxSeries":
        """The same series written with ramification ``p`` (a multiple of ``self.p``)."""
        if p % self.p:
            raise ValueError("target ramification must be a multiple")
        k = p // self.p
        fl = None if self.floor is None else self.floor * k
        return PuiseuxSeries({j * k: c for j, c in self.terms.items()}, p, fl, self.regime, _normalize=False)

    def truncate(self, floor_exponent) -> "PuiseuxSeries":
        """Forget everything at or below ``floor_exponent``."""
        f = Fraction(floor_exponent)
        if self.floor is not None and self.floor_exponent >= f:
            return self
        return PuiseuxSeries.from_exponents(
            {e: c for e, c in self.exponents() if e > f}, floor=f, regime=self.regime
        )

    def map_coeffs(self, fn) -> "PuiseuxSeries":
        return PuiseuxSeries({j: fn(c) for j, c in self.terms.items()}, self.p, self.floor, self.regime)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, PuiseuxSeries):
            if self.regime is not None and other.regime is not None and self.regime != other.regime:
                raise ValidationError("series live under different derivation regimes")
            return other
        if getattr(other, "_compound", False):
            return None
        return PuiseuxSeries.constant(other, self.regime)

    def _regime(self, other):
        return self.regime if self.regime is not None else other.regime

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = lcm(self.p, o.p)
        a, b = self.lifted(p), o.lifted(p)
        terms = dict(a.terms)
        for j, c in b.terms.items():
            terms[j] = terms[j] + c if j in terms else c
        floors = [f for f in (a.floor, b.floor) if f is not None]
        return PuiseuxSeries(terms, p, max(floors) if floors else None, self._regime(o))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries({j: -c for j, c in self.terms.items()}, self.p, self.floor, self.regime)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        regime = self._regime(o)
        if self.is_zero() or o.is_zero():
            return PuiseuxSeries({}, 1, None, regime)
        p = lcm(self.p, o.p)
        a, b = self.lifted(p), o.lifted(p)
        cands = []
        la, lb = a.lead_bound(), b.lead_bound()
        if b.floor is not None:
            cands.append(la + b.floor_exponent)
        if a.floor is not None:
            cands.append(lb + a.floor_exponent)
        floor = max(cands) if cands else None
        fl = None if floor is None else int(floor * p)
        terms: dict = {}
        for ja, ca in a.terms.items():
            for jb, cb in b.terms.items():
                j = ja + jb
                if fl is not None and j <= fl:
                    continue
                c = ca * cb
                terms[j] = terms[j] + c if j in terms else c
        return PuiseuxSeries(terms, p, fl, regime)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = PuiseuxSeries.constant(1, self.regime)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self, depth: int | None = None) -> "PuiseuxSeries":
        """Multiplicative inverse by the geometric series.

        ``depth`` bounds how far below the leading exponent an exact input is
        expanded; a truncated input is expanded down to its own precision.
        """
        if not self.terms:
            raise TruncationError(
                "cannot invert a series that is zero at the current truncation",
                floor=self.floor_exponent,
            )
        top = max(self.terms)
        lead_e = Fraction(top, self.p)
        if self.floor is not None and self.floor_exponent >= lead_e:
            raise TruncationError("leading term is not determined", floor=self.floor_exponent)
        c = self.terms[top]
        inv_c = 1 / c
        # s = c θ^l (1 + r), r has only negative exponents
        r = PuiseuxSeries(
            {j - top: v * inv_c for j, v in self.terms.items() if j != top},
            self.p,
            None if self.floor is None else self.floor - top,
            self.regime,
        )
        if self.floor is not None:
            target = r.floor_exponent
        else:
            target = -Fraction(depth if depth is not None else DEFAULT_INVERSE_DEPTH)
        acc = PuiseuxSeries.constant(1, self.regime)
        if r.terms or r.floor is not None:
            r_lead = r.lead_bound()
            power = PuiseuxSeries.constant(1, self.regime)
            k = 0
            while True:
                k += 1
                power = (power * (-r)).truncate(target)
                if not power.terms:
                    break
                acc = acc + power
                if k * r_lead <= target:
                    break
            acc = acc.truncate(target)
        head = PuiseuxSeries.from_exponents({-lead_e: inv_c}, regime=self.regime)
        return head * acc

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        if getattr(other, "_compound", False):
            return NotImplemented
        return self * (1 / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = self._coerce(other)
            except Exception:
                return NotImplemented
            if other is None:
                return NotImplemented
        return (self.p, self.terms, self.floor) == (other.p, other.terms, other.floor)

    __hash__ = None

    # -- differential structure ------------------------------------------------
    def derivative(self) -> "PuiseuxSeries":
        return derive_series(self)

    # -- rendering ---------------------------------------------------------------
    def to_str(self, var: str = "t") -> str:
        pieces = [(c, exponent_str(var, e.numerator, e.denominator)) for e, c in self.exponents()]
        body = format_terms(pieces) if pieces else ""
        if self.floor is None:
            return body or "0"
        tail = f"O({var}^({_frac(self.floor_exponent)}))"
        return f"{body} + {tail}" if body else tail

    def __repr__(self):
        return f"PuiseuxSeries({self.to_str()})"


def derive_series(s: PuiseuxSeries) -> PuiseuxSeries:
    """Termwise derivation with θ' = f (integral) or θ' = f·θ (exponential).

    The floor is unchanged: the unknown tail lies at exponents at most the
    floor, and both rules map such a tail to exponents at most the floor.
    """
    regime = s.regime
    if regime is None:
        raise ValidationError("series has no derivation regime")
    f = regime.f
    terms: dict = {}

    def put(j, c):
        if _is_zero(c):
            return
        terms[j] = terms[j] + c if j in terms else c

    for j, c in s.terms.items():
        dc = derivative(c)
        k = Fraction(j, s.p)
        if isinstance(regime, Integral):
            put(j, dc)
            if j:
                put(j - s.p, k * c * f)
        elif isinstance(regime, ExpIntegral):
            put(j, dc + k * f * c if j else dc)
        else:
            raise ValidationError(f"unknown regime {regime!r}")
    return PuiseuxSeries(terms, s.p, s.floor, regime)


def series_derivatives(s: PuiseuxSeries, count: int) -> list[PuiseuxSeries]:
    out = [s]
    for _ in range(count):
        out.append(derive_series(out[-1]))
    return out


def substitute_into_diffpoly(T, s: PuiseuxSeries, required_floor=None) -> PuiseuxSeries:
    """``T(s, s', ..., s^(N))`` with floors tracked.

    When ``required_floor`` is given, the result must be known down to that
    exponent; otherwise a :class:`TruncationError` reports the deficit.
    """
    from genquad.diff_poly import evaluate_at

    derivs = series_derivatives(s, max(T.order, 0))
    one = PuiseuxSeries.constant(1, s.regime)
    out = evaluate_at(T, derivs, one)
    if required_floor is not None and out.floor is not None:
        need = Fraction(required_floor)
        if out.floor_exponent > need:
            raise TruncationError(
                f"series truncation too shallow: result known only above exponent "
                f"{out.floor_exponent}, {need} required (deficit {out.floor_exponent - need})",
                required_floor=need,
                floor=out.floor_exponent,
            )
    return out


def leading_term(s: PuiseuxSeries):
    """``(exponent, coefficient)`` of the top stored term, or a :class:`ZeroMarker`."""
    if not s.terms:
        return ZeroMarker(s.floor_exponent)
    j = max(s.terms)
    return Fraction(j, s.p), s.terms[j]
