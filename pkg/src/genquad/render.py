"""Canonical ASCII rendering shared by the printers and the CLI.

The output grammar is the same one :mod:`genquad.parser` reads, so every
rendered polynomial, rational function or differential polynomial parses
back to an equal object.
"""

from __future__ import annotations

from fractions import Fraction


def fraction_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _as_rational(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    to_fraction = getattr(c, "as_rational", None)
    if to_fraction is not None:
        return to_fraction()
    return None


def single_term(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    depth = 0
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-/ ":
            return False
    return True


def scalar_parts(c):
    """Split a coefficient into ``(negative, magnitude_text, atomic)``.

    ``atomic`` means the text can be glued to a monomial with ``*`` without
    parentheses.
    """
    r = _as_rational(c)
    if r is not None:
        return r < 0, fraction_str(abs(r)), r.denominator == 1
    s = c.to_str()
    if s.startswith("-"):
        mag = (-c).to_str()
        if mag == s[1:]:
            return True, mag, single_term(mag)
    return False, s, single_term(s)


def scalar_str(c) -> str:
    neg, mag, _ = scalar_parts(c)
    return f"-{mag}" if neg else mag


def format_terms(terms) -> str:
    """Join ``(coefficient, monomial_text)`` pairs; monomial ``""`` is the unit."""
    pieces = []
    for coeff, mono in terms:
        neg, mag, atomic = scalar_parts(coeff)
        if mono:
            if mag == "1":
                body = mono
            elif atomic:
                body = f"{mag}*{mono}"
            else:
                body = f"({mag})*{mono}"
        else:
            body = mag
        pieces.append((neg, body))
    if not pieces:
        return "0"
    neg, body = pieces[0]
    out = f"-{body}" if neg else body
    for neg, body in pieces[1:]:
        out += f" - {body}" if neg else f" + {body}"
    return out


def power_str(var: str, k: int) -> str:
    if k == 1:
        return var
    if k < 0:
        return f"{var}^({k})"
    return f"{var}^{k}"


def format_poly(p, var: str = "x") -> str:
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        terms.append((c, "" if k == 0 else power_str(var, k)))
    return format_terms(terms)


def exponent_str(var: str, num: int, den: int) -> str:
    """``var^(num/den)`` in lowest terms with the usual shortcuts."""
    e = Fraction(num, den)
    if e == 0:
        return ""
    if e == 1:
        return var
    if e.denominator == 1:
        return power_str(var, e.numerator)
    return f"{var}^({e.numerator}/{e.denominator})"
