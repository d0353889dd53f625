"""Tokenizer, AST and evaluator for the ASCII equation language.

Grammar (ASCII only)::

    equation := expr '=' expr
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := atom ('^' exponent)?
    atom     := NUMBER | NAME PRIME* | NAME '^(' INT ')' | '(' expr ')'
    exponent := INT | '(' ['-'] INT ')'

``NAME^(k)`` is a derivative of order ``k`` when ``NAME`` is one of the
caller's differential variables, and a power otherwise.  The AST is a
nest of tuples so that callers can evaluate it into any ring.
"""

from __future__ import annotations

import re
from fractions import Fraction

from genquad.errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\^\(|[-+*/^()='])|(?P<bad>\S))"
)


def tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group("bad"):
            ch = m.group("bad")
            if ord(ch) > 127:
                raise ParseError(f"non-ASCII character {ch!r}", m.start("bad"))
            raise ParseError(f"unexpected character {ch!r}", m.start("bad"))
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind), m.start(kind)))
                break
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, derivative_vars):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.derivative_vars = frozenset(derivative_vars)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", tok[2])
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            return ("neg", self.unary())
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def _int(self):
        tok = self.take()
        sign = 1
        if tok[1] == "-":
            sign = -1
            tok = self.take()
        if tok[0] != "num" or "." in tok[1]:
            raise ParseError("expected an integer exponent", tok[2])
        return sign * int(tok[1])

    def power(self):
        node = self.atom()
        tok = self.peek()
        if tok[1] == "^":
            self.take()
            if self.peek()[1] == "(":
                self.take()
                k = self._int()
                self.expect(")")
            else:
                k = self._int()
            node = ("pow", node, k, tok[2])
        elif tok[1] == "^(":
            self.take()
            k = self._int()
            self.expect(")")
            if node[0] == "var" and node[1] in self.derivative_vars and node[2] == 0:
                if k < 0:
                    raise ParseError("negative derivative order", tok[2])
                node = ("var", node[1], k, node[3])
            else:
                node = ("pow", node, k, tok[2])
        if self.peek()[1] in ("^", "^("):
            raise ParseError("chained exponents need parentheses", self.peek()[2])
        return node

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return ("num", Fraction(val))
        if kind == "name":
            order = 0
            while self.peek()[1] == "'":
                self.take()
                order += 1
            return ("var", val, order, pos)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = val or "end of input"
        raise ParseError(f"unexpected {found!r}", pos)


def parse_expression(text: str, derivative_vars=()):
    p = _Parser(text, derivative_vars)
    node = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return node


def parse_equation(text: str, derivative_vars=()):
    """Parse ``lhs = rhs``; a missing ``=`` is a syntax error."""
    p = _Parser(text, derivative_vars)
    lhs = p.expr()
    tok = p.peek()
    if tok[1] != "=":
        if tok[0] == "end":
            raise ParseError("equation needs '='", tok[2])
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    p.take()
    rhs = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return lhs, rhs


def names_in(node) -> set:
    kind = node[0]
    if kind == "num":
        return set()
    if kind == "var":
        return {node[1]}
    if kind in ("neg",):
        return names_in(node[1])
    if kind == "pow":
        return names_in(node[1])
    return names_in(node[1]) | names_in(node[2])


def evaluate(node, leaf, number=lambda c: c):
    """Evaluate an AST; ``leaf(name, order, pos)`` supplies variable values."""
    kind = node[0]
    if kind == "num":
        return number(node[1])
    if kind == "var":
        return leaf(node[1], node[2], node[3])
    if kind == "neg":
        return -evaluate(node[1], leaf, number)
    if kind == "pow":
        base = evaluate(node[1], leaf, number)
        k = node[2]
        if k < 0:
            try:
                return number(Fraction(1)) / (base ** (-k))
            except TypeError:
                raise ParseError("negative power of a non-invertible expression", node[3]) from None
        return base**k
    a = evaluate(node[1], leaf, number)
    b = evaluate(node[2], leaf, number)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise AssertionError(kind)
