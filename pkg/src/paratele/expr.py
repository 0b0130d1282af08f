"""Expression parsing and deterministic rendering.

The grammar covers exact rational expressions over declared variables:
integers, identifiers, + - * / ^ with nonnegative integer literal exponents,
parentheses, unary minus.  Precedence is ^ > unary - > * / > + -, with left
associativity for the binary operators.  Operators in Dt use the same
grammar with Dt as an extra symbol restricted to numerators
(coefficient-left normal form, e.g. "8*t^3*Dt^3 - 12*t^2*Dt^2 + 18*t*Dt - 15").
"""

from __future__ import annotations

import re
from typing import Optional

from .ore import OreOp
from .ratfun import MPoly, Rat, RatFun


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownVariableError(ExprSyntaxError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__(f"unknown variable {name!r}", line, col)
        self.name = name


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text: str, line: int = 1):
    tokens = []
    pos = 0
    col0 = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stray = text[pos:].lstrip()
            if not stray:
                break
            raise ExprSyntaxError(
                f"unexpected character {stray[0]!r}", line, pos - col0 + 1
            )
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), line, m.start(1) - col0 + 1))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), line, m.start(2) - col0 + 1))
        else:
            tokens.append(("op", m.group(3), line, m.start(3) - col0 + 1))
        pos = m.end()
    tokens.append(("end", "", line, len(text) - col0 + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, var_index: dict, nvars: int):
        self.tokens = tokens
        self.i = 0
        self.var_index = var_index
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, line, col = self.next()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", line, col)

    def parse(self) -> RatFun:
        value = self.expr()
        kind, val, line, col = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", line, col)
        return value

    def expr(self) -> RatFun:
        value = self.term()
        while True:
            kind, val, _, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> RatFun:
        value = self.unary()
        while True:
            kind, val, line, col = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero:
                        raise ExprSyntaxError("division by zero", line, col)
                    value = value / rhs
            else:
                return value

    def unary(self) -> RatFun:
        kind, val, _, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return -self.unary()
        return self.power()

    def power(self) -> RatFun:
        base = self.atom()
        kind, val, _, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, line, col = self.next()
            if kind != "int":
                raise ExprSyntaxError(
                    "exponent must be a nonnegative integer literal", line, col
                )
            return base ** int(val)
        return base

    def atom(self) -> RatFun:
        kind, val, line, col = self.next()
        if kind == "int":
            return RatFun.const(Rat(int(val)), self.nvars)
        if kind == "name":
            if val not in self.var_index:
                raise UnknownVariableError(val, line, col)
            return RatFun.var(self.var_index[val], self.nvars)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ExprSyntaxError(f"unexpected {val!r}" if val else "unexpected end of input", line, col)


def parse_expr(text: str, var_names: list, line: int = 1) -> RatFun:
    """Parse an exact rational expression over the declared variables."""
    var_index = {name: i for i, name in enumerate(var_names)}
    parser = _Parser(_tokenize(text, line), var_index, len(var_names))
    return parser.parse()


def parse_operator(text: str, var_names: list, line: int = 1) -> OreOp:
    """Parse an operator in Dt written in coefficient-left normal form."""
    ext = list(var_names) + ["Dt"]
    var_index = {name: i for i, name in enumerate(ext)}
    parser = _Parser(_tokenize(text, line), var_index, len(ext))
    value = parser.parse()
    nv = len(var_names)
    dt = nv
    if value.den.involves(dt):
        raise ExprSyntaxError("Dt may not appear in a denominator", line, 1)
    den = MPoly({e[:nv]: c for e, c in value.den.terms.items()}, nv)
    coeffs_ext = value.num.coeffs_in(dt)
    order = max(coeffs_ext) if coeffs_ext else -1
    coeffs = []
    for k in range(order + 1):
        p = coeffs_ext.get(k)
        if p is None:
            coeffs.append(RatFun.zero(nv))
        else:
            num = MPoly({e[:nv]: c for e, c in p.terms.items()}, nv)
            coeffs.append(RatFun(num, den))
    return OreOp(coeffs, nv)


# -- rendering -------------------------------------------------------------------


def _default_names(nvars: int) -> list:
    return ["t"] + [f"x{i}" for i in range(1, nvars)]


def _render_rat(c: Rat) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _render_monomial(e: tuple, names: list) -> str:
    parts = []
    for v, k in enumerate(e):
        if k == 1:
            parts.append(names[v])
        elif k > 1:
            parts.append(f"{names[v]}^{k}")
    return "*".join(parts)


def render_mpoly(p: MPoly, names: Optional[list] = None) -> str:
    if names is None:
        names = _default_names(p.nvars)
    if p.is_zero:
        return "0"
    chunks = []
    for e, c in p.sorted_terms():
        mono = _render_monomial(e, names)
        mag = abs(c)
        if not mono:
            body = _render_rat(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_render_rat(mag)}*{mono}"
        chunks.append(("-" if c < 0 else "+", body))
    sign, body = chunks[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def render_ratfun(f: RatFun, names: Optional[list] = None) -> str:
    if names is None:
        names = _default_names(f.nvars)
    num = render_mpoly(f.num, names)
    if f.den.is_const and f.den.const_value() == 1:
        return num
    den = render_mpoly(f.den, names)
    if len(f.num.terms) > 1:
        num = f"({num})"
    return f"{num}/({den})"


def _coeff_chunk(c: RatFun, power: int, names: list) -> tuple:
    """(sign, body) for one operator term coeff*Dt^power."""
    dt = "" if power == 0 else ("Dt" if power == 1 else f"Dt^{power}")
    if c.is_poly and len(c.num.terms) == 1:
        ((e, val),) = c.num.terms.items()
        mono = _render_monomial(e, names)
        mag = abs(val)
        pieces = []
        if mag != 1 or (not mono and not dt):
            pieces.append(_render_rat(mag))
        if mono:
            pieces.append(mono)
        if dt:
            pieces.append(dt)
        return ("-" if val < 0 else "+", "*".join(pieces))
    body = render_ratfun(c, names)
    if not (body.startswith("(") and body.endswith(")")):
        body = f"({body})"
    return "+", f"{body}*{dt}" if dt else body


def render_oreop(op: OreOp, names: Optional[list] = None) -> str:
    if names is None:
        names = _default_names(op.nvars)
    if op.is_zero:
        return "0"
    chunks = []
    for i in range(op.order, -1, -1):
        c = op.coeff(i)
        if c.is_zero:
            continue
        chunks.append(_coeff_chunk(c, i, names))
    sign, body = chunks[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def render_helement(e, names: Optional[list] = None) -> str:
    if names is None:
        names = _default_names(e.nvars)
    if e.is_zero:
        return "0"
    chunks = []
    for c, t in e.parts:
        body = render_ratfun(c, names)
        if len(c.num.terms) > 1 and not body.startswith("("):
            body = f"({body})"
        if t.is_trivial:
            chunks.append(body)
        else:
            chunks.append(f"({body})*{t.label}" if "/" in body or " " in body else f"{body}*{t.label}")
    return " + ".join(chunks)
