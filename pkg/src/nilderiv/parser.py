"""Reader for vector-field expressions such as ``"(1/2)*x2^2*d1 - x3*d2"``.

Grammar::

    expr   := ['-'] term (('+'|'-') term)*
    term   := power ('*' power)*
    power  := atom ('^' uint)*
    atom   := rational | 'x' uint | 'd' uint | '(' expr ')'
    rational := digits ['/' digits]

Values are typed: an expression is either a scalar (polynomial) or a vector
field.  Products of two fields and powers of fields are rejected, as are sums
mixing a field with a nonzero scalar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from .arith import MultiPoly
from .derivations import Derivation

__all__ = ["ParseError", "parse_vector_field", "parse_scalar", "format_field"]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([xd])(\d+)|(\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, var, dvar, op, end
    value: object
    pos: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:  # only trailing whitespace is left
            break
        start = m.start(1) if m.group(1) else (m.start(2) if m.group(2) else m.start(4))
        if m.group(1):
            num, _, den = m.group(1).partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", *_linecol(text, start))
            toks.append(_Tok("num", Fraction(int(num), int(den) if den else 1), start))
        elif m.group(2):
            toks.append(_Tok("var" if m.group(2) == "x" else "dvar", int(m.group(3)), start))
        else:
            ch = m.group(4)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", *_linecol(text, start))
            toks.append(_Tok("op", ch, start))
        i = m.end()
    toks.append(_Tok("end", None, len(text)))
    return toks


def _linecol(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


Value = Union[MultiPoly, Derivation]


class _Parser:
    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.toks = _tokenize(text)
        self.i = 0

    def error(self, msg: str, tok: _Tok = None):
        tok = tok or self.peek()
        return ParseError(msg, *_linecol(self.text, tok.pos))

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at_op(self, ch: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.value == ch

    def parse(self) -> Value:
        v = self.expr()
        if self.peek().kind != "end":
            raise self.error("unexpected input")
        return v

    def _add(self, a: Value, b: Value, tok: _Tok) -> Value:
        if isinstance(a, Derivation) != isinstance(b, Derivation):
            field, scalar = (a, b) if isinstance(a, Derivation) else (b, a)
            if scalar:
                raise self.error("cannot add a scalar to a vector field", tok)
            return field
        return a + b

    def expr(self) -> Value:
        if self.at_op("-"):
            self.take()
            v = -self.term()
        else:
            v = self.term()
        while self.at_op("+") or self.at_op("-"):
            tok = self.take()
            rhs = self.term()
            v = self._add(v, rhs if tok.value == "+" else -rhs, tok)
        return v

    def term(self) -> Value:
        v = self.power()
        while self.at_op("*"):
            tok = self.take()
            rhs = self.power()
            if isinstance(v, Derivation) and isinstance(rhs, Derivation):
                raise self.error("product of two vector fields", tok)
            v = rhs * v if isinstance(rhs, Derivation) else v * rhs
        return v

    def power(self) -> Value:
        v = self.atom()
        while self.at_op("^"):
            tok = self.take()
            e = self.take()
            if e.kind != "num" or e.value.denominator != 1:
                raise self.error("exponent must be a non-negative integer", e)
            if isinstance(v, Derivation):
                raise self.error("power of a vector field", tok)
            v = v ** int(e.value)
        return v

    def atom(self) -> Value:
        t = self.take()
        n = self.nvars
        if t.kind == "num":
            return MultiPoly.constant(t.value, n)
        if t.kind in ("var", "dvar"):
            if not 1 <= t.value <= n:
                name = ("x" if t.kind == "var" else "d") + str(t.value)
                raise self.error(f"unknown variable {name} (nvars={n})", t)
            if t.kind == "var":
                return MultiPoly.var(t.value - 1, n)
            return Derivation.partial(t.value - 1, n)
        if t.kind == "op" and t.value == "(":
            v = self.expr()
            if not self.at_op(")"):
                raise self.error("expected ')'")
            self.take()
            return v
        raise self.error("unexpected end of input" if t.kind == "end" else "expected a factor", t)


def parse_vector_field(text: str, nvars: int) -> Derivation:
    """Parse a vector field in ``nvars`` variables; ``x1``/``d1`` are the first coordinate."""
    if nvars < 1:
        raise ParseError("nvars must be positive")
    v = _Parser(text, nvars).parse()
    if isinstance(v, MultiPoly):
        if v:
            raise ParseError("expression is a scalar, not a vector field")
        return Derivation.zero(nvars)
    return v


def parse_scalar(text: str, nvars: int) -> MultiPoly:
    v = _Parser(text, nvars).parse()
    if isinstance(v, Derivation):
        raise ParseError("expression is a vector field, not a scalar")
    return v


def format_field(D: Derivation) -> str:
    return D.to_str()
