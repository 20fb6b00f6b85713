"""Text grammar, parser, and canonical printer for polynomials and operators.

Grammar (whitespace insensitive, ``*`` mandatory, precedence from tight to
loose: ``^``, unary ``-``, ``*``, binary ``+``/``-``)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

Names are ``x1 .. xl`` for variables and ``d1 .. dl`` for partials, with
``x``, ``y``, ``z`` accepted as aliases of ``x1``, ``x2``, ``x3`` when the
ambient dimension is at most 3.  Rational literals ``a/b`` bind tighter
than ``*``.  In operator context ``*`` is noncommutative and the result is
normal-ordered; ``parse_poly`` rejects partials outright.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polyring import Poly, Scalar
from .weyl import DiffOp

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*^()/]))")
_ALIASES = {"x": 1, "y": 2, "z": 3}


class ParseError(ValueError):
    """Syntax or validation error, with the offending position attached."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        if m.lastgroup == "int":
            out.append(("int", int(m.group("int")), m.start("int")))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    """Recursive descent over the token list; builds DiffOp values directly."""

    def __init__(self, text: str, nvars: int, allow_partials: bool):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.nvars = nvars
        self.allow_partials = allow_partials

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, at = self.peek()
        if kind != "op" or value != symbol:
            raise ParseError(f"expected {symbol!r}", at)
        return self.advance()

    def parse(self) -> DiffOp:
        value = self.expr()
        kind, tok, at = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {tok!r}", at)
        return value

    def expr(self) -> DiffOp:
        value = self.term()
        while True:
            kind, tok, _ = self.peek()
            if kind == "op" and tok in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if tok == "+" else value - rhs
            else:
                return value

    def term(self) -> DiffOp:
        value = self.factor()
        while True:
            kind, tok, _ = self.peek()
            if kind == "op" and tok == "*":
                self.advance()
                value = value * self.factor()
            else:
                return value

    def factor(self) -> DiffOp:
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "-":
            self.advance()
            return -self.factor()
        return self.power()

    def power(self) -> DiffOp:
        base = self.atom()
        kind, tok, at = self.peek()
        if kind == "op" and tok == "^":
            self.advance()
            kind, exp, at = self.peek()
            if kind == "op" and exp == "-":
                raise ParseError("negative exponent", at)
            if kind != "int":
                raise ParseError("expected a non-negative integer exponent", at)
            self.advance()
            return base ** exp
        return base

    def atom(self) -> DiffOp:
        kind, tok, at = self.advance()
        if kind == "int":
            value: Scalar = tok
            nkind, ntok, nat = self.peek()
            if nkind == "op" and ntok == "/":
                self.advance()
                dkind, den, dat = self.peek()
                if dkind != "int":
                    raise ParseError("expected an integer denominator", dat)
                if den == 0:
                    raise ParseError("zero denominator", dat)
                self.advance()
                value = Fraction(tok, den)
            return DiffOp.from_poly(Poly.constant(self.nvars, value))
        if kind == "name":
            return self.name_atom(tok, at)
        if kind == "op" and tok == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ParseError(f"unexpected token {tok!r}", at)

    def name_atom(self, name: str, at: int) -> DiffOp:
        if name in _ALIASES:
            index = _ALIASES[name]
            if self.nvars > 3:
                raise ParseError(f"alias {name!r} is only available for dimension <= 3", at)
            if index > self.nvars:
                raise ParseError(f"alias {name!r} exceeds dimension {self.nvars}", at)
            return DiffOp.from_poly(Poly.variable(self.nvars, index))
        m = re.fullmatch(r"([xd])(\d+)", name)
        if m is None:
            raise ParseError(f"unknown name {name!r}", at)
        index = int(m.group(2))
        if not 1 <= index <= self.nvars:
            raise ParseError(f"index {index} out of range 1..{self.nvars}", at)
        if m.group(1) == "x":
            return DiffOp.from_poly(Poly.variable(self.nvars, index))
        if not self.allow_partials:
            raise ParseError("partials are not allowed in a polynomial", at)
        return DiffOp.partial(self.nvars, index)


def parse_diffop(text: str, nvars: int) -> DiffOp:
    """Parse operator text to a normally ordered DiffOp."""
    return _Parser(text, nvars, allow_partials=True).parse()


def parse_poly(text: str, nvars: int) -> Poly:
    """Parse polynomial text; any d<k> token is rejected."""
    op = _Parser(text, nvars, allow_partials=False).parse()
    return op.value_at_one()


def _var_name(index: int, nvars: int, aliases: bool) -> str:
    if aliases and nvars <= 3:
        return "xyz"[index - 1]
    return f"x{index}"


def _term_pieces(mono, beta, coeff: Scalar, nvars: int, aliases: bool) -> tuple[bool, str]:
    """Render one distributed term; returns (is_negative, body without sign)."""
    pieces = []
    for i, e in enumerate(mono, start=1):
        if e == 1:
            pieces.append(_var_name(i, nvars, aliases))
        elif e > 1:
            pieces.append(f"{_var_name(i, nvars, aliases)}^{e}")
    for i, e in enumerate(beta, start=1):
        if e == 1:
            pieces.append(f"d{i}")
        elif e > 1:
            pieces.append(f"d{i}^{e}")
    negative = coeff < 0
    mag = -coeff if negative else coeff
    if not pieces:
        return negative, str(mag)
    if mag == 1:
        return negative, "*".join(pieces)
    return negative, f"{mag}*" + "*".join(pieces)


def render(value: Poly | DiffOp, aliases: bool = False) -> str:
    """Canonical text: graded-lex descending terms, highest order first.

    Round trips exactly through the matching parse function.
    """
    if isinstance(value, Poly):
        items = [(m, (0,) * value.nvars, c) for m, c in value.sorted_terms()]
        nvars = value.nvars
    elif isinstance(value, DiffOp):
        items = []
        for beta in sorted(value.terms, key=lambda b: (sum(b), b), reverse=True):
            for m, c in value.terms[beta].sorted_terms():
                items.append((m, beta, c))
        nvars = value.nvars
    else:
        raise TypeError(f"cannot render {type(value).__name__}")
    if not items:
        return "0"
    parts = []
    for n, (mono, beta, coeff) in enumerate(items):
        negative, body = _term_pieces(mono, beta, coeff, nvars, aliases)
        if n == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts)
