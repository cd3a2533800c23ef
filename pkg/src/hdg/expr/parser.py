"""Recursive-descent parser for the quaternion expression language.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = atom [ "^" [ "-" ] INTEGER ] ;
    atom    = NUMBER | "pi" | UNIT | VARIABLE
            | FUNCTION "(" expr { "," expr } ")" | "(" expr ")" ;

Products keep the written order; ``a / b`` is ``a * inverse(b)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..errors import HDGError
from .ast import (
    CARTESIAN_UNITS, FUNCTIONS, POLAR_UNITS, VARIABLES,
    Ast, BinOp, Call, Neg, Num, Pow, Unit, Var,
)

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
)


class ParseError(HDGError, ValueError):
    """Malformed source.  ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        self.reason = message
        hint = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    offset: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", byte_pos)
        text = m.group()
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, text, byte_pos))
        byte_pos += len(text.encode("utf-8"))
        pos = m.end()
    tokens.append(Token("end", "", byte_pos))
    return tokens


_ATOM_START = frozenset(["NUMBER", "VARIABLE", "UNIT", "FUNCTION", "(", "-", "+"])


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            raise self.error(f"expected {text!r}", [text])
        return self.advance()

    def error(self, message: str, expected=()) -> ParseError:
        found = self.tok.text or "end of input"
        return ParseError(f"{message}, found {found!r}", self.tok.offset, expected)

    def parse(self) -> Ast:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error("unexpected token", ["+", "-", "*", "/", "^", "end of input"])
        return node

    def expr(self) -> Ast:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Ast:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Ast:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Ast:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            t = self.tok
            if t.kind != "num":
                raise self.error("exponent must be an integer literal", ["INTEGER"])
            if not t.text.isdigit():
                raise ParseError(f"non-integer exponent {t.text!r}", t.offset, ["INTEGER"])
            self.advance()
            return Pow(base, sign * int(t.text))
        return base

    def atom(self) -> Ast:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                return self.call(t)
            if t.text == "pi":
                return Num(math.pi)
            if t.text in CARTESIAN_UNITS or t.text in POLAR_UNITS:
                return Unit(t.text)
            if t.text in VARIABLES:
                return Var(t.text)
            raise ParseError(f"unknown name {t.text!r}", t.offset, ["VARIABLE", "UNIT", "FUNCTION"])
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("expected an operand", _ATOM_START)

    def call(self, name_tok: Token) -> Ast:
        self.expect("(")
        args = [self.expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        arity = FUNCTIONS[name_tok.text]
        if len(args) != arity:
            raise ParseError(
                f"{name_tok.text}() takes {arity} argument(s), got {len(args)}", name_tok.offset
            )
        return Call(name_tok.text, tuple(args))


def parse(src: str) -> Ast:
    """Parse source text into an immutable expression tree."""
    return _Parser(src).parse()
