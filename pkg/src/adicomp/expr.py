"""Tiny tokenizer and expression parser shared by ring element parsing and the scenario DSL.

Expressions are ordinary arithmetic over integers and names::

    3*x^2*y - 1/2*x + (y - 1)**3

The parser produces a small AST; evaluation against a ring happens elsewhere.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple


class ParseError(ValueError):
    """Syntax error carrying a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9']*)
  | (?P<op>\*\*|->|==|[-+*/^(),=\[\]:{}<>.;|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, op, nl, eof
    text: str
    line: int
    col: int


def tokenize(text: str, keep_newlines: bool = False) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            if keep_newlines:
                tokens.append(Token("nl", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# AST nodes: ("int", value), ("name", str), ("neg", node), ("add"|"sub"|"mul"|"div"|"pow", a, b)
Node = Tuple


class TokenStream:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "op" or tok.text != text:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return tok

    def expect_name(self) -> Token:
        tok = self.next()
        if tok.kind != "name":
            shown = tok.text or "end of input"
            raise ParseError(f"expected identifier, found {shown!r}", tok.line, tok.col)
        return tok


def parse_expression(ts: TokenStream) -> Node:
    node = _term(ts)
    while ts.at("+") or ts.at("-"):
        op = ts.next().text
        rhs = _term(ts)
        node = ("add" if op == "+" else "sub", node, rhs)
    return node


def _term(ts: TokenStream) -> Node:
    node = _unary(ts)
    while ts.at("*") or ts.at("/"):
        op = ts.next().text
        rhs = _unary(ts)
        node = ("mul" if op == "*" else "div", node, rhs)
    return node


def _unary(ts: TokenStream) -> Node:
    if ts.at("-"):
        ts.next()
        return ("neg", _unary(ts))
    if ts.at("+"):
        ts.next()
        return _unary(ts)
    return _power(ts)


def _power(ts: TokenStream) -> Node:
    base = _atom(ts)
    if ts.at("^") or ts.at("**"):
        ts.next()
        tok = ts.peek()
        exp = _unary(ts)
        if exp[0] != "int":
            raise ParseError("exponent must be a nonnegative integer literal", tok.line, tok.col)
        return ("pow", base, exp)
    return base


def _atom(ts: TokenStream) -> Node:
    tok = ts.next()
    if tok.kind == "int":
        return ("int", int(tok.text))
    if tok.kind == "name":
        return ("name", tok.text, tok.line, tok.col)
    if tok.kind == "op" and tok.text == "(":
        node = parse_expression(ts)
        ts.expect(")")
        return node
    shown = tok.text or "end of input"
    raise ParseError(f"unexpected token {shown!r} in expression", tok.line, tok.col)


def parse_standalone(text: str) -> Node:
    ts = TokenStream(tokenize(text))
    node = parse_expression(ts)
    tok = ts.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return node
