"""Tiny expression language for vector fields on the disc.

Accepts arithmetic over the complex variable ``z``, the time variable
``t``, the imaginary unit ``i``, and numeric literals:

    expr     := term  (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := atom  (('^' | '**') exponent)?
    exponent := ('-')? INTEGER
    atom     := NUMBER | 'i' | 'z' | 't' | '(' expr ')'

Exponents are integers only.  Evaluation is numpy-compatible, so compiled
fields vectorize over arrays of z.  Anything else (function calls, other
names) is rejected with the offending position.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ArgumentError
from .generators import FieldSpec

_TOKEN = re.compile(r"""
    (?P<num>   \d+\.\d*(?:[eE][+-]?\d+)? | \.\d+(?:[eE][+-]?\d+)? |
               \d+(?:[eE][+-]?\d+)? )
  | (?P<name>  [A-Za-z_]\w* )
  | (?P<op>    \*\* | [-+*/^()] )
  | (?P<ws>    \s+ )
""", re.VERBOSE)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ArgumentError(
                f"field expression: unexpected character {src[pos]!r} "
                f"at position {pos}")
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.k = 0
        self.uses_t = False

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def fail(self, what: str):
        kind, text, pos = self.peek()
        got = "end of input" if kind == "end" else repr(text)
        raise ArgumentError(
            f"field expression: expected {what}, got {got} at position {pos}")

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            node = ("mul" if op == "*" else "div", node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.next()
            return ("neg", self.unary())
        if self.peek()[1] == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.next()
            sign = 1
            if self.peek()[1] == "-":
                self.next()
                sign = -1
            kind, text, pos = self.peek()
            if kind != "num" or not text.isdigit():
                self.fail("an integer exponent")
            self.next()
            node = ("pow", node, sign * int(text))
        return node

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.next()
            return ("num", float(text))
        if kind == "name":
            self.next()
            if text == "i":
                return ("num", 1j)
            if text == "z":
                return ("var", "z")
            if text == "t":
                self.uses_t = True
                return ("var", "t")
            raise ArgumentError(
                f"field expression: unknown name {text!r} at position {pos} "
                "(only z, t, i are defined)")
        if text == "(":
            self.next()
            node = self.expr()
            if self.peek()[1] != ")":
                self.fail("')'")
            self.next()
            return node
        self.fail("a number, z, t, i, or '('")

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("end of expression")
        return node


def _eval(node, z, t):
    op = node[0]
    if op == "num":
        return node[1]
    if op == "var":
        return z if node[1] == "z" else t
    if op == "neg":
        return -_eval(node[1], z, t)
    if op == "pow":
        return _eval(node[1], z, t) ** node[2]
    a = _eval(node[1], z, t)
    b = _eval(node[2], z, t)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    return a / b


def parse_field(src: str):
    """Parse to an AST; returns (ast, uses_t)."""
    if not src or not src.strip():
        raise ArgumentError("field expression is empty")
    p = _Parser(src)
    ast = p.parse()
    return ast, p.uses_t


def compile_field(src: str) -> FieldSpec:
    """Compile an expression into a FieldSpec, vectorized over z."""
    ast, uses_t = parse_field(src)
    if uses_t:
        def fn(z, t):
            return np.asarray(_eval(ast, z, t)) + 0j * z
        return FieldSpec(fn, time_dependent=True)

    def fn(z):
        return np.asarray(_eval(ast, z, 0.0)) + 0j * z
    return FieldSpec(fn, time_dependent=False)
