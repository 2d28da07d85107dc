"""Text syntax for terms and formulas.

The printed form is fully parenthesised::

    Term    ::= "0" | "S(" Term ")" | "(" Term "+" Term ")" | "(" Term "*" Term ")" | "v" Nat
    Formula ::= "(" Term "=" Term ")" | "~" Formula | "(" Formula "|" Formula ")"
              | "(" Formula "&" Formula ")" | "E v" Nat " " Formula | "A v" Nat " " Formula

The parser also accepts redundant or missing parentheses around infix terms,
e.g. ``(S(0) + 0 = S(0))``, with ``*`` binding tighter than ``+`` which binds
tighter than ``=``.  It is an operator-precedence parser with explicit
stacks, so nesting depth is limited only by memory.
"""

from __future__ import annotations

import re

from .syntax import (ZERO, Add, And, Eq, Exists, Forall, Formula, Mul, Node, Not, Or, Succ,
                     SyntaxTypeError, Term, Var)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        self.message = message
        super().__init__(f"{message} at byte {self.offset}")


_TOKEN = re.compile(r"\s*(?:(v\d+)|([0SEA()+*=|&~]))")

_BINARY = {"*": 4, "+": 3, "=": 2, "&": 1, "|": 1}
_PREFIX = {"~", "E", "A"}
_BUILD = {"*": Mul, "+": Add, "=": Eq, "&": And, "|": Or}


def _tokens(text: str):
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            return
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(1) if m.group(1) else m.start(2)
        yield (m.group(1) or m.group(2)), start
        pos = m.end()


def parse(text: str) -> Node:
    """Parse a term or a formula."""
    operands: list = []
    ops: list = []          # (kind, pos, payload)
    expect_operand = True
    toks = list(_tokens(text))
    i = 0

    def reduce_top():
        kind, pos, payload = ops.pop()
        try:
            if kind == "~":
                operands.append(Not(operands.pop()))
            elif kind == "E":
                operands.append(Exists(payload, operands.pop()))
            elif kind == "A":
                operands.append(Forall(payload, operands.pop()))
            else:
                r = operands.pop()
                l = operands.pop()
                operands.append(_BUILD[kind](l, r))
        except SyntaxTypeError as exc:
            raise ParseError(str(exc), text, pos) from None

    def reduce_while(prec):
        while ops:
            kind = ops[-1][0]
            if kind in _PREFIX or (kind in _BINARY and _BINARY[kind] >= prec):
                reduce_top()
            else:
                break

    while i < len(toks):
        tok, pos = toks[i]
        i += 1
        if tok.startswith("v") or tok == "0":
            if not expect_operand:
                raise ParseError(f"unexpected {tok!r}", text, pos)
            operands.append(ZERO if tok == "0" else Var(int(tok[1:])))
            expect_operand = False
        elif tok == "S":
            if not expect_operand or i >= len(toks) or toks[i][0] != "(":
                raise ParseError("expected 'S('", text, pos)
            ops.append(("S(", pos, None))
            i += 1
        elif tok == "(":
            if not expect_operand:
                raise ParseError("unexpected '('", text, pos)
            ops.append(("(", pos, None))
        elif tok in _PREFIX:
            if not expect_operand:
                raise ParseError(f"unexpected {tok!r}", text, pos)
            payload = None
            if tok != "~":
                if i >= len(toks) or not toks[i][0].startswith("v"):
                    raise ParseError(f"expected a variable after {tok!r}", text, pos)
                payload = int(toks[i][0][1:])
                i += 1
            ops.append((tok, pos, payload))
        elif tok in _BINARY:
            if expect_operand:
                raise ParseError(f"missing operand before {tok!r}", text, pos)
            reduce_while(_BINARY[tok])
            ops.append((tok, pos, None))
            expect_operand = True
        elif tok == ")":
            if expect_operand:
                raise ParseError("missing operand before ')'", text, pos)
            reduce_while(0)
            if not ops:
                raise ParseError("unbalanced ')'", text, pos)
            kind, open_pos, _ = ops.pop()
            if kind == "S(":
                try:
                    operands.append(Succ(operands.pop()))
                except SyntaxTypeError as exc:
                    raise ParseError(str(exc), text, open_pos) from None
    if expect_operand:
        raise ParseError("unexpected end of input", text, len(text))
    reduce_while(0)
    if ops:
        raise ParseError("unclosed '('", text, ops[-1][1])
    (result,) = operands
    return result


def parse_formula(text: str) -> Formula:
    node = parse(text)
    if not isinstance(node, Formula):
        raise ParseError("expected a formula, got a term", text, 0)
    return node


def parse_term(text: str) -> Term:
    node = parse(text)
    if not isinstance(node, Term):
        raise ParseError("expected a term, got a formula", text, 0)
    return node


def parse_lines(text: str) -> list:
    """One formula per non-blank line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line))
    return out
