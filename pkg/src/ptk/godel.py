"""Gödel numbering by tagged Cantor pairing.

    code(x) = pair(tag(x), payload(x)),   pair(a, b) = (a + b)(a + b + 1)/2 + b

Tags 0-4 are terms, 5-10 formulas, so the two sorts have disjoint ranges.
Payloads: 0 for Zero, the index for a variable, the child's code for S and ~,
pair(code l, code r) for binary nodes, pair(var, code body) for quantifiers.
Zero must carry payload 0; any other number whose decoding fails is a
non-code.
"""

from __future__ import annotations

from math import isqrt
from typing import Optional

from .syntax import (ZERO, Add, And, Eq, Exists, Forall, Formula, Mul, Node, Not, Or, Succ,
                     Term, Var, Zero)

#: refuse to build codes longer than this many bits
MAX_CODE_BITS = 1 << 22


class CodeTooLarge(OverflowError):
    pass


def pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


_BINARY = {3: Add, 4: Mul, 5: Eq, 7: Or, 8: And}


def godel_encode(x: Node) -> int:
    """Code of a term or formula (iterative; shared subtrees encoded once)."""
    memo: dict = {}
    stack = [x]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        kids = node.children()
        todo = [k for k in kids if id(k) not in memo]
        if todo:
            stack.extend(todo)
            continue
        stack.pop()
        t = type(node)
        if t is Zero:
            payload = 0
        elif t is Var:
            payload = node.index
        elif t is Succ or t is Not:
            payload = memo[id(kids[0])]
        elif t is Exists or t is Forall:
            payload = pair(node.var, memo[id(kids[0])])
        elif node.tag in _BINARY and type(node) is _BINARY[node.tag]:
            payload = pair(memo[id(kids[0])], memo[id(kids[1])])
        else:
            raise TypeError(f"no Gödel code for {type(node).__name__}")
        code = pair(node.tag, payload)
        if code.bit_length() > MAX_CODE_BITS:
            raise CodeTooLarge("Gödel code exceeds the size limit")
        memo[id(node)] = code
    return memo[id(x)]


def godel_decode(code: int) -> Optional[Node]:
    """Inverse of :func:`godel_encode`; ``None`` when ``code`` codes nothing."""
    if not isinstance(code, int) or code < 0:
        return None
    memo: dict = {}
    stack = [code]
    while stack:
        c = stack[-1]
        if c in memo:
            stack.pop()
            continue
        tag, payload = unpair(c)
        if tag == 0:
            memo[c] = ZERO if payload == 0 else None
        elif tag == 1:
            memo[c] = Var(payload)
        elif tag in (2, 6):
            if payload not in memo:
                stack.append(payload)
                continue
            sub = memo[payload]
            sort = Term if tag == 2 else Formula
            memo[c] = (Succ if tag == 2 else Not)(sub) if isinstance(sub, sort) else None
        elif tag in _BINARY:
            l, r = unpair(payload)
            missing = [k for k in (l, r) if k not in memo]
            if missing:
                stack.extend(missing)
                continue
            a, b = memo[l], memo[r]
            sort = Term if tag in (3, 4, 5) else Formula
            if isinstance(a, sort) and isinstance(b, sort):
                memo[c] = _BINARY[tag](a, b)
            else:
                memo[c] = None
        elif tag in (9, 10):
            var, body = unpair(payload)
            if body not in memo:
                stack.append(body)
                continue
            sub = memo[body]
            memo[c] = (Exists if tag == 9 else Forall)(var, sub) if isinstance(sub, Formula) else None
        else:
            memo[c] = None
        stack.pop()
    return memo[code]


def is_sentence_code(code: int) -> bool:
    node = godel_decode(code)
    return isinstance(node, Formula) and node.is_sentence
