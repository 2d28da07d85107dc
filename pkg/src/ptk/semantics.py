"""Truth in the standard model.

``val`` and ``term_eval`` compute term values with Python ints.  ``tr0`` is
the quantifier-free truth predicate; ``std_truth`` extends it to quantified
sentences by searching witnesses up to a bound and answering UNKNOWN when
the search cannot decide.
"""

from __future__ import annotations

import enum
from typing import Iterable, Optional

from .report import Report
from .syntax import (Add, And, Assignment, AssignmentError, Eq, Exists, Forall, Formula, Mul,
                     Not, Or, Succ, Term, Var, apply_assignment, ext_key, numeral, subst_closed,
                     to_text)


class Truth3(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, b: Optional[bool]) -> "Truth3":
        return cls.UNKNOWN if b is None else (cls.TRUE if b else cls.FALSE)

    def __str__(self):
        return self.value


class SemanticError(ValueError):
    """A semantic precondition (closedness, quantifier-freeness) failed."""


def _value(t: Term, a: Assignment) -> int:
    if t._val is not None:
        return t._val
    closed = not t._fv
    depth = 0
    node = t
    while type(node) is Succ:
        node = node.arg
        depth += 1
        if node._val is not None:
            break
    kind = type(node)
    if node._val is not None:
        base = node._val
    elif kind is Var:
        base = a[node.index]
    elif kind is Add:
        base = _value(node.left, a) + _value(node.right, a)
    elif kind is Mul:
        base = _value(node.left, a) * _value(node.right, a)
    else:
        raise TypeError(f"not an arithmetical term: {type(node).__name__}")
    if not node._fv:
        node._val = base
    v = base + depth
    if closed:
        t._val = v
    return v


def val(t: Term) -> int:
    """Value of a closed term."""
    if not isinstance(t, Term):
        raise TypeError("val expects a term")
    if t._fv:
        raise SemanticError(f"val needs a closed term, {to_text(t)} has free variables")
    return _value(t, {})


def term_eval(t: Term, a: Assignment) -> int:
    missing = t._fv - a.keys()
    if missing:
        raise AssignmentError(missing)
    return _value(t, a)


def _spine(f, cls):
    """Operands of a same-connective chain, left to right."""
    out = []
    stack = [f]
    while stack:
        node = stack.pop()
        if type(node) is cls:
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def _kleene(f: Formula, a: Assignment, bound: int) -> Optional[bool]:
    kind = type(f)
    if kind is Eq:
        return _value(f.left, a) == _value(f.right, a)
    if kind is Not:
        r = _kleene(f.arg, a, bound)
        return None if r is None else not r
    if kind is Or or kind is And:
        absorbing = kind is Or
        unknown = False
        for part in _spine(f, kind):
            r = _kleene(part, a, bound)
            if r is absorbing:
                return absorbing
            if r is None:
                unknown = True
        return None if unknown else not absorbing
    if kind is Exists or kind is Forall:
        target = kind is Exists
        inner = dict(a)
        for n in range(bound + 1):
            inner[f.var] = n
            if _kleene(f.body, inner, bound) is target:
                return target
        return None
    raise TypeError(f"not an arithmetical formula: {type(f).__name__}")


def satisfies(f: Formula, a: Assignment, bound: int = 0) -> Truth3:
    """Strong-Kleene satisfaction of ``f`` under ``a`` with bounded quantifiers."""
    missing = f._fv - a.keys()
    if missing:
        raise AssignmentError(missing)
    return Truth3.of(_kleene(f, a, bound))


def tr0(s: Formula) -> bool:
    """Truth of a quantifier-free sentence."""
    if not isinstance(s, Formula):
        raise TypeError("tr0 expects a formula")
    if s._fv:
        raise SemanticError(f"tr0 needs a sentence: {to_text(s)}")
    if s._quants:
        raise SemanticError(f"tr0 needs a quantifier-free sentence: {to_text(s)}")
    return _kleene(s, {}, 0)


def std_truth(s: Formula, bound: int) -> Truth3:
    if s._fv:
        raise SemanticError(f"std_truth needs a sentence: {to_text(s)}")
    return Truth3.of(_kleene(s, {}, bound))


def _term_vector(t: Term, var: int, values: list, a: Assignment, cache: dict):
    """Value of ``t`` at each entry of ``values`` (for ``var``), or one int
    when ``t`` does not mention ``var``."""
    if var not in t._fv:
        return _value(t, a)
    key = id(t)
    if key in cache:
        return cache[key]
    kind = type(t)
    if kind is Var:
        out = values
    elif kind is Succ:
        inner = _term_vector(t.arg, var, values, a, cache)
        out = [x + 1 for x in inner]
    else:
        op = (lambda x, y: x + y) if kind is Add else (lambda x, y: x * y)
        l = _term_vector(t.left, var, values, a, cache)
        r = _term_vector(t.right, var, values, a, cache)
        if isinstance(l, int):
            out = [op(l, y) for y in r]
        elif isinstance(r, int):
            out = [op(x, r) for x in l]
        else:
            out = [op(x, y) for x, y in zip(l, r)]
    cache[key] = out
    return out


def _positions(vector: list, cache: dict) -> dict:
    """Inverse index of a value vector: value -> bitmask of positions."""
    key = id(vector)
    if key not in cache:
        index: dict = {}
        for pos, x in enumerate(vector):
            index[x] = index.get(x, 0) | (1 << pos)
        cache[key] = index
    return cache[key]


def batch_satisfies(f: Formula, var: int, values, a: Assignment = None,
                    bound: int = 0) -> list:
    """``satisfies(f, a + {var: x}, bound)`` for every ``x`` in ``values``.

    All assignments are evaluated together: each subformula yields a pair
    of bitmasks (positions where it is true, positions where it is false),
    and the connectives combine masks in strong-Kleene fashion.  Subformulas
    without ``var`` free are evaluated once.
    """
    values = list(values)
    a = dict(a or {})
    missing = f._fv - a.keys() - {var}
    if missing:
        raise AssignmentError(missing)
    full = (1 << len(values)) - 1
    vectors: dict = {}
    inverse: dict = {}

    def const(r):
        return (full, 0) if r is True else (0, full) if r is False else (0, 0)

    def masks(g):
        if var not in g._fv:
            return const(_kleene(g, a, bound))
        kind = type(g)
        if kind is Eq:
            l = _term_vector(g.left, var, values, a, vectors)
            r = _term_vector(g.right, var, values, a, vectors)
            if isinstance(l, int):
                l, r = r, l
            if isinstance(r, int):
                t = _positions(l, inverse).get(r, 0)
            else:
                t = 0
                for pos, (x, y) in enumerate(zip(l, r)):
                    if x == y:
                        t |= 1 << pos
            return t, full ^ t
        if kind is Not:
            t, fl = masks(g.arg)
            return fl, t
        if kind is Or or kind is And:
            parts = [masks(p) for p in _spine(g, kind)]
            if kind is Or:
                t = 0
                fl = full
                for pt, pf in parts:
                    t |= pt
                    fl &= pf
            else:
                t = full
                fl = 0
                for pt, pf in parts:
                    t &= pt
                    fl |= pf
            return t, fl
        # a quantifier with var free: fall back to one evaluation per value
        t = fl = 0
        env = dict(a)
        for pos, x in enumerate(values):
            env[var] = x
            r = _kleene(g, env, bound)
            if r is True:
                t |= 1 << pos
            elif r is False:
                fl |= 1 << pos
        return t, fl

    t, fl = masks(f)
    return [Truth3.TRUE if t >> pos & 1 else Truth3.FALSE if fl >> pos & 1 else Truth3.UNKNOWN
            for pos in range(len(values))]


def check_partial_truth_predicate(T0: Iterable[Formula], probe: Iterable[Formula],
                                  bound: int = 2) -> Report:
    """Check that ``T0`` behaves as a partial compositional truth predicate.

    The checked domain is ``probe`` together with ``T0``.  Three things are
    verified: the domain is closed under direct subformulas (quantifier
    instances with numerals up to ``bound``), every domain member obeys the
    compositional clause for its root, and membership in ``T0`` respects
    extensional equivalence.
    """
    T = set(T0)
    domain = sorted(set(probe) | T, key=to_text)
    dom = set(domain)
    report = Report("partial-truth-predicate")
    for s in domain:
        if s._fv:
            report.check(False, s, "sentence", "formula with free variables")
    domain = [s for s in domain if not s._fv]

    def instances(q):
        return [subst_closed(q.body, q.var, numeral(n)) for n in range(bound + 1)]

    for s in domain:
        kind = type(s)
        if kind is Eq:
            continue
        subs = instances(s) if kind in (Exists, Forall) else list(s.children())
        for sub in subs:
            report.check(sub in dom, {"closure": s, "missing": sub}, True, False)

    for s in domain:
        kind = type(s)
        inside = s in T
        if kind is Eq:
            want = val(s.left) == val(s.right)
            clause = "axiom 1"
        elif kind is Not:
            want = s.arg not in T
            clause = "axiom 2"
        elif kind is Or:
            want = s.left in T or s.right in T
            clause = "axiom 3"
        elif kind is And:
            want = s.left in T and s.right in T
            clause = "axiom 3 (dual)"
        elif kind is Exists:
            want = any(i in T for i in instances(s))
            clause = "axiom 4"
        elif kind is Forall:
            want = all(i in T for i in instances(s))
            clause = "axiom 4 (dual)"
        else:
            raise TypeError(type(s).__name__)
        report.check(inside == want, {"clause": clause, "sentence": s}, want, inside)

    groups: dict = {}
    for s in domain:
        groups.setdefault(ext_key(s, {}), []).append(s)
    for members in groups.values():
        if len(members) > 1:
            verdicts = {m in T for m in members}
            report.check(len(verdicts) == 1, {"axiom 5": members}, "uniform membership",
                         sorted(to_text(m) for m in members if m in T))
    return report


__all__ = ["Truth3", "SemanticError", "val", "term_eval", "tr0", "std_truth", "satisfies",
           "batch_satisfies",
           "check_partial_truth_predicate", "apply_assignment"]
