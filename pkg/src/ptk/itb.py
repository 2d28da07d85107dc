"""Two-sorted formulas over numbers and indices, and their translation into
one-sorted arithmetic.

Index-sort nodes live in the same tree as arithmetical ones: ``Eq``, ``Not``,
``Or``, ``And``, ``Exists`` and ``Forall`` keep their number-sort meaning,
and the classes below add index variables, the index order ``b < c``, the
predicate ``T(b, t)`` and index quantifiers.  Index variables share the
integer name space with number variables; a translation refuses formulas
where one index is used for both sorts.

``iota_translate(f, a, phi, gamma)`` realises the a-th interpretation: index
quantifiers range over ``d_a(x) = x <= a & phi(x)``, ``<`` becomes the
arithmetical order, and ``T(b, t)`` unfolds into a case distinction over the
sentences of ``gamma`` whose inner disjunction runs over j < a and calls the
j-th interpretation.  The i-th entry of ``gamma`` (counting from 1) is named
by the numeral i.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence

from .constructions import big_or_left, big_or_or_false, le_formula, lt_formula
from .syntax import (FALSE, And, Eq, Exists, Forall, Formula, Imp, Node, Not, Or, Term, Var,
                     _Quantifier, bound_vars, numeral, subformulas, subst_closed, subst_var,
                     to_text)

#: default caps on the interpretation index and the number of gamma sentences
MAX_A = 4
MAX_N = 4


class ItbError(ValueError):
    """Sort clash, variable clash or cap violation in a two-sorted formula."""


class IndexVar(Node):
    __slots__ = ("index",)
    tag = 11

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 0:
            raise ValueError(f"variable index must be a natural, got {index!r}")
        self.index = index
        self._finish((), fv=frozenset((index,)))

    def label(self):
        return self.index

    def with_children(self, kids):
        return self

    def pieces(self):
        return (f"b{self.index}",)


def _index(x, where):
    if not isinstance(x, IndexVar):
        raise ItbError(f"{where} expects an index variable, got {type(x).__name__}")
    return x


class IndexLess(Formula):
    __slots__ = ("left", "right")
    tag = 12
    atomic = True

    def __init__(self, left: IndexVar, right: IndexVar):
        self.left = _index(left, "<")
        self.right = _index(right, "<")
        self._finish((left, right))

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        l, r = kids
        return self if (l is self.left and r is self.right) else IndexLess(l, r)

    def pieces(self):
        return ("(", self.left, " < ", self.right, ")")


class TruthAt(Formula):
    """``T(b, t)``: the sentence named by ``t`` holds at index ``b``."""

    __slots__ = ("idx", "arg")
    tag = 13
    atomic = True

    def __init__(self, idx: IndexVar, arg: Term):
        self.idx = _index(idx, "T")
        if not isinstance(arg, Term):
            raise ItbError(f"T expects a number term, got {type(arg).__name__}")
        self.arg = arg
        self._finish((idx, arg))

    def children(self):
        return (self.idx, self.arg)

    def with_children(self, kids):
        i, t = kids
        return self if (i is self.idx and t is self.arg) else TruthAt(i, t)

    def pieces(self):
        return ("T(", self.idx, ", ", self.arg, ")")


class _IndexQuantifier(_Quantifier):
    __slots__ = ()

    def pieces(self):
        return (f"{self.letter} b{self.var} ", self.body)


class IndexExists(_IndexQuantifier):
    __slots__ = ()
    tag = 14
    letter = "E"


class IndexForall(_IndexQuantifier):
    __slots__ = ()
    tag = 15
    letter = "A"


_INDEX_QUANTIFIERS = (IndexExists, IndexForall)


def index_vars(f: Node) -> set:
    """Indices used for the index sort (bound or free)."""
    out = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if type(node) is IndexVar:
            out.add(node.index)
        elif type(node) in _INDEX_QUANTIFIERS:
            out.add(node.var)
        stack.extend(node.children())
    return out


def number_vars(f: Node) -> set:
    out = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if type(node) is Var:
            out.add(node.index)
        elif type(node) in (Exists, Forall):
            out.add(node.var)
        stack.extend(node.children())
    return out


def relativize(f: Formula, alpha: int) -> Formula:
    """Bound every index quantifier by ``< b{alpha}``; number quantifiers stay."""
    if alpha in bound_vars(f):
        raise ItbError(f"b{alpha} is bound in the formula")
    if alpha in number_vars(f):
        raise ItbError(f"v{alpha} is a number variable in the formula")
    bound = IndexVar(alpha)

    def walk(node):
        kind = type(node)
        if kind is IndexForall:
            return IndexForall(node.var, Imp(IndexLess(IndexVar(node.var), bound), walk(node.body)))
        if kind is IndexExists:
            return IndexExists(node.var, And(IndexLess(IndexVar(node.var), bound), walk(node.body)))
        if node.atomic:
            return node
        return node.with_children([walk(k) for k in node.children()])

    return walk(f)


def _check_phi(phi: Formula) -> int:
    if not isinstance(phi, Formula) or len(phi._fv) != 1:
        raise ItbError("phi must be an arithmetical formula with exactly one free variable")
    if index_vars(phi):
        raise ItbError("phi must be arithmetical")
    (v,) = phi._fv
    return v


def _check_gamma(gamma: Sequence[Formula], max_n: int) -> list:
    gamma = list(gamma)
    if len(gamma) > max_n:
        raise ItbError(f"{len(gamma)} gamma sentences exceed the cap n <= {max_n}")
    for g in gamma:
        if g._fv:
            raise ItbError(f"gamma entries must be sentences: {to_text(g)}")
    return gamma


def domain_formula(x: int, a: int, phi: Formula) -> Formula:
    """d_a(v{x}) = v{x} <= a & phi(v{x})."""
    v = _check_phi(phi)
    return And(le_formula(Var(x), a), subst_var(phi, v, x))


class IotaTranslator:
    """The interpretations iota_0, iota_1, ... for one ``phi`` and ``gamma``.

    Translations of gamma sentences are memoised, so the output shares the
    subtrees iota_j(gamma_i) and stays small in memory even when its tree
    size grows quickly with ``a``.
    """

    def __init__(self, phi: Formula, gamma: Sequence[Formula], max_a: int = MAX_A,
                 max_n: int = MAX_N, memo: bool = True):
        self.phi = phi
        self.phi_var = _check_phi(phi)
        self.gamma = _check_gamma(gamma, max_n)
        self.max_a = max_a
        self._memo: Optional[Dict[tuple, Formula]] = {} if memo else None
        for g in self.gamma:
            self._check_sorts(g)

    def _check_sorts(self, f: Formula):
        clash = index_vars(f) & number_vars(f)
        if clash:
            names = ", ".join(f"{i}" for i in sorted(clash))
            raise ItbError(f"indices used for both sorts: {names}")
        taken = bound_vars(self.phi)
        used = index_vars(f)
        if used & taken:
            raise ItbError("an index variable is bound inside phi")

    def phi_at(self, j: int) -> Formula:
        return subst_closed(self.phi, self.phi_var, numeral(j))

    def domain(self, x: int, a: int) -> Formula:
        return domain_formula(x, a, self.phi)

    def gamma_at(self, i: int, j: int) -> Formula:
        """iota_j of the i-th gamma sentence (1-based)."""
        key = (i, j)
        if self._memo is not None and key in self._memo:
            return self._memo[key]
        out = self._translate(self.gamma[i - 1], j)
        if self._memo is not None:
            self._memo[key] = out
        return out

    def truth_clause(self, b: Term, t: Term, a: int) -> Formula:
        """iota_a of T(b, t), with the index argument already a number term."""
        if not self.gamma:
            return FALSE
        disjuncts = []
        for i in range(1, len(self.gamma) + 1):
            inner = [And(And(Eq(b, numeral(j)), self.phi_at(j)), self.gamma_at(i, j))
                     for j in range(a)]
            disjuncts.append(And(Eq(t, numeral(i)), big_or_or_false(inner)))
        return big_or_left(disjuncts)

    def translate(self, f: Formula, a: int) -> Formula:
        if not 0 <= a <= self.max_a:
            raise ItbError(f"interpretation index {a} outside 0..{self.max_a}")
        self._check_sorts(f)
        return self._translate(f, a)

    def _translate(self, f: Formula, a: int) -> Formula:
        kind = type(f)
        if kind is Eq:
            return f
        if kind is IndexLess:
            return lt_formula(Var(f.left.index), Var(f.right.index))
        if kind is TruthAt:
            return self.truth_clause(Var(f.idx.index), f.arg, a)
        if kind is IndexForall:
            return Forall(f.var, Imp(self.domain(f.var, a), self._translate(f.body, a)))
        if kind is IndexExists:
            return Exists(f.var, And(self.domain(f.var, a), self._translate(f.body, a)))
        if kind in (Not, Or, And, Exists, Forall):
            return f.with_children([self._translate(k, a) for k in f.children()])
        raise ItbError(f"not a two-sorted formula node: {kind.__name__}")


def iota_translate(f: Formula, a: int, phi: Formula, gamma_phis: Sequence[Formula],
                   max_a: int = MAX_A, max_n: int = MAX_N) -> Formula:
    return IotaTranslator(phi, gamma_phis, max_a, max_n).translate(f, a)


def _free_occurrences(f: Node, v: int) -> int:
    count = 0
    stack = [f]
    while stack:
        node = stack.pop()
        if v not in node._fv:
            continue
        if type(node) is Var:
            count += 1
        stack.extend(node.children())
    return count


def iota_size(f: Formula, a: int, phi: Formula, gamma: Sequence[Formula]) -> int:
    """Tree size of ``iota_translate(f, a, phi, gamma)`` from the size recurrence.

    Nothing is built: the count follows the translation clauses, with
    |numeral(k)| = k + 1, |x <= a| = a + 6, |x < y| = 7 and
    |d_a| = a + 7 + |phi|, and |phi(numeral(j))| grows by j per free
    occurrence of the variable of phi.
    """
    gamma = list(gamma)
    p = phi._size
    n = len(gamma)
    (v,) = phi._fv
    occ = _free_occurrences(phi, v)
    cache: Dict[tuple, int] = {}

    def dom(a):
        return 1 + (a + 6) + p

    def truth(t_size, a):
        if n == 0:
            return 4
        total = n - 1
        for i in range(1, n + 1):
            if a == 0:
                inner = 4
            else:
                inner = (a - 1) + sum(2 + (2 + (j + 1)) + (p + occ * j) + gamma_size(i, j)
                                      for j in range(a))
            total += 1 + (1 + t_size + (i + 1)) + inner
        return total

    def gamma_size(i, j):
        key = (i, j)
        if key not in cache:
            cache[key] = size(gamma[i - 1], j)
        return cache[key]

    def size(g, a):
        kind = type(g)
        if kind is Eq:
            return g._size
        if kind is IndexLess:
            return 7
        if kind is TruthAt:
            return truth(g.arg._size, a)
        if kind is IndexForall:
            return 3 + dom(a) + size(g.body, a)
        if kind is IndexExists:
            return 2 + dom(a) + size(g.body, a)
        return 1 + sum(size(k, a) for k in g.children() if isinstance(k, Formula))

    return size(f, a)


def demo_gamma() -> list:
    """Four two-sorted sentences exercising every clause of the translation."""
    b0, b1 = IndexVar(0), IndexVar(1)
    return [
        IndexForall(0, Not(TruthAt(b0, numeral(1)))),
        IndexExists(0, TruthAt(b0, numeral(2))),
        IndexForall(0, IndexExists(1, And(IndexLess(b1, b0), TruthAt(b1, numeral(1))))),
        IndexExists(0, Exists(2, Or(TruthAt(b0, Var(2)), Eq(Var(2), numeral(3))))),
    ]


def demo_phi() -> Formula:
    """``v6`` is even, written as ``E v7 (v7 + v7 = v6)``."""
    from .syntax import Add

    return Exists(7, Eq(Add(Var(7), Var(7)), Var(6)))


def is_itb(f: Node) -> bool:
    return any(type(n) in (IndexLess, TruthAt, IndexExists, IndexForall)
               for n in subformulas(f))
