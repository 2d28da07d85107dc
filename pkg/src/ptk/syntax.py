"""Terms and formulas of the arithmetical language {0, S, +, *, =}.

Every node is immutable once built and caches its hash, free variables,
tree size and quantifier count at construction time.  Structural equality,
printing and substitution are all written without recursion over the tree
so that long numerals and long left-grouped disjunctions stay cheap.

Variables are plain ``int`` indices (``v0``, ``v1``, ...).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Mapping, Optional, Sequence, Union

VarId = int
_EMPTY = frozenset()
Assignment = Mapping[int, int]


class SyntaxTypeError(TypeError):
    """A node was built from children of the wrong sort."""


class AssignmentError(ValueError):
    """An assignment does not cover the free variables it is applied to."""

    def __init__(self, missing):
        self.missing = sorted(missing)
        names = ", ".join(f"v{i}" for i in self.missing)
        super().__init__(f"assignment does not cover free variable(s): {names}")


class Node:
    """Base class for all syntax nodes (terms, formulas and ITB formulas)."""

    __slots__ = ("_hash", "_fv", "_size", "_quants")

    tag: int = -1
    #: name of the variable-binding attribute on binder nodes
    binds: Optional[str] = None

    def children(self) -> tuple:
        return ()

    def label(self):
        """Non-node payload that takes part in equality (e.g. a var index)."""
        return None

    def with_children(self, kids: Sequence["Node"]) -> "Node":
        raise NotImplementedError

    def pieces(self) -> tuple:
        """Text pieces and child nodes, in print order."""
        raise NotImplementedError

    @property
    def bound_var(self) -> Optional[int]:
        return getattr(self, self.binds) if self.binds else None

    def _finish(self, kids, fv=None, quants=0):
        size = 1
        hashes = [self.tag, self.label()]
        for k in kids:
            size += k._size
            quants += k._quants
            hashes.append(k._hash)
        self._hash = hash(tuple(hashes))
        if fv is None:
            fv = _EMPTY
            for k in kids:
                if k._fv:
                    fv = k._fv if not fv else fv | k._fv
        self._fv = fv
        self._size = size
        self._quants = quants

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if (a._hash != b._hash or type(a) is not type(b)
                    or a.label() != b.label()):
                return False
            stack.extend(zip(a.children(), b.children()))
        return True

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    @property
    def free_vars(self) -> frozenset:
        return self._fv

    @property
    def size(self) -> int:
        """Number of nodes in the tree (shared subtrees counted every time)."""
        return self._size

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"<{type(self).__name__} {to_text(self)}>"


# ---------------------------------------------------------------- terms

class Term(Node):
    __slots__ = ("_val",)


def _term(x, where):
    if not isinstance(x, Term):
        raise SyntaxTypeError(f"{where} expects a term, got {type(x).__name__}")
    return x


def _formula(x, where):
    if not isinstance(x, Formula):
        raise SyntaxTypeError(f"{where} expects a formula, got {type(x).__name__}")
    return x


class Var(Term):
    __slots__ = ("index",)
    tag = 1

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 0:
            raise ValueError(f"variable index must be a natural, got {index!r}")
        self.index = index
        self._val = None
        self._finish((), fv=frozenset((index,)))

    def label(self):
        return self.index

    def with_children(self, kids):
        return self

    def pieces(self):
        return (f"v{self.index}",)


class Zero(Term):
    __slots__ = ()
    tag = 0

    def __init__(self):
        self._val = 0
        self._finish(())

    def with_children(self, kids):
        return self

    def pieces(self):
        return ("0",)


class Succ(Term):
    __slots__ = ("arg",)
    tag = 2

    def __init__(self, arg: Term):
        self.arg = _term(arg, "S")
        self._val = None
        self._finish((arg,))

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        (a,) = kids
        return self if a is self.arg else Succ(a)

    def pieces(self):
        return ("S(", self.arg, ")")


class _BinTerm(Term):
    __slots__ = ("left", "right")
    symbol = "?"

    def __init__(self, left: Term, right: Term):
        self.left = _term(left, self.symbol)
        self.right = _term(right, self.symbol)
        self._val = None
        self._finish((left, right))

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        l, r = kids
        if l is self.left and r is self.right:
            return self
        return type(self)(l, r)

    def pieces(self):
        return ("(", self.left, f" {self.symbol} ", self.right, ")")


class Add(_BinTerm):
    __slots__ = ()
    tag = 3
    symbol = "+"


class Mul(_BinTerm):
    __slots__ = ()
    tag = 4
    symbol = "*"


ZERO = Zero()

_NUMERALS = [ZERO]
_NUMERAL_CACHE_LIMIT = 200_000


def numeral(n: int) -> Term:
    """The canonical numeral S(S(...S(0)...)) with ``n`` successors.

    Numerals are shared: numeral(n).arg is numeral(n - 1).
    """
    if n < 0:
        raise ValueError("numerals denote naturals")
    if n < len(_NUMERALS):
        return _NUMERALS[n]
    top = min(n, _NUMERAL_CACHE_LIMIT)
    t = _NUMERALS[-1]
    while len(_NUMERALS) <= top:
        t = Succ(t)
        t._val = len(_NUMERALS)
        _NUMERALS.append(t)
    for _ in range(n - top):
        t = Succ(t)
    return t


# ---------------------------------------------------------------- formulas

class Formula(Node):
    __slots__ = ()
    atomic = False

    @property
    def is_sentence(self) -> bool:
        return not self._fv

    @property
    def is_quantifier_free(self) -> bool:
        return self._quants == 0


class Eq(Formula):
    __slots__ = ("left", "right")
    tag = 5
    atomic = True

    def __init__(self, left: Term, right: Term):
        self.left = _term(left, "=")
        self.right = _term(right, "=")
        self._finish((left, right))

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        l, r = kids
        if l is self.left and r is self.right:
            return self
        return Eq(l, r)

    def pieces(self):
        return ("(", self.left, " = ", self.right, ")")


class Not(Formula):
    __slots__ = ("arg",)
    tag = 6

    def __init__(self, arg: Formula):
        self.arg = _formula(arg, "~")
        self._finish((arg,))

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        (a,) = kids
        return self if a is self.arg else Not(a)

    def pieces(self):
        return ("~", self.arg)


class _BinFormula(Formula):
    __slots__ = ("left", "right")
    symbol = "?"

    def __init__(self, left: Formula, right: Formula):
        self.left = _formula(left, self.symbol)
        self.right = _formula(right, self.symbol)
        self._finish((left, right))

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        l, r = kids
        if l is self.left and r is self.right:
            return self
        return type(self)(l, r)

    def pieces(self):
        return ("(", self.left, f" {self.symbol} ", self.right, ")")


class Or(_BinFormula):
    __slots__ = ()
    tag = 7
    symbol = "|"


class And(_BinFormula):
    __slots__ = ()
    tag = 8
    symbol = "&"


class _Quantifier(Formula):
    __slots__ = ("var", "body")
    binds = "var"
    letter = "?"

    def __init__(self, var: int, body: Formula):
        if not isinstance(var, int) or var < 0:
            raise ValueError(f"variable index must be a natural, got {var!r}")
        self.var = var
        self.body = _formula(body, self.letter)
        self._finish((body,), fv=body._fv - {var}, quants=1)

    def label(self):
        return self.var

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        (b,) = kids
        return self if b is self.body else type(self)(self.var, b)

    def pieces(self):
        return (f"{self.letter} v{self.var} ", self.body)


class Exists(_Quantifier):
    __slots__ = ()
    tag = 9
    letter = "E"


class Forall(_Quantifier):
    __slots__ = ()
    tag = 10
    letter = "A"


def Imp(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


TRUE = Eq(ZERO, ZERO)
FALSE = Not(TRUE)


# ---------------------------------------------------------------- traversal

def to_text(node: Node) -> str:
    out = []
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        else:
            stack.extend(reversed(item.pieces()))
    return "".join(out)


def subformulas(f: Node) -> Iterator[Node]:
    """Pre-order walk over formula nodes (terms are not visited)."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(k for k in reversed(node.children()) if isinstance(k, Formula))


def bound_vars(f: Node) -> set:
    return {n.bound_var for n in subformulas(f) if n.binds}


def variables(f: Node) -> set:
    return set(f._fv) | bound_vars(f)


def fresh_var(*nodes: Node, avoid=()) -> int:
    used = set(avoid)
    for n in nodes:
        used |= variables(n)
    i = 0
    while i in used:
        i += 1
    return i


def free_vars(x: Node) -> frozenset:
    return x._fv


def connective_count(f: Node) -> int:
    """Number of connectives and quantifiers in a formula."""
    return sum(1 for n in subformulas(f) if not n.atomic)


def _substitute(root: Node, mapping: Mapping[int, Term]) -> Node:
    """Replace free occurrences of mapped variables.  No capture checks."""
    results = []
    work = [(root, mapping, False)]
    while work:
        node, m, expanded = work.pop()
        if not expanded:
            if node._fv.isdisjoint(m):
                results.append(node)
                continue
            if type(node) is Var:
                results.append(m[node.index])
                continue
            inner = m
            bv = node.bound_var
            if bv is not None and bv in m:
                inner = {k: v for k, v in m.items() if k != bv}
            work.append((node, m, True))
            for child in reversed(node.children()):
                work.append((child, inner, False))
        else:
            n = len(node.children())
            kids = results[len(results) - n:]
            del results[len(results) - n:]
            results.append(node.with_children(kids))
    return results[0]


def subst_closed(f: Node, v: int, t: Term) -> Node:
    """Replace the free occurrences of ``v`` in ``f`` by the closed term ``t``."""
    if t._fv:
        raise ValueError(f"subst_closed needs a closed term, {to_text(t)} is open")
    return _substitute(f, {v: t})


def subst_var(f: Node, v: int, w: int) -> Node:
    """Rename free ``v`` to ``w``; ``w`` must not be bound anywhere in ``f``."""
    if v == w:
        return f
    if w in bound_vars(f):
        raise ValueError(f"v{w} is bound in the target formula")
    return _substitute(f, {v: Var(w)})


def apply_assignment(f: Node, a: Assignment) -> Node:
    """phi[alpha]: put the numeral of alpha(v) in place of each free v."""
    missing = f._fv - a.keys()
    if missing:
        raise AssignmentError(missing)
    return _substitute(f, {v: numeral(a[v]) for v in f._fv})


def restrict(a: Assignment, f: Node) -> tuple:
    """Assignment restricted to FV(f), as a sorted tuple of pairs."""
    missing = f._fv - a.keys()
    if missing:
        raise AssignmentError(missing)
    return tuple(sorted((v, a[v]) for v in f._fv))


# ---------------------------------------------------------------- trivialisation

class Template:
    """A trivialised formula together with the terms that were pulled out of it.

    ``skeleton`` has one fresh free variable per extracted term, listed in
    ``param_vars`` in order of occurrence; ``params`` holds the extracted
    terms in the same order.
    """

    __slots__ = ("skeleton", "param_vars", "params")

    def __init__(self, skeleton: Formula, param_vars: tuple, params: tuple):
        self.skeleton = skeleton
        self.param_vars = param_vars
        self.params = params

    def instantiate(self, terms: Sequence[Term] = None) -> Formula:
        terms = self.params if terms is None else tuple(terms)
        if len(terms) != len(self.param_vars):
            raise ValueError(f"template takes {len(self.param_vars)} terms, got {len(terms)}")
        return _substitute(self.skeleton, dict(zip(self.param_vars, terms)))

    def __eq__(self, other):
        if not isinstance(other, Template):
            return NotImplemented
        return (self.skeleton == other.skeleton and self.param_vars == other.param_vars
                and self.params == other.params)

    def __hash__(self):
        return hash((self.skeleton, self.param_vars, self.params))

    def __repr__(self):
        ps = ", ".join(map(to_text, self.params))
        return f"Template({to_text(self.skeleton)}; {ps})"


def _abstract_term(t: Term, bound: frozenset, new_param) -> Term:
    if t._fv.isdisjoint(bound):
        return new_param(t)
    # t mentions a bound variable, so every Succ below it does too
    depth = 0
    while type(t) is Succ:
        t = t.arg
        depth += 1
    if type(t) is not Var:
        t = t.with_children([_abstract_term(k, bound, new_param) for k in t.children()])
    for _ in range(depth):
        t = Succ(t)
    return t


@lru_cache(maxsize=1 << 16)
def trivialise(f: Formula) -> Template:
    """Abstract every maximal subterm that mentions no bound variable.

    Parameters are named by the lowest indices not bound anywhere in ``f``,
    handed out left to right.
    """
    taken = bound_vars(f)
    names = []
    params = []
    counter = [0]

    def new_param(t):
        i = counter[0]
        while i in taken:
            i += 1
        counter[0] = i + 1
        names.append(i)
        params.append(t)
        return Var(i)

    results = []
    work = [(f, frozenset(), False)]
    while work:
        node, bound, expanded = work.pop()
        if isinstance(node, Term):
            results.append(_abstract_term(node, bound, new_param))
            continue
        if not expanded:
            work.append((node, bound, True))
            inner = bound | {node.bound_var} if node.binds else bound
            for child in reversed(node.children()):
                work.append((child, inner, False))
        else:
            n = len(node.children())
            kids = results[len(results) - n:]
            del results[len(results) - n:]
            results.append(node.with_children(kids) if n else node)
    return Template(results[0], tuple(names), tuple(params))


def similar(f1: Formula, f2: Formula) -> bool:
    return trivialise(f1).skeleton == trivialise(f2).skeleton


def ext_key(f: Formula, a: Assignment) -> tuple:
    """Canonical key of the extensional-equivalence class of (f, a)."""
    from .semantics import term_eval

    missing = f._fv - a.keys()
    if missing:
        raise AssignmentError(missing)
    tpl = trivialise(f)
    return tpl.skeleton, tuple(term_eval(t, a) for t in tpl.params)


def ext_equiv(f1: Formula, a1: Assignment, f2: Formula, a2: Assignment) -> bool:
    return ext_key(f1, a1) == ext_key(f2, a2)


Syntax = Union[Term, Formula]
