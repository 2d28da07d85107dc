"""Propositional structure of arithmetical sentences.

``skeleton`` cuts a sentence at its Eq-, Exists- and Forall-rooted
subsentences, which become atoms; what remains is a formula over ``~``,
``|`` and ``&``.  Atoms are keyed by structural equality with no
normalisation.

Tautologies are decided by a bit-parallel truth table (one Python int per
column, all rows at once) when there are at most ``TABLE_CUTOFF`` atoms,
and by DPLL on the Tseitin CNF of the negation otherwise.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .syntax import And, Formula, Not, Or, to_text

TABLE_CUTOFF = 20


class PropFormula:
    __slots__ = ("_hash",)
    arity = 0

    def children(self) -> tuple:
        return ()

    def __hash__(self):
        return self._hash

    def __and__(self, other):
        return PAnd(self, other)

    def __or__(self, other):
        return POr(self, other)

    def __invert__(self):
        return PNot(self)

    def __repr__(self):
        return prop_text(self)


class PAtom(PropFormula):
    __slots__ = ("index", "table")

    def __init__(self, index: int, table: "AtomTable" = None):
        self.index = index
        self.table = table
        self._hash = hash(("atom", index, id(table)))

    __hash__ = PropFormula.__hash__

    def __eq__(self, other):
        return (type(other) is PAtom and other.index == self.index
                and other.table is self.table)


class PConst(PropFormula):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = bool(value)
        self._hash = hash(("const", self.value))

    __hash__ = PropFormula.__hash__

    def __eq__(self, other):
        return type(other) is PConst and other.value == self.value


class PNot(PropFormula):
    __slots__ = ("arg",)

    def __init__(self, arg: PropFormula):
        self.arg = arg
        self._hash = hash(("not", arg._hash))

    def children(self):
        return (self.arg,)

    __hash__ = PropFormula.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is PNot and other._hash == self._hash
                                 and other.arg == self.arg)


class _PBin(PropFormula):
    __slots__ = ("left", "right")
    name = "?"

    def __init__(self, left: PropFormula, right: PropFormula):
        self.left = left
        self.right = right
        self._hash = hash((self.name, left._hash, right._hash))

    def children(self):
        return (self.left, self.right)

    __hash__ = PropFormula.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is type(self) and other._hash == self._hash
                                 and other.left == self.left and other.right == self.right)


class POr(_PBin):
    __slots__ = ()
    name = "or"


class PAnd(_PBin):
    __slots__ = ()
    name = "and"


def PImp(a, b):
    return POr(PNot(a), b)


def PIff(a, b):
    return PAnd(PImp(a, b), PImp(b, a))


def prop_text(p: PropFormula) -> str:
    out = []
    stack = [p]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif type(item) is PAtom:
            out.append(f"p{item.index}")
        elif type(item) is PConst:
            out.append("T" if item.value else "F")
        elif type(item) is PNot:
            stack.extend([item.arg, "~"])
        else:
            sym = " | " if type(item) is POr else " & "
            stack.extend([")", item.right, sym, item.left, "("])
    return "".join(out)


def atoms_of(p: PropFormula) -> List[int]:
    seen = set()
    stack = [p]
    visited = set()
    while stack:
        node = stack.pop()
        if id(node) in visited:
            continue
        visited.add(id(node))
        if type(node) is PAtom:
            seen.add(node.index)
        stack.extend(node.children())
    return sorted(seen)


def _atom_nodes(p: PropFormula) -> list:
    out = {}
    stack = [p]
    visited = set()
    while stack:
        node = stack.pop()
        if id(node) in visited:
            continue
        visited.add(id(node))
        if type(node) is PAtom:
            out.setdefault(node.index, node)
        stack.extend(node.children())
    return list(out.values())


class AtomTable:
    """Bijection between atom ids and atomic sentences."""

    def __init__(self):
        self._ids: Dict[Formula, int] = {}
        self._sentences: List[Formula] = []

    def atom(self, s: Formula) -> PAtom:
        i = self._ids.get(s)
        if i is None:
            i = len(self._sentences)
            self._ids[s] = i
            self._sentences.append(s)
        return PAtom(i, self)

    def sentence(self, index: int) -> Formula:
        return self._sentences[index]

    def __contains__(self, index):
        return isinstance(index, int) and 0 <= index < len(self._sentences)

    def __len__(self):
        return len(self._sentences)

    def items(self):
        return list(enumerate(self._sentences))


class TableMismatch(ValueError):
    pass


def skeleton(s: Formula, table: AtomTable = None) -> Tuple[PropFormula, AtomTable]:
    """Propositional skeleton of a sentence; atoms are added to ``table``."""
    if not isinstance(s, Formula):
        raise TypeError("skeleton expects a formula")
    if s._fv:
        raise ValueError(f"skeleton needs a sentence: {to_text(s)}")
    table = AtomTable() if table is None else table
    memo: dict = {}
    stack = [s]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        kind = type(node)
        if kind not in (Not, Or, And):
            memo[id(node)] = table.atom(node)
            stack.pop()
            continue
        kids = node.children()
        todo = [k for k in kids if id(k) not in memo]
        if todo:
            stack.extend(todo)
            continue
        stack.pop()
        if kind is Not:
            memo[id(node)] = PNot(memo[id(kids[0])])
        elif kind is Or:
            memo[id(node)] = POr(memo[id(kids[0])], memo[id(kids[1])])
        else:
            memo[id(node)] = PAnd(memo[id(kids[0])], memo[id(kids[1])])
    return memo[id(s)], table


def _fold(p: PropFormula, atom, const, neg, disj, conj):
    memo: dict = {}
    stack = [p]
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
        kind = type(node)
        if kind is PAtom:
            r = atom(node.index)
        elif kind is PConst:
            r = const(node.value)
        elif kind is PNot:
            r = neg(memo[id(kids[0])])
        elif kind is POr:
            r = disj(memo[id(kids[0])], memo[id(kids[1])])
        else:
            r = conj(memo[id(kids[0])], memo[id(kids[1])])
        memo[id(node)] = r
    return memo[id(p)]


class MissingAtom(KeyError):
    pass


def eval_valuation(p: PropFormula, v: Mapping[int, bool]) -> bool:
    def atom(i):
        try:
            return bool(v[i])
        except KeyError:
            raise MissingAtom(f"valuation does not assign atom p{i}") from None

    return _fold(p, atom, bool, lambda a: not a, lambda a, b: a or b, lambda a, b: a and b)


def truth_table_countermodel(p: PropFormula) -> Optional[Dict[int, bool]]:
    """A falsifying valuation, or ``None`` when ``p`` is a tautology."""
    ids = atoms_of(p)
    k = len(ids)
    rows = 1 << k
    full = (1 << rows) - 1
    columns = {}
    for pos, i in enumerate(ids):
        half = 1 << pos
        period = half << 1
        unit = ((1 << half) - 1) << half
        columns[i] = unit * (full // ((1 << period) - 1))
    result = _fold(p, columns.__getitem__, lambda b: full if b else 0,
                   lambda a: full ^ a, lambda a, b: a | b, lambda a, b: a & b)
    if result == full:
        return None
    missing = full ^ result
    row = (missing & -missing).bit_length() - 1
    return {i: bool(row >> pos & 1) for pos, i in enumerate(ids)}


def dpll_countermodel(p: PropFormula) -> Optional[Dict[int, bool]]:
    from .cnf import dpll, to_cnf_tseitin

    cnf = to_cnf_tseitin(PNot(p))
    model = dpll(cnf.num_vars, cnf.clauses, priority=sorted(cnf.atom_vars.values()))
    if model is None:
        return None
    return {i: model[var] for i, var in cnf.atom_vars.items()}


def countermodel(p: PropFormula, engine: str = "auto") -> Optional[Dict[int, bool]]:
    if engine == "auto":
        engine = "table" if len(atoms_of(p)) <= TABLE_CUTOFF else "dpll"
    if engine == "table":
        return truth_table_countermodel(p)
    if engine == "dpll":
        return dpll_countermodel(p)
    raise ValueError(f"unknown engine {engine!r}")


def is_tautology(p: PropFormula, engine: str = "auto") -> bool:
    return countermodel(p, engine) is None


def _tables(ps: Iterable[PropFormula]) -> set:
    return {id(a.table) for q in ps for a in _atom_nodes(q)}


def entails(premises: Sequence[PropFormula], p: PropFormula, engine: str = "auto") -> bool:
    """Every valuation satisfying all premises satisfies ``p``.

    All formulas must draw their atoms from one atom table.
    """
    premises = list(premises)
    if len(_tables(premises + [p])) > 1:
        raise TableMismatch("premises and conclusion use different atom tables")
    if not premises:
        return is_tautology(p, engine)
    hyp = premises[0]
    for q in premises[1:]:
        hyp = PAnd(hyp, q)
    return is_tautology(PImp(hyp, p), engine)


def sentence_countermodel(s: Formula, engine: str = "auto") -> Optional[Dict[Formula, bool]]:
    """Falsifying assignment of truth values to the atoms of a sentence."""
    p, table = skeleton(s)
    cm = countermodel(p, engine)
    if cm is None:
        return None
    return {table.sentence(i): b for i, b in cm.items()}


def is_sentence_tautology(s: Formula, engine: str = "auto") -> bool:
    p, _ = skeleton(s)
    return is_tautology(p, engine)


def sentences_entail(premises: Sequence[Formula], s: Formula, engine: str = "auto") -> bool:
    table = AtomTable()
    ps = [skeleton(q, table)[0] for q in premises]
    return entails(ps, skeleton(s, table)[0], engine)
