"""Tseitin CNF, DIMACS text, and a DPLL solver.

The solver is plain DPLL: unit propagation over two watched literals and
chronological backtracking, no clause learning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .prop import PAnd, PAtom, PConst, PNot, POr, PropFormula, atoms_of


@dataclass
class CnfFormula:
    num_vars: int
    clauses: List[List[int]]
    #: atom id -> DIMACS variable
    atom_vars: Dict[int, int] = field(default_factory=dict)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def to_cnf_tseitin(p: PropFormula) -> CnfFormula:
    """Equisatisfiable CNF.  Atoms get variables 1..k in atom-id order.

    Structurally equal subformulas share one gate; chains of the same binary
    connective become a single n-ary gate; negation costs no variable.
    """
    ids = atoms_of(p)
    atom_vars = {i: n + 1 for n, i in enumerate(ids)}
    clauses: List[List[int]] = []
    counter = [len(ids)]
    gates: dict = {}
    const_var: list = []

    def new_var():
        counter[0] += 1
        return counter[0]

    def operands(node, kind):
        out = []
        stack = [node]
        while stack:
            n = stack.pop()
            if type(n) is kind:
                stack.append(n.right)
                stack.append(n.left)
            else:
                out.append(n)
        return out

    # iterative post-order over gate structure
    lit_of: dict = {}
    stack = [p]
    while stack:
        node = stack[-1]
        if node in lit_of:
            stack.pop()
            continue
        kind = type(node)
        if kind is PAtom:
            lit_of[node] = atom_vars[node.index]
            stack.pop()
            continue
        if kind is PConst:
            if not const_var:
                const_var.append(new_var())
                clauses.append([const_var[0]])
            lit_of[node] = const_var[0] if node.value else -const_var[0]
            stack.pop()
            continue
        kids = [node.arg] if kind is PNot else operands(node, kind)
        todo = [k for k in kids if k not in lit_of]
        if todo:
            stack.extend(reversed(todo))
            continue
        stack.pop()
        if kind is PNot:
            lit_of[node] = -lit_of[node.arg]
            continue
        lits = [lit_of[k] for k in kids]
        key = (kind, tuple(lits))
        g = gates.get(key)
        if g is None:
            g = new_var()
            gates[key] = g
            if kind is PAnd:
                for l in lits:
                    clauses.append([-g, l])
                clauses.append([g] + [-l for l in lits])
            else:
                for l in lits:
                    clauses.append([g, -l])
                clauses.append([-g] + lits)
        lit_of[node] = g
    clauses.append([lit_of[p]])
    return CnfFormula(counter[0], clauses, atom_vars)


def export_dimacs(c: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {line}" for line in comments]
    lines.append(f"p cnf {c.num_vars} {len(c.clauses)}")
    for clause in c.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return "\n".join(lines) + "\n"


class DimacsError(ValueError):
    pass


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: List[List[int]] = []
    current: List[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad header: {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise DimacsError("clause before header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsError(f"literal {lit} exceeds declared variable count")
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], clauses)


def dpll(num_vars: int, clauses: Sequence[Sequence[int]],
         priority: Sequence[int] = ()) -> Optional[Dict[int, bool]]:
    """A satisfying assignment (var -> bool for every var), or ``None``.

    Each decision picks the variable occurring most often in clauses not yet
    satisfied, preferring ``priority`` variables on ties, and tries its more
    frequent polarity first.
    """
    value = [0] * (num_vars + 1)
    watches: Dict[int, List[int]] = {}
    cls: List[List[int]] = []
    units: List[int] = []
    occurrences = [0] * (num_vars + 1)
    for raw in clauses:
        clause = list(dict.fromkeys(raw))
        if any(-l in clause for l in clause):
            continue
        if not clause:
            return None
        for l in clause:
            occurrences[abs(l)] += 1
        if len(clause) == 1:
            units.append(clause[0])
            continue
        idx = len(cls)
        cls.append(clause)
        watches.setdefault(clause[0], []).append(idx)
        watches.setdefault(clause[1], []).append(idx)

    rank = {v: n for n, v in enumerate(dict.fromkeys(
        v for v in priority if 0 < v <= num_vars))}
    low = len(rank)

    trail: List[int] = []
    qhead = 0

    def lit_value(l):
        v = value[abs(l)]
        return v if l > 0 else -v

    def enqueue(l):
        value[abs(l)] = 1 if l > 0 else -1
        trail.append(l)

    def propagate():
        nonlocal qhead
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            ws = watches.get(false_lit)
            if not ws:
                continue
            keep = []
            i = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                clause = cls[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if lit_value(other) == 1:
                    keep.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if lit_value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(ci)
                ov = lit_value(other)
                if ov == -1:
                    keep.extend(ws[i:])
                    watches[false_lit] = keep
                    return False
                if ov == 0:
                    enqueue(other)
            watches[false_lit] = keep
        return True

    for u in units:
        uv = lit_value(u)
        if uv == -1:
            return None
        if uv == 0:
            enqueue(u)

    def choose():
        # most occurrences among unresolved clauses; variables that occur in
        # none are left alone, since any value for them extends the model
        score: Dict[int, int] = {}
        for clause in cls:
            if any(lit_value(l) == 1 for l in clause):
                continue
            for l in clause:
                if value[abs(l)] == 0:
                    score[l] = score.get(l, 0) + 1
        if not score:
            return 0
        best = max(score, key=lambda l: (score[l] + score.get(-l, 0),
                                          -rank.get(abs(l), low), -abs(l), score[l], l))
        return best

    levels: List[tuple] = []   # (trail length before decision, literal, flipped)
    while True:
        if not propagate():
            while levels:
                start, lit, flipped = levels.pop()
                for l in trail[start:]:
                    value[abs(l)] = 0
                del trail[start:]
                qhead = start
                if not flipped:
                    levels.append((start, -lit, True))
                    enqueue(-lit)
                    break
            else:
                return None
            continue
        lit = choose()
        if lit == 0:
            return {v: value[v] == 1 for v in range(1, num_vars + 1)}
        levels.append((len(trail), lit, False))
        enqueue(lit)


def brute_force_sat(num_vars: int, clauses: Sequence[Sequence[int]]) -> bool:
    """Exhaustive satisfiability check for tiny instances."""
    from itertools import product

    for bits in product((False, True), repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False
