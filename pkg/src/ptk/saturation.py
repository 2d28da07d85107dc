"""A finite satisfaction predicate built by staged saturation.

The input is a family of formulas, a set of seed sentences taken to be
true, an optional earlier predicate, and a finite domain D of values for
assignments.  Formulas are grouped into similarity classes, the classes are
ordered by the direct-subformula relation, and the predicate is grown from
an initial set S0 one class per stage until nothing changes.

Pairs are ``(formula, assignment)`` where the assignment is a sorted tuple
of ``(var, value)`` pairs covering exactly the free variables.  Membership
of a family formula is read off the explicit pair set; membership of a
formula outside the family falls back to its extensional-equivalence key,
so subformulas that only occur up to similarity are still resolved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .report import Report
from .semantics import term_eval
from .syntax import (And, Eq, Exists, Forall, Formula, Not, Or, connective_count, ext_key,
                     to_text, trivialise)

Pair = Tuple[Formula, tuple]


class OrderError(RuntimeError):
    """The class order is not antisymmetric; only an implementation bug can cause this."""


@dataclass(frozen=True)
class Domain:
    values: tuple

    def __post_init__(self):
        vals = tuple(sorted(set(self.values)))
        if not vals:
            raise ValueError("domain must be non-empty")
        if any(not isinstance(v, int) or v < 0 for v in vals):
            raise ValueError("domain values must be naturals")
        object.__setattr__(self, "values", vals)

    @classmethod
    def parse(cls, text: str) -> "Domain":
        """``"0..7"`` or ``"0,2,5"``."""
        text = text.strip()
        try:
            if ".." in text:
                lo, hi = text.split("..", 1)
                return cls(tuple(range(int(lo), int(hi) + 1)))
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        except ValueError as exc:
            raise ValueError(f"bad domain {text!r}: {exc}") from None

    def assignments(self, f: Formula):
        """Every assignment of domain values to the free variables of ``f``."""
        vs = sorted(f._fv)
        for combo in itertools.product(self.values, repeat=len(vs)):
            yield tuple(zip(vs, combo))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __str__(self):
        v = self.values
        if v == tuple(range(v[0], v[-1] + 1)):
            return f"{v[0]}..{v[-1]}"
        return ",".join(map(str, v))


def _key(f: Formula, a: tuple) -> tuple:
    return ext_key(f, dict(a))


def _restrict(f: Formula, a: dict) -> tuple:
    return tuple(sorted((v, a[v]) for v in f._fv))


@dataclass
class PartialSatPredicate:
    family: tuple
    domain: Domain
    pairs: Set[Pair] = field(default_factory=set)
    #: pairs added at each stage; entry 0 is S0
    stages: List[Set[Pair]] = field(default_factory=list)

    def __post_init__(self):
        self.family = tuple(dict.fromkeys(self.family))
        self._members = set(self.family)
        self._keys: Optional[set] = None

    def _keyset(self) -> set:
        if self._keys is None:
            self._keys = {_key(f, a) for f, a in self.pairs}
        return self._keys

    def add(self, f: Formula, a: tuple) -> bool:
        if (f, a) in self.pairs:
            return False
        self.pairs.add((f, a))
        if self._keys is not None:
            self._keys.add(_key(f, a))
        return True

    def discard(self, f: Formula, a: tuple) -> None:
        self.pairs.discard((f, a))
        self._keys = None

    def holds(self, f: Formula, a) -> bool:
        a = _restrict(f, dict(a))
        if f in self._members:
            return (f, a) in self.pairs
        return _key(f, a) in self._keyset()

    def copy(self) -> "PartialSatPredicate":
        out = PartialSatPredicate(self.family, self.domain, set(self.pairs),
                                  [set(s) for s in self.stages])
        return out

    def __contains__(self, pair) -> bool:
        f, a = pair
        return self.holds(f, a)

    def __len__(self):
        return len(self.pairs)

    def sentences(self) -> Set[Formula]:
        return {f for f, a in self.pairs if not a}


@dataclass
class SimilarityClass:
    skeleton: Formula
    members: list

    @property
    def rank(self) -> int:
        return connective_count(self.skeleton)

    def __repr__(self):
        return f"SimilarityClass({to_text(self.skeleton)}, {len(self.members)} members)"


def similarity_classes(phis: Iterable[Formula]) -> List[SimilarityClass]:
    """Partition by trivialisation skeleton, classes in order of first appearance."""
    out: Dict[Formula, SimilarityClass] = {}
    for f in dict.fromkeys(phis):
        sk = trivialise(f).skeleton
        if sk not in out:
            out[sk] = SimilarityClass(sk, [])
        out[sk].members.append(f)
    return list(out.values())


class ClassOrder:
    """Reflexive-transitive closure of "a member of one class is a direct
    subformula of a member of another", on class positions."""

    def __init__(self, classes: Sequence[SimilarityClass]):
        self.classes = list(classes)
        index = {c.skeleton: i for i, c in enumerate(self.classes)}
        n = len(self.classes)
        below = [set() for _ in range(n)]
        for i, c in enumerate(self.classes):
            for m in c.members:
                for sub in m.children():
                    if isinstance(sub, Formula):
                        j = index.get(trivialise(sub).skeleton)
                        if j is not None:
                            below[i].add(j)
        self.direct = [frozenset(b) for b in below]
        closure = [set(b) | {i} for i, b in enumerate(below)]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                extra = set()
                for j in closure[i]:
                    extra |= closure[j]
                if not extra <= closure[i]:
                    closure[i] |= extra
                    changed = True
        self.below = [frozenset(c) for c in closure]
        for i in range(n):
            for j in self.below[i]:
                if j != i and i in self.below[j]:
                    raise OrderError(f"classes {i} and {j} are mutually below each other")
                if j != i and self.classes[j].rank >= self.classes[i].rank:
                    raise OrderError(f"class {j} is below class {i} without fewer connectives")

    def le(self, i: int, j: int) -> bool:
        """Class i is below or equal to class j."""
        return i in self.below[j]

    def minimal(self, i: int) -> bool:
        return self.below[i] == {i}

    def linear_extension(self) -> List[int]:
        return sorted(range(len(self.classes)),
                      key=lambda i: (self.classes[i].rank, to_text(self.classes[i].skeleton)))


def class_order(classes: Sequence[SimilarityClass]) -> ClassOrder:
    return ClassOrder(classes)


def _seed_keys(seedT: Iterable[Formula]) -> set:
    keys = set()
    for s in seedT:
        if s._fv:
            raise ValueError(f"seed entries must be sentences: {to_text(s)}")
        keys.add(ext_key(s, {}))
    return keys


def build_s0(phis: Sequence[Formula], seedT: Iterable[Formula],
             prevS: Optional[PartialSatPredicate], D: Domain) -> PartialSatPredicate:
    """Pairs justified by the earlier predicate, by a seed sentence, or by an
    equation that holds under the assignment."""
    S = PartialSatPredicate(tuple(phis), D)
    seeds = _seed_keys(seedT)
    prev = prevS._keyset() if prevS is not None else set()
    added = set()
    for f in S.family:
        for a in D.assignments(f):
            ok = False
            if prev or seeds:
                k = _key(f, a)
                ok = k in prev or k in seeds
            if not ok and type(f) is Eq:
                env = dict(a)
                ok = term_eval(f.left, env) == term_eval(f.right, env)
            if ok and S.add(f, a):
                added.add((f, a))
    S.stages.append(added)
    return S


def _clause(S: PartialSatPredicate, f: Formula, a: tuple) -> Optional[bool]:
    """Whether the root clause of ``f`` holds at ``a`` in ``S``; None for equations."""
    kind = type(f)
    if kind is Not:
        return not S.holds(f.arg, a)
    if kind is Or:
        return S.holds(f.left, a) or S.holds(f.right, a)
    if kind is And:
        return S.holds(f.left, a) and S.holds(f.right, a)
    if kind is Exists or kind is Forall:
        env = dict(a)
        results = []
        for d in S.domain:
            env[f.var] = d
            results.append(S.holds(f.body, env))
        return any(results) if kind is Exists else all(results)
    return None


def saturate(phis: Sequence[Formula], seedT: Iterable[Formula] = (),
             prevS: Optional[PartialSatPredicate] = None, D: Domain = Domain((0,))
             ) -> PartialSatPredicate:
    """Grow S0 by the root clauses of the non-minimal classes until fixpoint.

    Classes are visited in connective-count order, one class per stage, so
    a class is only visited after every class below it has been settled.
    Pairs are only ever added.
    """
    S = build_s0(phis, seedT, prevS, D)
    classes = similarity_classes(S.family)
    order = ClassOrder(classes)
    todo = [i for i in order.linear_extension() if not order.minimal(i)]
    while True:
        grew = False
        for i in todo:
            added = set()
            for f in classes[i].members:
                for a in D.assignments(f):
                    if (f, a) not in S.pairs and _clause(S, f, a):
                        S.add(f, a)
                        added.add((f, a))
            S.stages.append(added)
            grew = grew or bool(added)
        if not grew:
            break
    return S


def _text_pair(f, a):
    return {"formula": to_text(f), "assignment": {f"v{v}": x for v, x in a}}


def check_comp(S: PartialSatPredicate, phi: Formula, D: Optional[Domain] = None,
               report: Optional[Report] = None) -> Report:
    """Check the compositional clause matching the root of ``phi`` at every
    assignment over the domain."""
    D = S.domain if D is None else D
    report = Report("comp") if report is None else report
    for a in D.assignments(phi):
        inside = S.holds(phi, a)
        if type(phi) is Eq:
            env = dict(a)
            want = term_eval(phi.left, env) == term_eval(phi.right, env)
            clause = "equation"
        else:
            want = _clause(S, phi, a)
            clause = type(phi).__name__.lower()
        report.check(inside == want, {"clause": clause, **_text_pair(phi, a)}, want, inside)
    return report


def check_extensionality(S: PartialSatPredicate, report: Optional[Report] = None) -> Report:
    """Extensionally equivalent family pairs over the domain agree on membership."""
    report = Report("extensionality") if report is None else report
    groups: Dict[tuple, list] = {}
    for f in S.family:
        for a in S.domain.assignments(f):
            groups.setdefault(_key(f, a), []).append((f, a))
    for members in groups.values():
        if len(members) < 2:
            continue
        inside = [(f, a) in S.pairs for f, a in members]
        ok = all(inside) or not any(inside)
        report.check(ok, [_text_pair(f, a) for f, a in members], "uniform membership",
                     [_text_pair(f, a) for (f, a), b in zip(members, inside) if b])
    return report


def check_agreement(S: PartialSatPredicate, seedT: Iterable[Formula],
                    report: Optional[Report] = None) -> Report:
    """Every seed sentence is satisfied by the empty assignment."""
    report = Report("agreement") if report is None else report
    for s in seedT:
        report.check(S.holds(s, ()), {"seed": to_text(s)}, True, False)
    return report


def check_preservation(S: PartialSatPredicate, prevS: PartialSatPredicate,
                       report: Optional[Report] = None) -> Report:
    """Every earlier pair on a family formula is kept."""
    report = Report("preservation") if report is None else report
    for f, a in sorted(prevS.pairs, key=lambda p: (to_text(p[0]), p[1])):
        if f in S._members:
            report.check((f, a) in S.pairs, _text_pair(f, a), True, False)
    return report


def check_monotone(S: PartialSatPredicate, report: Optional[Report] = None) -> Report:
    """Stages are disjoint and their union is S, so each stage extends the last."""
    report = Report("monotonicity") if report is None else report
    seen: set = set()
    for j, stage in enumerate(S.stages):
        report.check(seen.isdisjoint(stage), {"stage": j}, "only new pairs", "repeated pairs")
        seen |= stage
    report.check(seen == S.pairs, {"stages": len(S.stages)}, "union equals S", "mismatch")
    return report
