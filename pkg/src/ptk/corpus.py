"""Seeded random generators for terms, formulas and propositional formulas.

Every generator takes a ``random.Random`` so a corpus is fixed by its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence

from .prop import PAnd, PAtom, PConst, PNot, POr, PropFormula, AtomTable
from .syntax import (Add, And, Eq, Exists, Forall, Formula, Mul, Not, Or, Succ, Term, Var,
                     numeral)


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    n: int = 100
    c_min: int = 0
    c_max: int = 5
    formula_depth: int = 4
    term_depth: int = 3
    quantifier_free: bool = True
    max_numeral: int = 4

    def rng(self, salt: str = "") -> random.Random:
        """A generator keyed by the seed and a per-use salt string."""
        return random.Random(f"{self.seed}:{salt}")


def random_term(rng: random.Random, depth: int, variables: Sequence[int] = (),
                max_numeral: int = 4) -> Term:
    if depth <= 0 or rng.random() < 0.3:
        if variables and rng.random() < 0.5:
            return Var(rng.choice(list(variables)))
        return numeral(rng.randint(0, max_numeral))
    kind = rng.randrange(3)
    if kind == 0:
        return Succ(random_term(rng, depth - 1, variables, max_numeral))
    make = Add if kind == 1 else Mul
    return make(random_term(rng, depth - 1, variables, max_numeral),
                random_term(rng, depth - 1, variables, max_numeral))


def random_closed_term(rng: random.Random, depth: int, max_numeral: int = 4) -> Term:
    return random_term(rng, depth, (), max_numeral)


def term_with_value(rng: random.Random, n: int, depth: int = 3) -> Term:
    """A random closed term whose value is ``n``."""
    if depth <= 0 or rng.random() < 0.25:
        return numeral(n)
    choice = rng.randrange(3)
    if choice == 0 and n > 0:
        return Succ(term_with_value(rng, n - 1, depth - 1))
    if choice == 1:
        k = rng.randint(0, n)
        return Add(term_with_value(rng, k, depth - 1), term_with_value(rng, n - k, depth - 1))
    if n == 0:
        zero, other = term_with_value(rng, 0, depth - 1), term_with_value(rng, rng.randint(0, 3), depth - 1)
        return Mul(zero, other) if rng.random() < 0.5 else Mul(other, zero)
    d = rng.choice([d for d in range(1, n + 1) if n % d == 0])
    return Mul(term_with_value(rng, d, depth - 1), term_with_value(rng, n // d, depth - 1))


def random_qf_sentence(rng: random.Random, depth: int, term_depth: int = 2,
                       max_numeral: int = 4) -> Formula:
    return random_formula(rng, depth, term_depth, (), quantifiers=False, max_numeral=max_numeral)


def random_formula(rng: random.Random, depth: int, term_depth: int = 2,
                   variables: Sequence[int] = (0, 1, 2), quantifiers: bool = True,
                   max_numeral: int = 4) -> Formula:
    """A random formula; free variables are drawn from ``variables``."""
    variables = list(variables)
    if depth <= 0 or rng.random() < 0.2:
        return Eq(random_term(rng, term_depth, variables, max_numeral),
                  random_term(rng, term_depth, variables, max_numeral))
    kinds = ["not", "or", "and"] + (["exists", "forall"] if quantifiers else [])
    kind = rng.choice(kinds)
    if kind == "not":
        return Not(random_formula(rng, depth - 1, term_depth, variables, quantifiers, max_numeral))
    if kind in ("or", "and"):
        make = Or if kind == "or" else And
        return make(random_formula(rng, depth - 1, term_depth, variables, quantifiers, max_numeral),
                    random_formula(rng, depth - 1, term_depth, variables, quantifiers, max_numeral))
    v = rng.randint(0, max(variables, default=0) + 1)
    inner = sorted(set(variables) | {v})
    body = random_formula(rng, depth - 1, term_depth, inner, quantifiers, max_numeral)
    return (Exists if kind == "exists" else Forall)(v, body)


def random_prop(rng: random.Random, atoms: int, depth: int,
                table: AtomTable = None) -> PropFormula:
    """A random propositional formula over atoms 0..atoms-1."""
    if depth <= 0 or rng.random() < 0.15:
        if rng.random() < 0.03:
            return PConst(rng.random() < 0.5)
        return PAtom(rng.randrange(atoms), table)
    kind = rng.randrange(3)
    if kind == 0:
        return PNot(random_prop(rng, atoms, depth - 1, table))
    make = POr if kind == 1 else PAnd
    return make(random_prop(rng, atoms, depth - 1, table), random_prop(rng, atoms, depth - 1, table))


def random_distinct_sentences(rng: random.Random, count: int, depth: int = 2) -> List[Formula]:
    """``count`` pairwise distinct quantifier-free sentences."""
    seen = {}
    while len(seen) < count:
        s = random_qf_sentence(rng, depth)
        seen.setdefault(s, None)
    return list(seen)
