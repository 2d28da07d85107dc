"""Formula schemes: big connectives, stopping-condition disjunctions, Unique,
atomic case distinctions, the corollary tautology, the coding formula
Theta_c and the bounded-order encodings.

Big connectives are grouped to the left.  An empty conjunction is ``0 = 0``
and an empty disjunction is ``~(0 = 0)``.
"""

from __future__ import annotations

from typing import Sequence

from .godel import godel_decode
from .syntax import (FALSE, TRUE, Add, And, Eq, Exists, Formula, Iff, Imp, Not, Or, Succ, Term,
                     Var, fresh_var, numeral, to_text)


class SequenceError(ValueError):
    pass


class OpenTermError(ValueError):
    """A closed term was required."""


def _sentences(fs, what="sequence"):
    fs = list(fs)
    for f in fs:
        if not isinstance(f, Formula):
            raise TypeError(f"{what} entries must be formulas")
    return fs


def big_or_left(fs: Sequence[Formula]) -> Formula:
    fs = _sentences(fs)
    if not fs:
        raise SequenceError("big disjunction of an empty sequence")
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def big_and_left(fs: Sequence[Formula]) -> Formula:
    fs = _sentences(fs)
    if not fs:
        raise SequenceError("big conjunction of an empty sequence")
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def big_or_or_false(fs: Sequence[Formula]) -> Formula:
    fs = list(fs)
    return big_or_left(fs) if fs else FALSE


def big_and_or_true(fs: Sequence[Formula]) -> Formula:
    fs = list(fs)
    return big_and_left(fs) if fs else TRUE


def stopping_disjunction(alphas: Sequence[Formula], betas: Sequence[Formula],
                         j: int = 0) -> Formula:
    """Disjunction of the betas with stopping condition alpha, from index j.

    At the last index c it is ``alpha_c & beta_c``; below that,
    ``(alpha_j & beta_j) | (~alpha_j & <rest from j+1>)``.
    """
    alphas, betas = _sentences(alphas), _sentences(betas)
    if len(alphas) != len(betas):
        raise SequenceError(f"length mismatch: {len(alphas)} alphas, {len(betas)} betas")
    if not alphas:
        raise SequenceError("stopping disjunction of an empty sequence")
    c = len(alphas) - 1
    if not 0 <= j <= c:
        raise SequenceError(f"start index {j} outside 0..{c}")
    out = And(alphas[c], betas[c])
    for i in range(c - 1, j - 1, -1):
        out = Or(And(alphas[i], betas[i]), And(Not(alphas[i]), out))
    return out


def unique(alphas: Sequence[Formula]) -> Formula:
    """Exactly one of the alphas holds."""
    alphas = _sentences(alphas)
    if not alphas:
        raise SequenceError("Unique of an empty sequence")
    negs = [Not(a) for a in alphas]
    disjuncts = []
    for i, a in enumerate(alphas):
        others = negs[:i] + negs[i + 1:]
        disjuncts.append(And(a, big_and_or_true(others)))
    return big_or_left(disjuncts)


def case_distinction(alphas: Sequence[Formula], betas: Sequence[Formula]) -> Formula:
    """The plain disjunction of ``alpha_i & beta_i``."""
    alphas, betas = _sentences(alphas), _sentences(betas)
    if len(alphas) != len(betas):
        raise SequenceError(f"length mismatch: {len(alphas)} alphas, {len(betas)} betas")
    return big_or_left([And(a, b) for a, b in zip(alphas, betas)])


def case_equations(t: Term, c: int, order: Sequence[int] = None) -> list:
    """The sentences ``t = i`` for i in ``order`` (default 0..c)."""
    order = range(c + 1) if order is None else order
    return [Eq(t, numeral(i)) for i in order]


def acdc_lhs(t: Term, phis: Sequence[Formula]) -> Formula:
    """Big disjunction of ``t = i & phi_i``, i = 0..c."""
    if not isinstance(t, Term):
        raise TypeError("acdc_lhs expects a term")
    if t._fv:
        raise OpenTermError(f"acdc_lhs needs a closed term, {to_text(t)} is open")
    phis = _sentences(phis)
    if not phis:
        raise SequenceError("case distinction over an empty sequence")
    return case_distinction(case_equations(t, len(phis) - 1), phis)


def corollary_formula(alphas: Sequence[Formula], betas: Sequence[Formula]) -> Formula:
    """Unique(alpha) -> (stopping disjunction <-> plain case distinction)."""
    return Imp(unique(alphas),
               Iff(stopping_disjunction(alphas, betas, 0), case_distinction(alphas, betas)))


class Permutation:
    """A bijection on {0..c}, stored as its image list."""

    __slots__ = ("image",)

    def __init__(self, image: Sequence[int]):
        image = tuple(image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation of 0..{len(image) - 1}: {image}")
        self.image = image

    @classmethod
    def swap(cls, size: int, i: int, j: int) -> "Permutation":
        image = list(range(size))
        image[i], image[j] = image[j], image[i]
        return cls(image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __len__(self):
        return len(self.image)

    def __repr__(self):
        return f"Permutation({list(self.image)})"


def permute_seq(fs: Sequence, sigma: Permutation) -> list:
    """Entry i of the result is fs[sigma(i)]."""
    fs = list(fs)
    if len(fs) != len(sigma):
        raise SequenceError(f"sequence of length {len(fs)} vs permutation of size {len(sigma)}")
    return [fs[sigma(i)] for i in range(len(fs))]


def theta_sequence(c: int) -> list:
    """phi_i = the sentence coded by i, or ~(0 = 0) when i codes no sentence."""
    out = []
    for i in range(c + 1):
        node = godel_decode(i)
        out.append(node if isinstance(node, Formula) and node.is_sentence else FALSE)
    return out


def theta_c(c: int, var: int = 0) -> Formula:
    """Theta_c(x) = big disjunction of ``x = i & phi_i`` over i <= c."""
    x = Var(var)
    return case_distinction(case_equations(x, c), theta_sequence(c))


def le_formula(x: Term, a: int) -> Formula:
    """``x <= a`` as ``E z (z + x = a)``."""
    z = fresh_var(x)
    return Exists(z, Eq(Add(Var(z), x), numeral(a)))


def lt_formula(x: Term, y: Term) -> Formula:
    """``x < y`` as ``E z (z + S(x) = y)``."""
    z = fresh_var(x, y)
    return Exists(z, Eq(Add(Var(z), Succ(x)), y))


def atom_sentences(n: int, start: int = 0) -> list:
    """``n`` pairwise distinct atomic sentences ``(k = k)`` for propositional use."""
    return [Eq(numeral(k), numeral(k)) for k in range(start, start + n)]


def induction_instance(phi: Formula, var: int) -> Formula:
    """(phi(0) & A x (phi(x) -> phi(S x))) -> A x phi(x), for x = ``var``."""
    from .syntax import Forall, _substitute

    step = Forall(var, Imp(phi, _substitute(phi, {var: Succ(Var(var))})))
    base = _substitute(phi, {var: numeral(0)})
    return Imp(And(base, step), Forall(var, phi))
