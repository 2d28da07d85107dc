"""Shared hypothesis strategies for terms, formulas and propositional formulas."""

from hypothesis import settings
from hypothesis import strategies as st

from ptk.prop import PAnd, PAtom, PConst, PNot, POr
from ptk.syntax import Add, And, Eq, Exists, Forall, Mul, Not, Or, Succ, Var, numeral

settings.register_profile("ptk", max_examples=150, deadline=None)
settings.load_profile("ptk")


def terms(variables=(0, 1, 2), max_numeral=4):
    leaves = st.integers(0, max_numeral).map(numeral)
    if variables:
        leaves = leaves | st.sampled_from(list(variables)).map(Var)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(sub.map(Succ),
                              st.builds(Add, sub, sub),
                              st.builds(Mul, sub, sub)),
        max_leaves=6)


closed_terms = terms(())


def formulas(variables=(0, 1, 2), quantifiers=True):
    atoms = st.builds(Eq, terms(variables), terms(variables))

    def extend(sub):
        options = [sub.map(Not), st.builds(Or, sub, sub), st.builds(And, sub, sub)]
        if quantifiers:
            options += [st.builds(Exists, st.sampled_from(list(variables)), sub),
                        st.builds(Forall, st.sampled_from(list(variables)), sub)]
        return st.one_of(*options)

    return st.recursive(atoms, extend, max_leaves=6)


qf_sentences = formulas((), quantifiers=False)


def props(atoms=6, constants=True):
    leaves = st.integers(0, atoms - 1).map(PAtom)
    if constants:
        leaves = leaves | st.booleans().map(PConst)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(sub.map(PNot), st.builds(POr, sub, sub),
                              st.builds(PAnd, sub, sub)),
        max_leaves=12)
