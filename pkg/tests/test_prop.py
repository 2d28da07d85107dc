import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import props, qf_sentences
from ptk.cnf import (DimacsError, brute_force_sat, dpll, export_dimacs, parse_dimacs,
                     to_cnf_tseitin)
from ptk.constructions import atom_sentences, corollary_formula, stopping_disjunction, \
    case_distinction, unique
from ptk.prop import (AtomTable, MissingAtom, PAnd, PAtom, PConst, PIff, PImp, PNot, POr,
                      TableMismatch, atoms_of, countermodel, entails, eval_valuation,
                      is_sentence_tautology, is_tautology, sentence_countermodel,
                      sentences_entail, skeleton, truth_table_countermodel)
from ptk.syntax import ZERO, Add, Eq, Iff, Imp, Not, Or, numeral
from pysat.solvers import Minisat22

p, q, r = PAtom(0), PAtom(1), PAtom(2)


def _all_valuations(f):
    ids = atoms_of(f)
    for bits in itertools.product((False, True), repeat=len(ids)):
        yield dict(zip(ids, bits))


def test_skeleton_atoms():
    zz = Eq(ZERO, ZERO)
    sk, table = skeleton(Or(zz, Not(zz)))
    assert len(table) == 1 and sk == POr(PAtom(0, table), PNot(PAtom(0, table)))
    sk, table = skeleton(Or(Eq(ZERO, ZERO), Eq(numeral(0), numeral(0))))
    assert len(table) == 1
    # no normalisation: different sentences are different atoms
    sk, table = skeleton(Or(zz, Eq(Add(ZERO, ZERO), Add(ZERO, ZERO))))
    assert {s for _, s in table.items()} == {zz, Eq(Add(ZERO, ZERO), Add(ZERO, ZERO))}


def test_eval_valuation():
    assert eval_valuation(POr(p, PNot(p)), {0: False})
    assert not eval_valuation(PAnd(p, PNot(p)), {0: True})
    with pytest.raises(MissingAtom):
        eval_valuation(PAnd(p, q), {0: True})


def test_tautology_examples():
    assert is_tautology(PImp(p, p))
    assert not is_tautology(POr(p, q))
    assert is_tautology(PConst(True))
    assert not is_tautology(PConst(False))
    x = atom_sentences(12)
    assert is_sentence_tautology(corollary_formula(x[:6], x[6:]))


def test_countermodel_is_a_countermodel():
    f = PImp(POr(p, q), PAnd(p, r))
    cm = countermodel(f, "table")
    assert cm is not None and not eval_valuation(f, cm)
    cm = countermodel(f, "dpll")
    assert cm is not None and not eval_valuation(f, cm)


def test_sentence_countermodel_names_sentences():
    a, b = atom_sentences(2)
    cm = sentence_countermodel(Or(a, b))
    assert cm == {a: False, b: False}


def test_entails_examples():
    table = AtomTable()
    a, b = table.atom(Eq(ZERO, ZERO)), table.atom(Eq(numeral(1), numeral(1)))
    assert entails([a], a)
    assert not entails([], POr(a, b))
    assert entails([], POr(a, PNot(a)))
    assert entails([a, PImp(a, b)], b)
    with pytest.raises(TableMismatch):
        entails([PAtom(0, AtomTable())], PAtom(0, AtomTable()))


def test_unique_entails_corollary_equivalence():
    x = atom_sentences(8)
    al, be = x[:4], x[4:]
    assert sentences_entail([unique(al)],
                            Iff(stopping_disjunction(al, be), case_distinction(al, be)))
    assert not sentences_entail([],
                                Iff(stopping_disjunction(al, be), case_distinction(al, be)))


@given(props())
def test_engines_agree(f):
    by_table = truth_table_countermodel(f) is None
    assert (countermodel(f, "dpll") is None) == by_table
    assert by_table == all(eval_valuation(f, v) for v in _all_valuations(f))


@given(props())
def test_entails_empty_is_tautology(f):
    assert entails([], f) == is_tautology(f)


@given(props(4, constants=False), st.lists(qf_sentences, min_size=4, max_size=4))
def test_substitution_preserves_tautologies(f, sentences):
    # constants would lift to atomic sentences, which are not constants
    from ptk.syntax import And as SAnd, Not as SNot, Or as SOr

    def lift(g):
        kind = type(g).__name__
        if kind == "PAtom":
            return sentences[g.index]
        if kind == "PNot":
            return SNot(lift(g.arg))
        make = SOr if kind == "POr" else SAnd
        return make(lift(g.left), lift(g.right))

    if is_tautology(f):
        assert is_sentence_tautology(lift(f))


# ---------------------------------------------------------------- CNF

def test_tseitin_unsat_of_excluded_middle():
    c = to_cnf_tseitin(PNot(POr(p, PNot(p))))
    assert dpll(c.num_vars, c.clauses) is None
    assert not brute_force_sat(c.num_vars, c.clauses)


def test_constant_formula_dimacs():
    for value in (True, False):
        text = export_dimacs(to_cnf_tseitin(PConst(value)))
        assert text.splitlines()[0].startswith("p cnf ")
        cnf = parse_dimacs(text)
        assert (dpll(cnf.num_vars, cnf.clauses) is not None) == value


@given(props())
def test_tseitin_is_equisatisfiable(f):
    c = to_cnf_tseitin(f)
    sat = any(eval_valuation(f, v) for v in _all_valuations(f))
    model = dpll(c.num_vars, c.clauses)
    assert (model is not None) == sat
    if model is not None:
        # the atom part of the model satisfies the source formula
        v = {i: model[var] for i, var in c.atom_vars.items()}
        assert eval_valuation(f, v)


@given(props(5))
def test_dimacs_round_trip_and_external_solver(f):
    c = to_cnf_tseitin(f)
    text = export_dimacs(c, ["comment line"])
    back = parse_dimacs(text)
    assert back.num_vars == c.num_vars and back.clauses == c.clauses
    with Minisat22(bootstrap_with=back.clauses) as solver:
        assert solver.solve() == (dpll(c.num_vars, c.clauses) is not None)


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.lists(st.integers(1, n).flatmap(
        lambda v: st.sampled_from([v, -v])), min_size=0, max_size=4), max_size=20))))
def test_dpll_against_brute_force(case):
    n, clauses = case
    model = dpll(n, clauses)
    assert (model is not None) == brute_force_sat(n, clauses)
    if model is not None:
        assert all(any(model[abs(l)] == (l > 0) for l in cl) for cl in clauses)


@pytest.mark.parametrize("bad", ["1 0\n", "p cnf 1 1\n2 0\n", "p cnf 1 2\n1 0\n",
                                 "p cnf 1 1\n1\n", "p dnf 1 1\n1 0\n"])
def test_dimacs_errors(bad):
    with pytest.raises(DimacsError):
        parse_dimacs(bad)


def test_large_corollary_by_dpll():
    x = atom_sentences(130)
    f, _ = skeleton(corollary_formula(x[:65], x[65:]))
    assert countermodel(f, "dpll") is None
