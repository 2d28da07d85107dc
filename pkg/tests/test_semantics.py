import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import closed_terms, formulas, qf_sentences, terms
from ptk.corpus import term_with_value
from ptk.parsing import parse_formula
from ptk.semantics import (SemanticError, Truth3, batch_satisfies, check_partial_truth_predicate,
                           satisfies, std_truth, term_eval, tr0, val)
from ptk.syntax import (ZERO, Add, And, Eq, Exists, Forall, Mul, Not, Or, Succ, Var,
                        apply_assignment, numeral, subst_closed, trivialise)

T, F, U = Truth3.TRUE, Truth3.FALSE, Truth3.UNKNOWN


def test_val_examples():
    assert val(Add(numeral(2), numeral(3))) == 5
    assert val(Mul(numeral(7), Succ(numeral(5)))) == 42
    with pytest.raises(SemanticError):
        val(Var(0))


def test_big_values_do_not_overflow():
    t = numeral(10)
    for _ in range(6):
        t = Mul(t, t)
    assert val(t) == 10 ** 64


def test_term_eval_examples():
    assert term_eval(Mul(Var(0), Var(1)), {0: 3, 1: 0}) == 0
    assert term_eval(numeral(4), {7: 1}) == 4


def test_tr0_examples():
    assert tr0(Eq(numeral(2), Succ(Succ(ZERO))))
    assert not tr0(Not(Eq(ZERO, ZERO)))
    assert tr0(Or(Eq(ZERO, Succ(ZERO)), Eq(Mul(numeral(1), numeral(1)), numeral(1))))
    with pytest.raises(SemanticError):
        tr0(Eq(Var(0), ZERO))
    with pytest.raises(SemanticError):
        tr0(Exists(0, Eq(Var(0), ZERO)))


def test_std_truth_examples():
    assert std_truth(parse_formula("E v0 (v0 = S(0))"), 10) is T
    assert std_truth(parse_formula("E v0 (S(v0) = 0)"), 50) is U
    assert std_truth(parse_formula("A v0 ~(S(v0) = 0)"), 50) is U
    assert std_truth(parse_formula("A v0 (v0 = 0)"), 3) is F
    # strong Kleene: a decided disjunct decides the disjunction
    assert std_truth(parse_formula("(E v0 (S(v0) = 0) | (0 = 0))"), 3) is T
    assert std_truth(parse_formula("(E v0 (S(v0) = 0) & (0 = S(0)))"), 3) is F
    with pytest.raises(SemanticError):
        std_truth(Eq(Var(0), ZERO), 3)


def test_satisfies_reads_the_assignment():
    f = Exists(1, Eq(Add(Var(1), Var(1)), Var(0)))
    assert satisfies(f, {0: 6}, bound=5) is T
    assert satisfies(f, {0: 7}, bound=10) is U


@given(terms(), st.dictionaries(st.sampled_from([0, 1, 2]), st.integers(0, 20), min_size=3))
def test_term_eval_respects_assignments(t, a):
    assert term_eval(t, a) == val(apply_assignment(t, a))


@given(qf_sentences)
def test_tr0_is_compositional(s):
    kind = type(s)
    if kind is Eq:
        assert tr0(s) == (val(s.left) == val(s.right))
    elif kind is Not:
        assert tr0(s) == (not tr0(s.arg))
    elif kind is Or:
        assert tr0(s) == (tr0(s.left) or tr0(s.right))
    else:
        assert tr0(s) == (tr0(s.left) and tr0(s.right))


@given(qf_sentences, st.randoms(use_true_random=False))
def test_tr0_is_extensional(s, rng):
    tpl = trivialise(s)
    twin = tpl.instantiate([term_with_value(rng, val(t)) for t in tpl.params])
    assert tr0(twin) == tr0(s)


@given(qf_sentences, st.integers(0, 5))
def test_std_truth_decides_quantifier_free(s, bound):
    assert std_truth(s, bound) is Truth3.of(tr0(s))


@given(formulas((0, 1)), st.integers(0, 3), st.integers(0, 3))
def test_std_truth_is_monotone_in_bound(f, b1, extra):
    s = subst_closed(subst_closed(f, 0, numeral(1)), 1, numeral(2))
    low, high = std_truth(s, b1), std_truth(s, b1 + extra)
    if low is not U:
        assert high is low


@given(formulas((0,)), st.integers(0, 2))
def test_batch_matches_pointwise(f, bound):
    values = list(range(12))
    batch = batch_satisfies(f, 0, values, bound=bound)
    assert batch == [satisfies(f, {0: v}, bound) for v in values]


def test_partial_truth_predicate_checks():
    probe = {Eq(ZERO, ZERO), Not(Eq(ZERO, ZERO)), Or(Eq(ZERO, ZERO), Not(Eq(ZERO, ZERO))),
             Eq(numeral(1), numeral(1))}
    T0 = {s for s in probe if tr0(s)}
    assert check_partial_truth_predicate(T0, probe).passed
    bad = check_partial_truth_predicate({Not(Eq(ZERO, ZERO))}, {Not(Eq(ZERO, ZERO))})
    assert not bad.passed
    assert any("axiom" in str(f["input"]) or "closure" in str(f["input"]) for f in bad.failures)
    assert check_partial_truth_predicate(set(), set()).passed


def test_partial_truth_predicate_flags_axiom_one():
    report = check_partial_truth_predicate({Eq(ZERO, Succ(ZERO))}, {Eq(ZERO, Succ(ZERO))})
    assert not report.passed
    assert report.failures[0]["input"]["clause"] == "axiom 1"


def test_partial_truth_predicate_flags_extensionality():
    a, b = Eq(numeral(1), numeral(1)), Eq(Add(ZERO, numeral(1)), numeral(1))
    # a non-compositional T that splits an extensional pair
    report = check_partial_truth_predicate({a}, {a, b})
    assert any("axiom 5" in f["input"] for f in report.failures if isinstance(f["input"], dict))


def test_partial_truth_predicate_with_quantifiers():
    s = Exists(0, Eq(Var(0), numeral(1)))
    inst = [subst_closed(s.body, 0, numeral(n)) for n in range(3)]
    T0 = {s} | {i for i in inst if tr0(i)}
    assert check_partial_truth_predicate(T0, {s, *inst}).passed
    report = check_partial_truth_predicate(T0 - {s}, {s, *inst})
    assert not report.passed
