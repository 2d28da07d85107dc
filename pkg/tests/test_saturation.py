import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import formulas
from ptk.parsing import parse_formula
from ptk.saturation import (ClassOrder, Domain, PartialSatPredicate, build_s0, check_agreement,
                            check_comp, check_extensionality, check_monotone,
                            check_preservation, saturate, similarity_classes)
from ptk.semantics import term_eval, tr0
from ptk.syntax import ZERO, Eq, Exists, Formula, Not, Or, Var, numeral
from ptk.verifier import load_family, verify_saturation

P = parse_formula


def _closure(fs):
    out, stack = {}, list(fs)
    while stack:
        f = stack.pop()
        if f in out:
            continue
        out[f] = None
        stack.extend(k for k in f.children() if isinstance(k, Formula))
    return list(out)


def test_domain_parse():
    assert Domain.parse("0..3").values == (0, 1, 2, 3)
    assert Domain.parse("5,0,2").values == (0, 2, 5)
    assert str(Domain.parse("0..7")) == "0..7"
    assert str(Domain.parse("0,2")) == "0,2"
    for bad in ("", "a..b", "-1,2"):
        with pytest.raises(ValueError):
            Domain.parse(bad)


def test_assignments_cover_free_variables():
    D = Domain((0, 1))
    assert list(D.assignments(P("(v0 = v1)"))) == [
        ((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 0)), ((0, 1), (1, 1))]
    assert list(D.assignments(P("(0 = 0)"))) == [()]


def test_class_order_examples():
    p = P("(0 = 0)")
    classes = similarity_classes([p, Not(p)])
    order = ClassOrder(classes)
    assert order.le(0, 1) and not order.le(1, 0)
    # equations all share the skeleton (v0 = v1); these two skeletons differ
    unrelated = ClassOrder(similarity_classes([P("E v0 (v0 = 0)"), P("E v0 (0 = v0)")]))
    assert not unrelated.le(0, 1) and not unrelated.le(1, 0)
    chain = ClassOrder(similarity_classes([p, Not(p), Not(Not(p))]))
    assert chain.le(0, 1) and chain.le(1, 2) and chain.le(0, 2)
    assert chain.linear_extension() == [0, 1, 2]
    assert chain.minimal(0) and not chain.minimal(2)


def test_similar_members_share_a_class():
    classes = similarity_classes([P("(0 = 0)"), P("(S(0) = 0)"), P("~(0 = 0)")])
    assert [len(c.members) for c in classes] == [2, 1]
    assert all(c.rank == 0 for c in classes[:1])


def test_s0_bullets():
    D = Domain((3,))
    S = build_s0([P("(v0 = v0)")], [], None, D)
    assert S.holds(P("(v0 = v0)"), {0: 3})
    S = build_s0([P("(S(0) = S(0))")], [P("(0 = 0)")], None, Domain((0,)))
    assert ((P("(S(0) = S(0))"), ()) in S.pairs)
    q = P("E v0 (v0 = v0)")
    S = build_s0([q], [], None, Domain((0,)))
    assert not S.holds(q, {})


def test_s0_from_earlier_predicate():
    prev = saturate([P("(0 = 0)"), P("E v0 (v0 = 0)")], [], None, Domain((0, 1)))
    S = build_s0([P("E v1 (v1 = S(0))")], [], prev, Domain((0, 1)))
    # similar to E v0 (v0 = 0) but with a different parameter value: not covered
    assert not S.holds(P("E v1 (v1 = S(0))"), {})
    S = build_s0([P("E v0 (v0 = (0 + 0))")], [], prev, Domain((0, 1)))
    assert S.holds(P("E v0 (v0 = (0 + 0))"), {})
    assert check_preservation(saturate([P("E v0 (v0 = 0)")], [], prev, Domain((0, 1))),
                              prev).passed


def test_negation_example():
    t, f = P("(0 = 0)"), P("~(0 = 0)")
    S = saturate([t, f], [t], None, Domain((0,)))
    assert S.holds(t, ()) and not S.holds(f, ())
    for phi in (t, f):
        assert check_comp(S, phi).passed


def test_existential_enters_at_stage_one():
    eq, ex = P("(v0 = v0)"), P("E v0 (v0 = v0)")
    S = saturate([eq, ex], [], None, Domain((0,)))
    assert (ex, ()) in S.stages[1]
    assert (ex, ()) not in S.stages[0]
    assert check_monotone(S).passed


def test_empty_family():
    S = saturate([], [], None, Domain((0, 1)))
    assert len(S) == 0
    assert check_extensionality(S).passed


def test_dropped_pair_is_reported():
    family = _closure([P("E v0 ~(v0 = S(0))")])
    S = saturate(family, [], None, Domain((0, 1, 2)))
    target = P("E v0 ~(v0 = S(0))")
    assert S.holds(target, {})
    S.discard(target, ())
    report = check_comp(S, target)
    assert not report.passed
    assert report.failures[0]["input"]["formula"] == "E v0 ~(v0 = S(0))"
    assert report.failures[0]["input"]["assignment"] == {}


def test_dropped_pair_breaks_extensionality():
    a, b = P("(0 = 0)"), P("((0 + 0) = 0)")
    S = saturate([a, b], [a], None, Domain((0,)))
    assert check_extensionality(S).passed
    S.discard(b, ())
    assert not check_extensionality(S).passed


def test_missing_seed_breaks_agreement():
    S = saturate([P("(0 = 0)")], [], None, Domain((0,)))
    assert not check_agreement(S, [P("E v0 (v0 = v0)")]).passed


def test_missing_subformula_is_caught():
    # without (0 = 0) in the family its negation is wrongly satisfied
    report = verify_saturation([Not(Eq(ZERO, ZERO))], Domain((0,)))
    assert not report.passed


def test_equation_family_matches_term_eval():
    family = [P("(v0 = v1)"), P("((v0 + v0) = v1)"), P("((v0 * v1) = S(0))")]
    D = Domain(range(4))
    S = saturate(family, [], None, D)
    want = {(f, a) for f in family for a in D.assignments(f)
            if term_eval(f.left, dict(a)) == term_eval(f.right, dict(a))}
    assert S.pairs == want


def test_default_family():
    family = load_family()
    assert len(family) == 30
    assert set(_closure(family)) == set(family)
    report = verify_saturation(family, Domain(range(8)))
    assert report.passed, report.failures[:3]


@given(st.lists(formulas((0, 1)), min_size=1, max_size=3), st.integers(1, 3))
def test_saturation_properties(seeds, top):
    family = _closure(seeds)
    D = Domain(tuple(range(top)))
    truths = [f for f in family if f.is_sentence and f.is_quantifier_free and tr0(f)]
    S = saturate(family, truths, None, D)
    for f in family:
        assert check_comp(S, f).passed
    assert check_extensionality(S).passed
    assert check_agreement(S, truths).passed
    assert check_monotone(S).passed
    for f in family:
        if f.is_sentence and f.is_quantifier_free:
            assert S.holds(f, ()) == tr0(f)


@given(st.lists(formulas((0, 1)), min_size=1, max_size=3))
def test_stages_only_grow(seeds):
    family = _closure(seeds)
    S = saturate(family, [], None, Domain((0, 1)))
    running = set()
    for stage in S.stages:
        before = set(running)
        running |= stage
        assert before <= running
    assert running == S.pairs
    # the fixpoint is reached within the number of possible pairs, plus the final empty pass
    space = sum(len(list(S.domain.assignments(f))) for f in family)
    assert len(S.stages) <= space + len(family) + 1
