import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import closed_terms, formulas, qf_sentences, terms
from ptk.godel import CodeTooLarge, godel_decode, godel_encode, is_sentence_code, pair, unpair
from ptk.parsing import ParseError, parse, parse_formula, parse_lines, parse_term
from ptk.syntax import (ZERO, Add, And, AssignmentError, Eq, Exists, Forall, Mul, Not, Or,
                        Succ, SyntaxTypeError, Var, apply_assignment, bound_vars,
                        connective_count, ext_equiv, free_vars, numeral, similar,
                        subst_closed, to_text, trivialise)
from ptk.verifier import worked_example


# ---------------------------------------------------------------- construction

def test_sorts_are_enforced():
    with pytest.raises(SyntaxTypeError):
        Eq(Eq(ZERO, ZERO), ZERO)
    with pytest.raises(SyntaxTypeError):
        Not(ZERO)
    with pytest.raises(SyntaxTypeError):
        Succ(Eq(ZERO, ZERO))


def test_structural_equality_and_caches():
    a = Add(Var(0), numeral(2))
    b = Add(Var(0), numeral(2))
    assert a == b and hash(a) == hash(b)
    assert Var(0) != Var(1)
    assert free_vars(Exists(0, Eq(a, Var(3)))) == {3}
    assert Exists(0, Eq(Var(0), ZERO)).is_sentence
    assert not Exists(0, Eq(Var(0), ZERO)).is_quantifier_free
    assert connective_count(Forall(1, Not(Or(Eq(ZERO, ZERO), Eq(ZERO, ZERO))))) == 3


def test_numeral_shape():
    assert numeral(0) == ZERO
    assert numeral(3) == Succ(Succ(Succ(ZERO)))
    with pytest.raises(ValueError):
        numeral(-1)


def test_deep_trees_do_not_recurse():
    t = numeral(50_000)
    f = Eq(t, t)
    assert len(to_text(f)) > 100_000
    assert parse(to_text(f)) == f
    assert godel_decode(godel_encode(numeral(18))) == numeral(18)


def test_oversized_codes_are_refused():
    # each S roughly doubles the bit length of a numeral's code
    with pytest.raises(CodeTooLarge):
        godel_encode(numeral(40))


def test_substitution_of_closed_terms():
    f = Exists(0, Eq(Var(0), Var(1)))
    assert subst_closed(f, 1, numeral(2)) == Exists(0, Eq(Var(0), numeral(2)))
    # bound occurrences are left alone
    assert subst_closed(f, 0, numeral(2)) == f
    with pytest.raises(ValueError):
        subst_closed(f, 1, Var(4))


def test_apply_assignment_needs_every_free_variable():
    with pytest.raises(AssignmentError):
        apply_assignment(Eq(Var(0), Var(1)), {0: 1})
    assert apply_assignment(Eq(Var(0), Var(1)), {0: 1, 1: 0}) == Eq(numeral(1), ZERO)


# ---------------------------------------------------------------- text

def test_grammar_examples():
    assert to_text(Add(Var(0), Succ(ZERO))) == "(v0 + S(0))"
    assert to_text(Exists(0, Eq(Var(0), ZERO))) == "E v0 (v0 = 0)"
    assert to_text(Not(Or(Eq(ZERO, ZERO), Eq(ZERO, ZERO)))) == "~((0 = 0) | (0 = 0))"
    assert parse_formula("A v1 ~(v1 = S(0))") == Forall(1, Not(Eq(Var(1), Succ(ZERO))))
    assert parse_term("((0 * v2) + 0)") == Add(Mul(ZERO, Var(2)), ZERO)


@pytest.mark.parametrize("bad", ["", "(0 =", "(0 = 0))", "S 0", "E (0 = 0)", "(0 + (0 = 0))",
                                 "v", "(0 = 0) (0 = 0)", "%"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_parse_lines_skips_comments():
    assert parse_lines("# header\n(0 = 0)\n\n~(0 = 0)  # trailing\n") == [
        Eq(ZERO, ZERO), Not(Eq(ZERO, ZERO))]


@given(formulas())
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


@given(terms())
def test_print_parse_round_trip_terms(t):
    assert parse(to_text(t)) == t


# ---------------------------------------------------------------- Gödel coding

def _oracle_code(x):
    """Direct recursive transcription of the coding, used as a second route."""
    p = lambda a, b: (a + b) * (a + b + 1) // 2 + b
    kind = type(x).__name__
    if kind == "Zero":
        return p(0, 0)
    if kind == "Var":
        return p(1, x.index)
    if kind in ("Succ", "Not"):
        return p(x.tag, _oracle_code(x.children()[0]))
    if kind in ("Exists", "Forall"):
        return p(x.tag, p(x.var, _oracle_code(x.body)))
    left, right = x.children()
    return p(x.tag, p(_oracle_code(left), _oracle_code(right)))


def test_frozen_codes():
    assert godel_encode(ZERO) == 0
    assert godel_encode(Var(0)) == 1
    assert godel_encode(Succ(ZERO)) == 3
    assert godel_encode(Eq(ZERO, ZERO)) == 15
    assert godel_encode(Not(Eq(ZERO, ZERO))) == 246
    assert godel_decode(15) == Eq(ZERO, ZERO)


def test_small_non_codes_decode_to_none():
    # pair(0, 1) would be Zero with a nonzero payload
    assert godel_decode(pair(0, 1)) is None
    assert godel_decode(pair(11, 0)) is None
    assert godel_decode(-1) is None
    codes = {godel_encode(x) for x in
             [ZERO, Var(0), Var(1), Succ(ZERO), Eq(ZERO, ZERO), Add(ZERO, ZERO)]}
    for n in range(40):
        node = godel_decode(n)
        assert (node is not None) == (node is not None and godel_encode(node) == n)
        if n in codes:
            assert node is not None


@given(st.integers(0, 10**12))
def test_pair_unpair(n):
    assert pair(*unpair(n)) == n


@given(formulas())
def test_code_matches_recursive_oracle_and_decodes(f):
    code = godel_encode(f)
    assert code == _oracle_code(f)
    assert godel_decode(code) == f
    assert is_sentence_code(code) == f.is_sentence


@given(terms() | formulas(), terms() | formulas())
def test_coding_is_injective(x, y):
    assert (godel_encode(x) == godel_encode(y)) == (x == y)


def test_term_and_formula_codes_are_disjoint():
    for n in range(3000):
        node = godel_decode(n)
        if node is not None:
            assert unpair(n)[0] <= 4 or node.tag >= 5


# ---------------------------------------------------------------- trivialisation

def test_worked_example_skeleton():
    phi, want = worked_example()
    tpl = trivialise(phi)
    assert tpl.skeleton == want
    assert to_text(tpl.skeleton) == "E v0 A v3 ((v0 + v1) = ((v0 * v3) + v2))"
    assert tpl.params == (Add(Mul(Var(5), Succ(ZERO)), Mul(ZERO, Var(6))), ZERO)


def test_repeated_free_variable_is_split():
    tpl = trivialise(Eq(Var(0), Var(0)))
    assert tpl.skeleton == Eq(Var(0), Var(1))
    assert tpl.params == (Var(0), Var(0))


def test_closed_terms_are_extracted():
    tpl = trivialise(Eq(numeral(1), numeral(1)))
    assert tpl.skeleton == Eq(Var(0), Var(1))
    assert tpl.params == (numeral(1), numeral(1))


def test_succ_over_bound_variable_is_kept():
    f = Exists(0, Eq(Succ(Var(0)), Add(Var(0), numeral(1))))
    tpl = trivialise(f)
    assert tpl.skeleton == Exists(0, Eq(Succ(Var(0)), Add(Var(0), Var(1))))


def test_similarity_examples():
    assert similar(Eq(numeral(1), numeral(1)), Eq(numeral(7), ZERO))
    assert not similar(Eq(ZERO, ZERO), Exists(0, Eq(Var(0), ZERO)))
    t = Add(numeral(1), numeral(1))
    assert ext_equiv(Eq(numeral(2), numeral(2)), {}, Eq(t, Mul(numeral(2), numeral(1))), {})
    assert not ext_equiv(Eq(numeral(2), numeral(2)), {}, Eq(numeral(2), numeral(3)), {})
    assert ext_equiv(Eq(Var(0), ZERO), {0: 3}, Eq(numeral(3), ZERO), {})
    with pytest.raises(AssignmentError):
        ext_equiv(Eq(Var(0), ZERO), {}, Eq(ZERO, ZERO), {})


def _skeleton_conditions(f, tpl):
    sk = tpl.skeleton
    bound = bound_vars(sk)
    free_occurrences = []
    for node in _nodes(sk):
        if isinstance(node, Var) and node.index not in bound:
            free_occurrences.append(node.index)
    assert len(free_occurrences) == len(set(free_occurrences))
    assert not (set(free_occurrences) & bound)
    assert list(tpl.param_vars) == free_occurrences
    for node in _nodes(sk):
        if node.tag <= 4 and not free_vars(node):
            raise AssertionError(f"closed term left in skeleton: {to_text(node)}")


def _nodes(x):
    stack = [x]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children()))


@given(formulas())
def test_trivialise_reconstructs_and_meets_conditions(f):
    tpl = trivialise(f)
    assert tpl.instantiate() == f
    _skeleton_conditions(f, tpl)


@given(formulas())
def test_trivialise_is_idempotent(f):
    sk = trivialise(f).skeleton
    again = trivialise(sk)
    assert again.skeleton == sk
    assert again.params == tuple(Var(v) for v in again.param_vars)
    assert len(set(again.params)) == len(again.params)


@given(formulas(), formulas(), formulas())
def test_similarity_is_an_equivalence(f, g, h):
    assert similar(f, f)
    assert similar(f, g) == similar(g, f)
    if similar(f, g) and similar(g, h):
        assert similar(f, h)


@given(st.lists(qf_sentences, min_size=3, max_size=3))
def test_ext_equiv_is_an_equivalence(fs):
    f, g, h = fs
    assert ext_equiv(f, {}, f, {})
    assert ext_equiv(f, {}, g, {}) == ext_equiv(g, {}, f, {})
    if ext_equiv(f, {}, g, {}) and ext_equiv(g, {}, h, {}):
        assert ext_equiv(f, {}, h, {})


@given(closed_terms, closed_terms)
def test_ext_equiv_tracks_values(s, t):
    from ptk.semantics import val
    assert ext_equiv(Eq(s, ZERO), {}, Eq(t, ZERO), {}) == (val(s) == val(t))
