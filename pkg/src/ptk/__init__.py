"""Arithmetical syntax, truth predicates, and executable checks of the
constructions built from them."""

__version__ = "0.1.0"

from .constructions import (acdc_lhs, big_and_left, big_or_left, corollary_formula, le_formula,
                            stopping_disjunction, theta_c, unique)
from .godel import godel_decode, godel_encode
from .parsing import ParseError, parse, parse_formula, parse_term
from .prop import entails, is_tautology, skeleton
from .semantics import Truth3, std_truth, term_eval, tr0, val
from .syntax import (Add, And, Eq, Exists, Forall, Formula, Iff, Imp, Mul, Not, Or, Succ, Term,
                     Var, ZERO, apply_assignment, ext_equiv, free_vars, numeral, similar,
                     subst_closed, to_text, trivialise)

__all__ = [
    "Add", "And", "Eq", "Exists", "Forall", "Formula", "Iff", "Imp", "Mul", "Not", "Or", "Succ",
    "Term", "Var", "ZERO", "ParseError", "Truth3", "acdc_lhs", "apply_assignment",
    "big_and_left", "big_or_left", "corollary_formula", "entails", "ext_equiv", "free_vars",
    "godel_decode", "godel_encode", "is_tautology", "le_formula", "numeral", "parse",
    "parse_formula", "parse_term", "similar", "skeleton", "std_truth", "stopping_disjunction",
    "subst_closed", "term_eval", "theta_c", "to_text", "tr0", "trivialise", "unique", "val",
]
