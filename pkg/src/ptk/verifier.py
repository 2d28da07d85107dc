"""Verification suites.  Each suite builds its instances from a seed, checks
them against an oracle, and returns a ``Report``.

Suites that stand in for statements about nonstandard models run on their
standard-model, quantifier-free analogue and say so in the report notes.
Builders are parameters so tests can inject a broken construction and
watch the suite fail.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence

from .cnf import dpll, export_dimacs, parse_dimacs, to_cnf_tseitin
from .constructions import (Permutation, acdc_lhs, big_and_or_true, big_or_left,
                            case_distinction, case_equations, corollary_formula, lt_formula,
                            permute_seq, stopping_disjunction, theta_c, unique)
from .corpus import (CorpusSpec, random_closed_term, random_distinct_sentences, random_formula,
                     random_prop, random_qf_sentence, term_with_value)
from .godel import godel_decode
from .itb import (IndexForall, IndexVar, IotaTranslator, TruthAt, demo_gamma, demo_phi,
                  iota_size, relativize)
from .parsing import parse_lines
from .prop import (AtomTable, PAnd, PImp, PNot, POr, atoms_of, countermodel, eval_valuation,
                   skeleton, truth_table_countermodel)
from .report import Report
from .saturation import (Domain, check_agreement, check_comp, check_extensionality,
                         check_monotone, saturate)
from .semantics import Truth3, batch_satisfies, std_truth, tr0, val
from .syntax import (FALSE, And, Eq, Exists, Forall, Formula, Imp, Iff, Not, Or, Var, numeral,
                     subst_closed, to_text, trivialise)

DESK_NOTE = "desk-scale analog: standard model, quantifier-free instances"


# ---------------------------------------------------------------- stopping condition

def verify_prop33(spec: CorpusSpec = CorpusSpec(c_max=5), builder=stopping_disjunction,
                  exhaustive_max: int = 5) -> Report:
    """Under every valuation with exactly one alpha true, the stopping
    disjunction, the plain case distinction and the chosen beta agree."""
    report = Report("prop33", seed=spec.seed)
    rng = spec.rng("prop33")
    for c in range(spec.c_min, spec.c_max + 1):
        atoms = [Eq(numeral(k), numeral(k)) for k in range(2 * c + 2)]
        alphas, betas = atoms[:c + 1], atoms[c + 1:]
        table = AtomTable()
        for s in atoms:
            table.atom(s)
        stop = skeleton(builder(alphas, betas, 0), table)[0]
        plain = skeleton(case_distinction(alphas, betas), table)[0]
        if c <= exhaustive_max:
            cases = [(k, bits) for k in range(c + 1)
                     for bits in itertools.product((False, True), repeat=c + 1)]
        else:
            cases = [(rng.randrange(c + 1), tuple(rng.random() < 0.5 for _ in range(c + 1)))
                     for _ in range(spec.n)]
        for k, bits in cases:
            v = {i: i == k for i in range(c + 1)}
            v.update({c + 1 + i: b for i, b in enumerate(bits)})
            got = (eval_valuation(stop, v), eval_valuation(plain, v))
            want = bits[k]
            report.check(got == (want, want), {"c": c, "k": k, "betas": list(bits)},
                         [want, want], list(got))
    return report


def _obligations(c: int, rng, report: Report, mutate: bool, engine: str = "auto") -> None:
    """Introduction, refutation, permutation and Unique-bridge tautologies
    for one size; with ``mutate`` the broken variants, which must fail."""
    t = random_closed_term(rng, 2)
    eqs = case_equations(t, c)
    # atomic cases distinct from the equations keep every atom independent
    phis = [s for s in random_distinct_sentences(rng, 2 * c + 2, depth=0) if s not in eqs][:c + 1]
    lhs = acdc_lhs(t, phis)
    parts = [And(e, p) for e, p in zip(eqs, phis)]

    def expect(name, formula, want):
        p, _ = skeleton(formula)
        cm = countermodel(p, engine)
        actual = cm is None
        detail = None if cm is None else {str(k): b for k, b in sorted(cm.items())}
        report.check(actual == want, {"obligation": name, "c": c, "mutant": not want},
                     want, {"tautology": actual, "countermodel": detail})

    a = rng.randrange(c + 1)
    sigma = list(range(c + 1))
    rng.shuffle(sigma)
    sigma = Permutation(sigma)
    if not mutate:
        expect("introduction", Imp(And(eqs[a], phis[a]), lhs), True)
        expect("refutation", Imp(big_and_or_true([Not(e) for e in eqs]), Not(lhs)), True)
        expect("permutation", Iff(lhs, big_or_left(permute_seq(parts, sigma))), True)
        expect("permutation-swap",
               Iff(lhs, big_or_left(permute_seq(parts, Permutation.swap(c + 1, 0, a)))), True)
        expect("unique-bridge",
               Imp(unique(eqs), Iff(lhs, stopping_disjunction(eqs, phis, 0))), True)
        return
    # each mutant drops or swaps one piece the tautology depends on
    b = (a + 1) % (c + 1)
    wrong = parts[:a] + parts[a + 1:] or [FALSE]
    expect("introduction", Imp(And(eqs[a], phis[a]), big_or_left(wrong)), False)
    others = [Not(e) for i, e in enumerate(eqs) if i != a]
    expect("refutation", Imp(big_and_or_true(others), Not(lhs)), False)
    image = list(permute_seq(parts, sigma))
    image[image.index(parts[a])] = parts[b] if b != a else FALSE
    expect("permutation", Iff(lhs, big_or_left(image)), False)
    expect("unique-bridge", Iff(lhs, stopping_disjunction(eqs, phis, 0)), False)


def verify_obligations(spec: CorpusSpec = CorpusSpec(c_max=5)) -> Report:
    """The proof obligations as tautologies, with mutated duals that must fail."""
    report = Report("obligations", seed=spec.seed)
    rng = spec.rng("obligations")
    for c in range(spec.c_min, spec.c_max + 1):
        _obligations(c, rng, report, mutate=False)
        if c >= 1:
            _obligations(c, rng, report, mutate=True)
    return report


def verify_cor34(spec: CorpusSpec = CorpusSpec(c_max=64, n=20), builder=corollary_formula,
                 exhaustive_max: int = 5) -> Report:
    """Truth tables for c <= 5, DPLL for ``spec.n`` random c up to ``c_max``,
    the dropped-antecedent dual, and the proof obligations."""
    report = Report("cor34", seed=spec.seed)
    rng = spec.rng("cor34")
    sizes = [(c, "table") for c in range(0, min(exhaustive_max, spec.c_max) + 1)]
    if spec.c_max > exhaustive_max:
        sizes += [(rng.randint(exhaustive_max + 1, spec.c_max), "dpll") for _ in range(spec.n)]
    for c, engine in sizes:
        alphas = [Eq(numeral(k), numeral(k)) for k in range(c + 1)]
        betas = [Eq(numeral(k), numeral(k)) for k in range(c + 1, 2 * c + 2)]
        p, _ = skeleton(builder(alphas, betas))
        cm = countermodel(p, engine)
        report.check(cm is None, {"c": c, "engine": engine}, "tautology",
                     {"countermodel": cm})
    for c in range(1, min(3, spec.c_max) + 1):
        alphas = [Eq(numeral(k), numeral(k)) for k in range(c + 1)]
        betas = [Eq(numeral(k), numeral(k)) for k in range(c + 1, 2 * c + 2)]
        bare = Iff(stopping_disjunction(alphas, betas, 0), case_distinction(alphas, betas))
        p, _ = skeleton(bare)
        cm = countermodel(p, "table")
        report.check(cm is not None, {"c": c, "dual": "without Unique"}, "countermodel",
                     "tautology")
        if cm is not None:
            report.note(f"without Unique, c={c}: countermodel "
                        + " ".join(f"p{k}={int(b)}" for k, b in sorted(cm.items())))
    report.merge(verify_obligations(replace(spec, c_min=0, c_max=min(spec.c_max, 5))))
    return report


def _planted(rng, c: int, k0: int, depth: int = 2):
    def with_truth(want):
        s = random_qf_sentence(rng, depth)
        return s if tr0(s) == want else Not(s)

    alphas = [with_truth(False) for _ in range(k0)] + [with_truth(True)]
    alphas += [random_qf_sentence(rng, depth) for _ in range(c - k0)]
    betas = [random_qf_sentence(rng, depth) for _ in range(c + 1)]
    return alphas, betas


def verify_thm32(spec: CorpusSpec = CorpusSpec(c_max=50, n=500), builder=stopping_disjunction,
                 k_max: int = 10) -> Report:
    """With the least true alpha planted at k0, the stopping disjunction
    has the truth value of beta_k0."""
    report = Report("thm32", seed=spec.seed)
    report.note(DESK_NOTE)
    rng = spec.rng("thm32")
    for _ in range(spec.n):
        c = rng.randint(spec.c_min, spec.c_max)
        k0 = rng.randint(0, min(k_max, c))
        alphas, betas = _planted(rng, c, k0)
        got = tr0(builder(alphas, betas, 0))
        want = tr0(betas[k0])
        report.check(got == want, {"c": c, "k0": k0, "beta_k0": betas[k0]}, want, got)
    return report


def verify_acdc(spec: CorpusSpec = CorpusSpec(c_max=10, n=200), out_of_range_every: int = 5
                ) -> Report:
    """Case distinction over a closed term is true iff the case selected by
    its value exists and holds; every fifth term lands above c."""
    report = Report("acdc", seed=spec.seed)
    rng = spec.rng("acdc")
    outside = 0
    for k in range(spec.n):
        c = rng.randint(spec.c_min, spec.c_max)
        if k % out_of_range_every == 0:
            value = rng.randint(c + 1, c + 5)
            outside += 1
        else:
            value = rng.randint(0, c)
        t = term_with_value(rng, value)
        phis = [random_qf_sentence(rng, 2) for _ in range(c + 1)]
        got = tr0(acdc_lhs(t, phis))
        v = val(t)
        want = v <= c and tr0(phis[v])
        report.check(got == want, {"c": c, "term": t, "value": v}, want, got)
    report.note(f"{outside} instances with value above c")
    return report


# ---------------------------------------------------------------- truth predicate

def _qf_clause(s: Formula) -> bool:
    kind = type(s)
    if kind is Eq:
        return val(s.left) == val(s.right)
    if kind is Not:
        return not tr0(s.arg)
    if kind is Or:
        return tr0(s.left) or tr0(s.right)
    return tr0(s.left) and tr0(s.right)


def verify_tr0(spec: CorpusSpec = CorpusSpec(n=1000, formula_depth=4, term_depth=2)) -> Report:
    """Compositional clauses at every node, agreement with the propositional
    skeleton, and invariance under value-preserving term replacement."""
    report = Report("tr0", seed=spec.seed)
    rng = spec.rng("tr0")
    for _ in range(spec.n):
        s = random_qf_sentence(rng, spec.formula_depth, spec.term_depth)
        truth = tr0(s)
        stack = [s]
        while stack:
            node = stack.pop()
            report.check(tr0(node) == _qf_clause(node), {"clause": type(node).__name__, "sentence": node},
                         _qf_clause(node), tr0(node))
            if type(node) is not Eq:
                stack.extend(node.children())
        p, table = skeleton(s)
        by_table = eval_valuation(p, {i: tr0(a) for i, a in table.items()})
        report.check(by_table == truth, {"skeleton": s}, truth, by_table)
        tpl = trivialise(s)
        matched = [term_with_value(rng, val(t)) for t in tpl.params]
        twin = tpl.instantiate(matched)
        report.check(tr0(twin) == truth, {"sentence": s, "value-matched": twin}, truth, tr0(twin))
    report.check(tr0(Not(Not(Eq(numeral(1), numeral(1))))), {"double negation": "~~(1 = 1)"})
    return report


# ---------------------------------------------------------------- coding formula

def verify_theta(c_max: int = 5000, spot_checks: int = 40, seed: int = 0) -> Report:
    """Theta_c at every numeral i <= c: true exactly when i codes a true
    quantifier-free sentence; quantified decodes are counted and skipped.

    Every i is checked by one batch evaluation of Theta_c over all values of
    its free variable; a seeded sample is re-checked by substituting the
    numeral and evaluating the resulting sentence on its own.
    """
    report = Report("theta", seed=seed)
    theta = theta_c(c_max, var=0)
    batch = batch_satisfies(theta, 0, range(c_max + 1), bound=0)
    kinds = {"non-sentence": 0, "quantifier-free": 0, "quantified": 0}
    expected: Dict[int, bool] = {}
    for i in range(c_max + 1):
        node = godel_decode(i)
        if not isinstance(node, Formula) or not node.is_sentence:
            kinds["non-sentence"] += 1
            expected[i] = False
        elif node.is_quantifier_free:
            kinds["quantifier-free"] += 1
            expected[i] = tr0(node)
        else:
            kinds["quantified"] += 1
            continue
        got = batch[i]
        report.check(got is Truth3.of(expected[i]), {"i": i, "decoded": node},
                     str(Truth3.of(expected[i])), str(got))
    rng = random.Random(f"{seed}:theta")
    sample = sorted(set(rng.sample(sorted(expected), min(spot_checks, len(expected))))
                    | {i for i in (0, 15, c_max) if i in expected})
    for i in sample:
        sentence = subst_closed(theta, 0, numeral(i))
        got = std_truth(sentence, 0)
        report.check(got is Truth3.of(expected[i]), {"i": i, "route": "substituted"},
                     str(Truth3.of(expected[i])), str(got))
    report.note(f"codes 0..{c_max}: {kinds['non-sentence']} non-sentences, "
                f"{kinds['quantifier-free']} quantifier-free sentences, "
                f"{kinds['quantified']} quantified sentences skipped")
    return report


# ---------------------------------------------------------------- saturation

def load_family(path: Optional[str] = None) -> List[Formula]:
    if path is None:
        text = resources.files("ptk").joinpath("data/family30.txt").read_text()
    elif path == "-":
        import sys

        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_lines(text)


def verify_saturation(family: Optional[Sequence[Formula]] = None,
                      D: Domain = Domain(tuple(range(8))), seed: Optional[int] = None) -> Report:
    """Saturate the family seeded with its true quantifier-free sentences,
    then check Comp at every formula, extensionality, seed agreement,
    stage monotonicity and agreement with tr0 on quantifier-free sentences."""
    family = load_family() if family is None else list(family)
    report = Report("saturation", seed=seed)
    seeds = [f for f in family if f.is_sentence and f.is_quantifier_free and tr0(f)]
    S = saturate(family, seeds, None, D)
    for f in family:
        check_comp(S, f, D, report)
    check_extensionality(S, report)
    check_agreement(S, seeds, report)
    check_monotone(S, report)
    for f in family:
        if f.is_sentence and f.is_quantifier_free:
            report.check(S.holds(f, ()) == tr0(f), {"oracle": f}, tr0(f), S.holds(f, ()))
    report.note(f"{len(family)} formulas, domain {D}, {len(S)} pairs, {len(S.stages)} stages")
    return report


# ---------------------------------------------------------------- trivialisation

def worked_example():
    """E x A y (x + (z*S0 + 0*u) = x*y + 0) with x, y, z, u = v0, v3, v5, v6."""
    from .syntax import Add, Mul, ZERO, Succ

    x, y, z, u = Var(0), Var(3), Var(5), Var(6)
    body = Eq(Add(x, Add(Mul(z, Succ(ZERO)), Mul(ZERO, u))), Add(Mul(x, y), ZERO))
    phi = Exists(0, Forall(3, body))
    want = Exists(0, Forall(3, Eq(Add(x, Var(1)), Add(Mul(x, y), Var(2)))))
    return phi, want


def verify_trivialise(spec: CorpusSpec = CorpusSpec(n=10_000, formula_depth=4, term_depth=2)
                      ) -> Report:
    report = Report("trivialise", seed=spec.seed)
    phi, want = worked_example()
    tpl = trivialise(phi)
    report.check(tpl.skeleton == want, {"worked example": phi}, want, tpl.skeleton)
    rng = spec.rng("trivialise")
    for _ in range(spec.n):
        f = random_formula(rng, spec.formula_depth, spec.term_depth, (0, 1, 2))
        tpl = trivialise(f)
        back = tpl.instantiate()
        report.check(back == f, {"formula": f}, f, back)
    return report


# ---------------------------------------------------------------- iota

def _spine(f, cls):
    out = []
    while type(f) is cls:
        out.append(f.right)
        f = f.left
    out.append(f)
    return out[::-1]


def verify_iota(a_max: int = 3, n_max: int = 3, phi: Formula = None,
                gamma: Sequence[Formula] = None) -> Report:
    """Translation clauses checked node by node against the displayed
    templates, and tree sizes against the size recurrence."""
    report = Report("iota")
    phi = demo_phi() if phi is None else phi
    gamma = list(demo_gamma() if gamma is None else gamma)
    b0 = IndexVar(0)
    for n in range(1, n_max + 1):
        gam = gamma[:n]
        tr = IotaTranslator(phi, gam)
        fresh = IotaTranslator(phi, gam, memo=False)
        for a in range(a_max + 1):
            for idx, g in enumerate(gam, 1):
                out = tr.translate(g, a)
                report.check(out.size == iota_size(g, a, phi, gam),
                             {"a": a, "n": n, "gamma": idx, "check": "size"},
                             iota_size(g, a, phi, gam), out.size)
                report.check(out == fresh.translate(g, a),
                             {"a": a, "n": n, "gamma": idx, "check": "memo"})
            # T(b0, t) unfolds into the nested case distinction
            t = numeral(1)
            clause = tr.translate(TruthAt(b0, t), a)
            outer = _spine(clause, Or)
            ok = len(outer) == n
            for i, part in enumerate(outer, 1):
                ok = ok and type(part) is And and part.left == Eq(t, numeral(i))
                if not ok:
                    break
                inner = part.right
                if a == 0:
                    ok = inner == FALSE
                    continue
                cases = _spine(inner, Or)
                ok = len(cases) == a
                for j, case in enumerate(cases):
                    want = And(And(Eq(Var(0), numeral(j)), tr.phi_at(j)),
                               fresh.translate(gam[i - 1], j))
                    ok = ok and case == want
            report.check(ok, {"a": a, "n": n, "check": "truth clause"})
            if a == 0:
                closed = subst_closed(clause, 0, numeral(0))
                report.check(tr0(closed) is False, {"a": 0, "n": n, "check": "empty range"})
            # arithmetical atoms and number quantifiers pass through
            atom = Exists(3, Eq(Var(3), numeral(2)))
            report.check(tr.translate(atom, a) == atom, {"a": a, "check": "arithmetic"})
            # index quantifiers are guarded by d_a, and relativisation by <
            body = TruthAt(b0, numeral(1))
            got = tr.translate(IndexForall(0, body), a)
            want = Forall(0, Imp(tr.domain(0, a), tr.translate(body, a)))
            report.check(got == want, {"a": a, "n": n, "check": "index quantifier"})
            rel = relativize(IndexForall(0, body), 4)
            got = tr.translate(rel, a)
            want = Forall(0, Imp(tr.domain(0, a),
                                 Imp(lt_formula(Var(0), Var(4)), tr.translate(body, a))))
            report.check(got == want, {"a": a, "n": n, "check": "relativized quantifier"})
    report.note("internal induction is vacuous over the standard model and is not checked")
    return report


# ---------------------------------------------------------------- engines

def _solve_dimacs(text: str) -> bool:
    """Satisfiability of DIMACS text by an external solver when available."""
    cnf = parse_dimacs(text)
    try:
        from pysat.solvers import Minisat22
    except ImportError:
        return dpll(cnf.num_vars, cnf.clauses) is not None
    with Minisat22(bootstrap_with=cnf.clauses) as solver:
        return solver.solve()


def external_solver() -> str:
    try:
        import pysat  # noqa: F401
    except ImportError:
        return "internal dpll on re-parsed DIMACS"
    return "minisat22 via python-sat"


def verify_engines(spec: CorpusSpec = CorpusSpec(n=200), max_atoms: int = 16) -> Report:
    """Truth table, DPLL and an external solver on exported DIMACS agree."""
    report = Report("engines", seed=spec.seed)
    rng = spec.rng("engines")
    for k in range(spec.n):
        atoms = rng.randint(1, max_atoms)
        p = random_prop(rng, atoms, rng.randint(2, 7))
        if k % 3 == 1:
            p = POr(p, PNot(p))
        elif k % 3 == 2:
            q = random_prop(rng, atoms, 3)
            p = PImp(PAnd(p, q), p)
        table = truth_table_countermodel(p) is None
        by_dpll = countermodel(p, "dpll") is None
        ext = not _solve_dimacs(export_dimacs(to_cnf_tseitin(PNot(p))))
        report.check(table == by_dpll == ext, {"formula": repr(p), "atoms": len(atoms_of(p))},
                     [table, table, table], [table, by_dpll, ext])
    report.note(f"external route: {external_solver()}")
    return report


# ---------------------------------------------------------------- registry

SUITES: Dict[str, Callable[..., Report]] = {
    "prop33": verify_prop33,
    "cor34": verify_cor34,
    "obligations": verify_obligations,
    "thm32": verify_thm32,
    "acdc": verify_acdc,
    "tr0": verify_tr0,
    "theta": verify_theta,
    "saturation": verify_saturation,
    "trivialise": verify_trivialise,
    "iota": verify_iota,
    "engines": verify_engines,
}

#: suites run by "all", in report order
ALL = ["prop33", "cor34", "thm32", "acdc", "tr0", "theta", "saturation", "trivialise", "iota",
       "engines"]

_DEFAULT_SPECS = {
    "prop33": CorpusSpec(c_max=5),
    "cor34": CorpusSpec(c_max=64, n=20),
    "obligations": CorpusSpec(c_max=5),
    "thm32": CorpusSpec(c_max=50, n=500),
    "acdc": CorpusSpec(c_max=10, n=200),
    "tr0": CorpusSpec(n=1000, formula_depth=4, term_depth=2),
    "trivialise": CorpusSpec(n=10_000, formula_depth=4, term_depth=2),
    "engines": CorpusSpec(n=200),
}


def run_suite(name: str, seed: int = 0, c: Optional[int] = None, n: Optional[int] = None,
              bound: Optional[int] = None, domain: Optional[Domain] = None,
              family: Optional[str] = None) -> Report:
    """Run one suite with the default sizes, overridden by any given flag.

    ``c`` is the largest size parameter of the suite (c for the sequence
    suites, the last code for theta, a for iota) and ``n`` the instance
    count (gamma length for iota).
    """
    if name not in SUITES:
        raise KeyError(name)
    if name == "theta":
        report = verify_theta(5000 if c is None else c, seed=seed)
    elif name == "saturation":
        fam = load_family(family) if family else None
        report = verify_saturation(fam, domain or Domain(tuple(range(8))), seed=seed)
    elif name == "iota":
        report = verify_iota(3 if c is None else c, 3 if n is None else n)
        report.seed = seed
    else:
        spec = replace(_DEFAULT_SPECS[name], seed=seed)
        if c is not None:
            spec = replace(spec, c_max=c)
        if n is not None:
            spec = replace(spec, n=n)
        report = SUITES[name](spec)
    return report


def _timed_run(args):
    name, kwargs = args
    report = Report(name)
    with report.timed():
        inner = run_suite(name, **kwargs)
    inner.ms = report.ms
    return inner


def run_all(seed: int = 0, jobs: int = 1, names: Sequence[str] = ALL, **kwargs) -> List[Report]:
    """Run several suites; results come back in ``names`` order whatever ``jobs`` is."""
    work = [(name, dict(kwargs, seed=seed)) for name in names]
    if jobs <= 1:
        return [_timed_run(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_timed_run, work))
