"""Command-line interface.

Exit codes: 0 pass or true, 1 fail or false, 2 usage or parse error,
3 a semantic precondition failed (open term, quantifiers where none are
allowed, oversized Gödel code, and the like).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import __version__
from .cnf import export_dimacs, to_cnf_tseitin
from .constructions import (OpenTermError, SequenceError, acdc_lhs, atom_sentences, big_and_left, big_or_left,
                            corollary_formula, le_formula, stopping_disjunction, theta_c, unique)
from .godel import CodeTooLarge, godel_encode
from .itb import ItbError, IotaTranslator, demo_gamma, demo_phi
from .parsing import ParseError, parse, parse_formula, parse_lines, parse_term
from .prop import AtomTable, PAnd, PImp, PNot, countermodel, skeleton
from .report import Report
from .saturation import Domain
from .semantics import SemanticError, std_truth, tr0, val
from .syntax import AssignmentError, Formula, Term, numeral, to_text
from .verifier import ALL, SUITES, run_all

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

CONSTRUCTS = ["bigor", "bigand", "stopping", "unique", "acdc", "corollary", "theta", "le", "iota"]


class UsageError(Exception):
    pass


def _read_source(arg: str) -> str:
    """``-`` reads stdin, an existing path reads the file, anything else is inline text."""
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _formulas(arg: str) -> List[Formula]:
    text = _read_source(arg)
    out = parse_lines(text)
    if not out:
        raise UsageError("no formula given")
    return out


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------- parse / eval

def cmd_parse(args) -> int:
    node = parse(_read_source(args.input).strip())
    kind = "term" if isinstance(node, Term) else "formula"
    if args.format == "json":
        out = {"kind": kind, "text": to_text(node), "size": node.size,
               "free_vars": [f"v{v}" for v in sorted(node.free_vars)]}
        if args.godel:
            out["godel"] = str(godel_encode(node))
        _emit(args, _json(out))
    else:
        lines = [to_text(node)]
        if args.godel:
            lines.append(str(godel_encode(node)))
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    node = parse(_read_source(args.input).strip())
    if isinstance(node, Term):
        value = val(node)
        result = {"kind": "val", "value": str(value)}
        line, code = f"val: {value}", EXIT_OK
    elif node.free_vars:
        raise SemanticError(f"eval needs a sentence: {to_text(node)} has free variables")
    elif node.is_quantifier_free:
        verdict = tr0(node)
        result = {"kind": "tr0", "value": verdict}
        line = f"tr0: {str(verdict).lower()}"
        code = EXIT_OK if verdict else EXIT_FALSE
    else:
        verdict = std_truth(node, args.bound)
        result = {"kind": "std_truth", "value": str(verdict), "bound": args.bound}
        line = f"std_truth: {verdict}"
        code = EXIT_OK if verdict.value == "true" else EXIT_FALSE
    _emit(args, _json(result) if args.format == "json" else line + "\n")
    return code


# ---------------------------------------------------------------- construct

def _sequences(args, count: int, halves: int = 1):
    """Sentences from --from, or ``count * halves`` placeholder atoms."""
    if args.source:
        fs = _formulas(args.source)
        if len(fs) % halves:
            raise UsageError(f"--from needs a multiple of {halves} sentences")
        size = len(fs) // halves
    else:
        fs = atom_sentences(count * halves)
        size = count
    return [fs[i * size:(i + 1) * size] for i in range(halves)]


def cmd_construct(args) -> int:
    c = args.c if args.c is not None else 1
    kind = args.kind
    outputs = []
    if kind in ("bigor", "bigand", "unique"):
        (fs,) = _sequences(args, c + 1)
        build = {"bigor": big_or_left, "bigand": big_and_left, "unique": unique}[kind]
        outputs.append(build(fs))
    elif kind in ("stopping", "corollary"):
        alphas, betas = _sequences(args, c + 1, halves=2)
        if kind == "stopping":
            outputs.append(stopping_disjunction(alphas, betas, args.j))
        else:
            outputs.append(corollary_formula(alphas, betas))
    elif kind == "acdc":
        (phis,) = _sequences(args, c + 1)
        t = parse_term(args.term) if args.term else numeral(0)
        outputs.append(acdc_lhs(t, phis))
    elif kind == "theta":
        outputs.append(theta_c(c))
    elif kind == "le":
        x = parse_term(args.term) if args.term else numeral(0)
        outputs.append(le_formula(x, c))
    elif kind == "iota":
        n = args.n if args.n is not None else 1
        gamma = demo_gamma()
        if not 1 <= n <= len(gamma):
            raise UsageError(f"--n must be between 1 and {len(gamma)} for the demo sentences")
        tr = IotaTranslator(demo_phi(), gamma[:n])
        outputs.extend(tr.translate(g, c) for g in gamma[:n])
    if args.format == "json":
        items = [{"text": to_text(f)} for f in outputs]
        if args.godel:
            for item, f in zip(items, outputs):
                item["godel"] = str(godel_encode(f))
        _emit(args, _json({"kind": kind, "c": c, "formulas": items}))
    else:
        lines = []
        for f in outputs:
            lines.append(to_text(f))
            if args.godel:
                lines.append(str(godel_encode(f)))
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- check

def _countermodel_lines(cm, table) -> List[str]:
    return [f"  {to_text(table.sentence(i))} = {str(b).lower()}" for i, b in sorted(cm.items())]


def cmd_check(args) -> int:
    fs = _formulas(args.input)
    premises = [parse_formula(p) for p in args.premise or []]
    if args.mode == "entails":
        premises += fs[:-1]
        fs = fs[-1:]
    elif len(fs) != 1:
        raise UsageError(f"{args.mode} takes one formula, got {len(fs)}")
    target = fs[0]
    for f in premises + [target]:
        if f.free_vars:
            raise SemanticError(f"{args.mode} needs sentences: {to_text(f)} has free variables")
    table = AtomTable()
    hyps = [skeleton(p, table)[0] for p in premises]
    goal = skeleton(target, table)[0]
    p = goal
    if hyps:
        conj = hyps[0]
        for h in hyps[1:]:
            conj = PAnd(conj, h)
        p = PImp(conj, goal)

    if args.mode == "export-dimacs" or args.format == "dimacs":
        cnf = to_cnf_tseitin(PNot(p))
        comments = ["negation of the input; unsatisfiable iff the input is a tautology"]
        comments += [f"atom {cnf.atom_vars[i]} = {to_text(s)}" for i, s in table.items()
                     if i in cnf.atom_vars]
        _emit(args, export_dimacs(cnf, comments))
        return EXIT_OK

    cm = countermodel(p, args.engine)
    label = "tautology" if args.mode == "tautology" else "entails"
    if args.format == "json":
        out = {"mode": args.mode, "result": cm is None, "atoms": len(table),
               "countermodel": None if cm is None else
               {to_text(table.sentence(i)): b for i, b in sorted(cm.items())}}
        _emit(args, _json(out))
    else:
        lines = [f"{label}: {'true' if cm is None else 'false'}"]
        if cm is not None:
            lines.append("countermodel:")
            lines += _countermodel_lines(cm, table)
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if cm is None else EXIT_FALSE


# ---------------------------------------------------------------- verify

def aggregate(reports: List[Report], seed: Optional[int], timing: bool = False) -> dict:
    total = Report("all", seed=seed)
    for r in reports:
        total.merge(r)
    out = total.to_dict(timing)
    if timing:
        out["ms"] = round(sum(r.ms or 0 for r in reports), 3)
    out["reports"] = [r.to_dict(timing) for r in reports]
    return out


def cmd_verify(args) -> int:
    kwargs = {"c": args.c, "n": args.n, "domain": args.domain, "family": args.family}
    names = ALL if args.suite == "all" else [args.suite]
    reports = run_all(seed=args.seed, jobs=args.jobs, names=names, **kwargs)
    passed = all(r.passed for r in reports)
    if args.format == "json":
        if args.suite == "all":
            doc = aggregate(reports, args.seed, args.timing)
        else:
            doc = reports[0].to_dict(args.timing)
        _emit(args, _json(doc))
    else:
        lines = []
        for r in reports:
            lines.append(r.summary(args.timing))
            lines += [f"  note: {n}" for n in r.notes]
            lines += [f"  failure: {json.dumps(f)}" for f in r.failures[:5]]
        if len(reports) > 1:
            lines.append(f"{'PASS' if passed else 'FAIL'} all: "
                         f"{sum(r.passes for r in reports)}/{sum(r.instances for r in reports)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_FALSE


# ---------------------------------------------------------------- parser

def _seed_default() -> int:
    raw = os.environ.get("PTK_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PTK_SEED must be an integer, got {raw!r}") from None


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return n


def _domain(text: str) -> Domain:
    try:
        return Domain.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "dimacs"], default="text")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ptk", description="Arithmetical syntax, truth predicates and their verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and print a term or formula")
    p.add_argument("input", help="inline text, a file path, or - for stdin")
    p.add_argument("--godel", action="store_true", help="also print the Gödel code")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", parents=[common], help="value of a closed term or truth of a sentence")
    p.add_argument("input")
    p.add_argument("--bound", type=_natural, default=10,
                   help="largest witness tried for quantifiers (default 10)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("construct", parents=[common], help="print a formula scheme instance")
    p.add_argument("kind", choices=CONSTRUCTS)
    p.add_argument("--c", type=_natural, help="largest sequence index (default 1)")
    p.add_argument("--n", type=_natural, help="number of gamma sentences for iota")
    p.add_argument("--j", type=_natural, default=0, help="start index for stopping")
    p.add_argument("--term", help="the closed term for acdc, or x for le")
    p.add_argument("--from", dest="source",
                   help="sentences, one per line, instead of placeholder atoms")
    p.add_argument("--godel", action="store_true", help="also print the Gödel code")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", parents=[common], help="propositional tautology checks")
    p.add_argument("mode", choices=["tautology", "entails", "export-dimacs"])
    p.add_argument("input", help="inline formula, a file path, or - for stdin; for entails "
                                 "the last line is the conclusion")
    p.add_argument("--premise", action="append", help="premise sentence (repeatable)")
    p.add_argument("--engine", choices=["auto", "table", "dpll"], default="auto")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--seed", type=int, help="corpus seed (default: $PTK_SEED or 0)")
    p.add_argument("--c", type=_natural, help="largest size parameter of the suite")
    p.add_argument("--n", type=_natural, help="number of instances")
    p.add_argument("--bound", type=_natural, help="accepted for symmetry; suites fix their bounds")
    p.add_argument("--domain", type=_domain, help='assignment values for saturation, e.g. "0..7"')
    p.add_argument("--family", help="formula family file for saturation")
    p.add_argument("--jobs", type=_natural, default=1, help="worker processes for 'all'")
    p.add_argument("--timing", action="store_true", help="include wall times in the output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "verify" and args.seed is None:
            args.seed = _seed_default()
        if args.format == "dimacs" and args.command != "check":
            raise UsageError("--format dimacs only applies to check")
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SemanticError, AssignmentError, SequenceError, OpenTermError, ItbError,
            CodeTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
