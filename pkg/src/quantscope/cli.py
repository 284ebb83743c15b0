"""Command-line front end.

Exit codes: 0 Asserted, 1 Refuted, 2 Undetermined, 3 Degenerate;
64 usage, 65 bad input data (parse or validation errors), 66 missing file,
70 an incoherent square of opposition.  With several statements the
process exits with the largest code seen.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import arith
from .arith import ArithError
from .engine import EvalConfig, EvaluationError, MajoritySemantics, SemanticsUnavailable, evaluate
from .explain import density_lines, explain, judgment_tree, render_machine, to_tree
from .judgment import Judgment, Verdict
from .kb import InvalidKnowledgeBase, KnowledgeBase, validate
from .parser import KBParseError, ParseError, parse_arith_formula, parse_kb, parse_statement

EXIT_CODES = {
    Verdict.ASSERTED: 0,
    Verdict.REFUTED: 1,
    Verdict.UNDETERMINED: 2,
    Verdict.DEGENERATE: 3,
}
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_INCOHERENT = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _schedule(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v.replace("_", "")) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not values or any(b <= a for a, b in zip(values, values[1:])) or values[0] < 1:
        raise argparse.ArgumentTypeError("schedule must be positive and strictly increasing")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--schedule", type=_schedule, default=arith.DEFAULT_SCHEDULE,
                        help="density checkpoints, e.g. 1000,10000,100000")
    common.add_argument("--epsilon", type=float, default=arith.DEFAULT_EPSILON)
    common.add_argument("--margin", type=float, default=0.02)
    common.add_argument("--search-bound", type=int, default=10**6)
    common.add_argument("--semantics", choices=[m.value for m in MajoritySemantics],
                        help="majority semantics (default: density over Nat, cardinality over concepts)")

    parser = _Parser(prog="quantscope", description="Judge quantified statements against knowledge bases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="judge statements")
    p.add_argument("kb", help="knowledge base file, or - for none")
    p.add_argument("statement", help="a statement, or - to read one per line from stdin")

    p = sub.add_parser("density", parents=[common], help="natural density of a formula over Nat")
    p.add_argument("formula")
    p.add_argument("--exact", action="store_true", help="report only the exact density when available")

    p = sub.add_parser("square", parents=[common], help="judge all four corners of the square")
    p.add_argument("kb", help="knowledge base file, or - for none")
    p.add_argument("restriction")
    p.add_argument("predicate", help="predicate, optionally negated with !, or a formula over Nat")

    p = sub.add_parser("check", parents=[common], help="validate a knowledge base")
    p.add_argument("kb")
    return parser


def _config(args) -> EvalConfig:
    semantics = MajoritySemantics(args.semantics) if args.semantics else None
    return EvalConfig(semantics, args.search_bound, args.schedule, args.epsilon, args.margin)


class _Abort(Exception):
    def __init__(self, code: int):
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"quantscope: cannot read {path}: {exc.strerror}", file=sys.stderr)
        raise _Abort(EX_NOINPUT) from None


def _load_kb(path: str, require_valid: bool = True) -> KnowledgeBase:
    if path == "-":
        return KnowledgeBase()
    try:
        kb = parse_kb(_read(path))
    except KBParseError as exc:
        for err in exc.errors:
            print(f"{path}:{err}", file=sys.stderr)
        raise _Abort(EX_DATAERR) from None
    if require_valid and not kb.report.ok:
        for issue in kb.report.errors:
            print(f"{path}: {issue}", file=sys.stderr)
        raise _Abort(EX_DATAERR)
    return kb


def _render(tree: dict, text: str, fmt: str) -> str:
    if fmt == "machine":
        return render_machine({"format": "machine", **tree})
    return text


def _emit(tree: dict, text: str, fmt: str, out) -> None:
    out.write(_render(tree, text, fmt))


def _judge(text: str, line: int, kb: KnowledgeBase, cfg: EvalConfig, fmt: str) -> tuple[int, str]:
    """Exit code and rendered envelope (empty on error) for one statement."""
    try:
        statement = parse_statement(text, line)
        j = evaluate(statement, kb, cfg)
    except ParseError as exc:
        print(f"statement {exc}", file=sys.stderr)
        return EX_DATAERR, ""
    except (SemanticsUnavailable, arith.BoundTooLarge) as exc:
        print(f"quantscope: {exc}", file=sys.stderr)
        return EX_USAGE, ""
    except (EvaluationError, InvalidKnowledgeBase, ArithError) as exc:
        print(f"quantscope: {exc}", file=sys.stderr)
        return EX_DATAERR, ""
    return EXIT_CODES[j.verdict], _render(judgment_tree(j), explain(j), fmt)


def cmd_eval(args, out=None, stdin=None) -> int:
    out = out or sys.stdout
    stdin = stdin or sys.stdin
    kb = _load_kb(args.kb)
    cfg = _config(args)
    if args.statement == "-":
        lines = list(enumerate(stdin.read().splitlines(), start=1))
    else:
        lines = [(1, args.statement)]
    worst = 0
    envelopes = []
    for number, raw in lines:
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        code, rendered = _judge(content, number, kb, cfg, args.format)
        worst = max(worst, code)
        if rendered:
            envelopes.append(rendered)
    out.write("\n".join(envelopes))
    return worst


def cmd_density(args, out=None) -> int:
    out = out or sys.stdout
    try:
        formula = parse_arith_formula(args.formula)
    except ParseError as exc:
        print(f"formula {exc}", file=sys.stderr)
        return EX_DATAERR
    text = arith.render_formula(formula)
    notes = []
    results = []
    if not arith.mentions_prime(formula):
        results.append(arith.exact_density(formula))
    elif args.exact:
        notes.append("exact density rejected: the formula mentions prime, so it is not "
                      "eventually periodic; estimating instead")
    if not (args.exact and results):
        try:
            results.append(arith.estimate_density(formula, args.schedule, args.epsilon))
        except arith.BoundTooLarge as exc:
            print(f"quantscope: {exc}", file=sys.stderr)
            return EX_USAGE
    verdict = results[0].kind.value
    lines = [f"density of {text}: {verdict} [natural density]"]
    for result in results:
        lines += ["  " + line for line in density_lines(result)]
    lines += [f"  note: {note}" for note in notes]
    tree = {
        "formula": text,
        "verdict": verdict,
        "semantics": "natural density",
        "evidence": [to_tree(r) for r in results],
        "notes": notes,
    }
    _emit(tree, "\n".join(lines) + "\n", args.format, out)
    return 0


_CORNERS = (("A", "each"), ("E", "no"), ("I", "some"), ("O", "not_all"))


def square_violations(judgments: dict[str, Judgment]) -> list[str]:
    """Contradictory corners that received the same decisive verdict."""
    decisive = (Verdict.ASSERTED, Verdict.REFUTED)
    found = []
    for x, y in (("A", "O"), ("E", "I")):
        vx, vy = judgments[x].verdict, judgments[y].verdict
        if vx == vy and vx in decisive:
            found.append(f"{x} and {y} are contradictories but both {vx.value}")
    return found


def cmd_square(args, out=None) -> int:
    out = out or sys.stdout
    kb = _load_kb(args.kb)
    cfg = _config(args)
    judgments = {}
    for corner, keyword in _CORNERS:
        text = f"{keyword} {args.restriction} {args.predicate}"
        try:
            judgments[corner] = evaluate(parse_statement(text), kb, cfg)
        except ParseError as exc:
            print(f"statement {exc}", file=sys.stderr)
            return EX_DATAERR
        except (EvaluationError, ArithError) as exc:
            print(f"quantscope: {exc}", file=sys.stderr)
            return EX_DATAERR
    violations = square_violations(judgments)
    width = max(len(str(j.statement)) for j in judgments.values())

    def cell(corner: str) -> str:
        j = judgments[corner]
        return f"{corner}  {str(j.statement):<{width}}  {j.verdict.value:<12}"

    lines = [f"square of opposition for {args.restriction} {args.predicate}",
             f"  {cell('A')}  {cell('E')}".rstrip(),
             f"  {cell('I')}  {cell('O')}".rstrip()]
    if violations:
        lines += [f"  violation: {v}" for v in violations]
    else:
        lines.append("  coherent: no pair of contradictories shares a decisive verdict")
    tree = {
        "verdict": "incoherent" if violations else "coherent",
        "semantics": "square of opposition",
        "evidence": {corner: judgment_tree(j) for corner, j in judgments.items()},
        "notes": violations,
    }
    _emit(tree, "\n".join(lines) + "\n", args.format, out)
    return EX_INCOHERENT if violations else 0


def cmd_check(args, out=None) -> int:
    out = out or sys.stdout
    kb = _load_kb(args.kb, require_valid=False)
    report = validate(kb)
    status = "valid" if report.ok else "invalid"
    lines = [f"{args.kb}: {status} (concepts={len(kb.concepts)} individuals={len(kb.individuals)} "
             f"axioms={len(kb.axioms)} facts={len(kb.facts)})"]
    lines += [f"  error: {issue}" for issue in report.errors]
    lines += [f"  warning: {issue}" for issue in report.warnings]
    tree = {
        "verdict": status,
        "semantics": "validation",
        "evidence": {"errors": to_tree(list(report.errors)), "warnings": to_tree(list(report.warnings))},
        "notes": [],
    }
    _emit(tree, "\n".join(lines) + "\n", args.format, out)
    return 0 if report.ok else EX_DATAERR


_COMMANDS = {"eval": cmd_eval, "density": cmd_density, "square": cmd_square, "check": cmd_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _Abort as abort:
        return abort.code


if __name__ == "__main__":
    sys.exit(main())
