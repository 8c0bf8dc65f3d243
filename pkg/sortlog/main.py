# main.py
"""
sortlog command line.

    sortlog parse -f phi.slf [--free-sorts]
    sortlog check [-f phi.slf] [-s m.sls] [-H h.slh] [-p proof.slp]
    sortlog eval -s m.sls -f phi.slf [--bound N] [--rel-cap N] [--step-cap N]
    sortlog heval -H h.slh -f phi.slf
    sortlog henkin-check -H h.slh [--depth D] [--size S] [--arity K]
    sortlog prove proof.slp [--atom-cap N]
    sortlog search -f phi.slf [-t theory.slf ...] [--bound N] [--u-bound N] [--g-bound N]
    sortlog history [--command NAME] [--limit N] [--summary] [--show ID]

Reports go to standard output as text, JSON (`--format json`) or a table
(`--format table`); diagnostics go to standard error.

Exit status: 0 when a result was produced (including the verdict Unknown),
1 on usage errors, 2 on parse or validation failures and on rejected proof
lines, 3 when proof checking ran out of budget.
"""
import argparse
import dataclasses
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .config import Config
from .core.errors import NotFound, ParseError, PreconditionViolation, ValidationError
from .core.model import Budget
from .core.parser import (henkin_to_dict, parse_formula_file, parse_henkin, parse_proof, parse_structure,
                          parse_vocabulary, render_formula, render_henkin)
from .core.proof import check_proof, proof_ok
from .core.sem_full import Evaluator
from .core.sem_henkin import check_comprehension, countermodel_search, eval_henkin_sentence
from .core.syntax import (Vocabulary, free_individual_vars, free_relation_vars, free_sorts, is_sentence,
                          quantifier_rank)
from .database import RunStore
from .utils import ReportExporter, format_set, report_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

FORMATS = ("text", "json", "table")


class UsageError(Exception):
    pass


class InputError(Exception):
    """A parse, validation or precondition failure tied to one input file."""

    def __init__(self, path: str, error: Exception):
        self.path = path
        self.error = error
        super().__init__(f"{path}: {error}")


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    result: Dict[str, Any]
    budget: Dict[str, Any] = field(default_factory=dict)
    stats: Dict[str, Any] = field(default_factory=dict)
    elapsed_ms: Optional[float] = None
    text: List[str] = field(default_factory=list, repr=False)
    table: Optional[pd.DataFrame] = field(default=None, repr=False)

    def as_dict(self, timing: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {"command": self.command, "inputs": self.inputs}
        data.update(self.result)
        if self.budget:
            data["budget"] = self.budget
        if self.stats:
            data["stats"] = self.stats
        if timing and self.elapsed_ms is not None:
            data["elapsed_ms"] = round(self.elapsed_ms, 3)
        return data


Outcome = Tuple[RunReport, int]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _parsed(path: str, parse: Callable, *args):
    try:
        return parse(_read(path), *args)
    except (ParseError, ValidationError) as exc:
        raise InputError(path, exc) from exc


def _vocabulary(args) -> Optional[Vocabulary]:
    if not getattr(args, "vocabulary", None):
        return None
    return _parsed(args.vocabulary, parse_vocabulary)


def _budget(args) -> Budget:
    budget = Config.default_budget()
    overrides = {name: getattr(args, name) for name in ("domain_bound", "relation_cap", "step_cap")
                 if getattr(args, name, None) is not None}
    try:
        return dataclasses.replace(budget, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _vars(variables) -> List[str]:
    return [str(v) for v in sorted(variables)]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_parse(args) -> Outcome:
    voc, phi = _parsed(args.formula, parse_formula_file, _vocabulary(args))
    sorts = free_sorts(phi)
    result = {
        "formula": render_formula(phi),
        "free_individual_vars": _vars(free_individual_vars(phi)),
        "free_relation_vars": _vars(free_relation_vars(phi)),
        "free_sorts": sorted(sorts),
        "quantifier_rank": quantifier_rank(phi),
        "sentence": is_sentence(phi),
        "vocabulary": voc.as_mapping(),
    }
    if args.free_sorts:
        text = [format_set(sorts)]
    else:
        text = [
            result["formula"],
            f"free individual variables: {format_set(result['free_individual_vars'])}",
            f"free relation variables: {format_set(result['free_relation_vars'])}",
            f"free sorts: {format_set(sorts)}",
            f"quantifier rank: {result['quantifier_rank']}",
        ]
    return RunReport("parse", {"formula": args.formula}, result, text=text), EXIT_OK


def cmd_check(args) -> Outcome:
    if not any((args.formula, args.structure, args.henkin, args.proof)):
        raise UsageError("check needs at least one of -f, -s, -H, -p")
    voc = _vocabulary(args)
    checked, inputs = [], {}
    if args.formula:
        _, phi = _parsed(args.formula, parse_formula_file, voc)
        checked.append({"kind": "formula", "path": args.formula, "free_sorts": sorted(free_sorts(phi)),
                        "sentence": is_sentence(phi)})
        inputs["formula"] = args.formula
    if args.structure:
        structure = _parsed(args.structure, parse_structure, voc)
        checked.append({"kind": "structure", "path": args.structure, "size": structure.size(),
                        "sorts": structure.sorts()})
        inputs["structure"] = args.structure
    if args.henkin:
        henkin = _parsed(args.henkin, parse_henkin, voc)
        checked.append({"kind": "henkin", "path": args.henkin, "size": henkin.size(),
                        "U": len(henkin.U), "G": len(henkin.G)})
        inputs["henkin"] = args.henkin
    if args.proof:
        proof = _parsed(args.proof, parse_proof, voc)
        checked.append({"kind": "proof", "path": args.proof, "lines": len(proof), "theory": len(proof.theory)})
        inputs["proof"] = args.proof
    text = [f"{item['path']}: well-formed {item['kind']}" for item in checked]
    table = pd.DataFrame([{"kind": item["kind"], "path": item["path"]} for item in checked])
    report = RunReport("check", inputs, {"well_formed": True, "checked": checked}, text=text, table=table)
    return report, EXIT_OK


def cmd_eval(args) -> Outcome:
    structure = _parsed(args.structure, parse_structure, _vocabulary(args))
    _, phi = _parsed(args.formula, parse_formula_file, structure.vocabulary)
    budget = _budget(args)
    evaluator = Evaluator(budget)
    try:
        verdict = evaluator.evaluate_sentence(structure, phi)
    except PreconditionViolation as exc:
        raise InputError(args.formula, exc) from exc
    stats = evaluator.stats.as_dict()
    logger.info("eval: %s after %d steps", verdict, stats["steps"])
    report = RunReport("eval", {"structure": args.structure, "formula": args.formula}, {"verdict": str(verdict)},
                       budget=budget.as_dict(), stats=stats, text=[str(verdict)],
                       table=ReportExporter.export_stats(dict(stats, verdict=str(verdict))))
    return report, EXIT_OK


def cmd_heval(args) -> Outcome:
    henkin = _parsed(args.henkin, parse_henkin, _vocabulary(args))
    _, phi = _parsed(args.formula, parse_formula_file, henkin.base.vocabulary)
    try:
        value = eval_henkin_sentence(henkin, phi)
    except PreconditionViolation as exc:
        raise InputError(args.formula, exc) from exc
    report = RunReport("heval", {"henkin": args.henkin, "formula": args.formula}, {"verdict": str(value)},
                       text=[str(value)])
    return report, EXIT_OK


def cmd_henkin_check(args) -> Outcome:
    henkin = _parsed(args.henkin, parse_henkin, _vocabulary(args))
    depth = Config.COMPREHENSION_DEPTH if args.depth is None else args.depth
    size = Config.COMPREHENSION_SIZE if args.size is None else args.size
    arity = Config.COMPREHENSION_ARITY if args.arity is None else args.arity
    if depth < 0 or size < 1 or arity < 1:
        raise UsageError("comprehension bounds need depth >= 0, size >= 1 and arity >= 1")
    report = check_comprehension(henkin, depth, size, arity)
    failures = [{"schema": f.schema, "status": f.status, "instance": render_formula(f.instance)}
                for f in report.failures]
    result = {"passed": report.passed, "checked_instances": report.checked_instances, "failures": failures}
    if report.passed:
        text = [f"passed: {report.checked_instances} instances checked"]
    else:
        text = [f"failed: {len(failures)} of {report.checked_instances} instances"]
        text.extend(f"  {f['schema']}: {f['instance']}  ({f['status']})" for f in failures)
    run = RunReport("henkin-check", {"henkin": args.henkin}, result, budget=report.bounds(), text=text,
                    table=ReportExporter.export_comprehension_failures(report))
    return run, EXIT_OK


def cmd_prove(args) -> Outcome:
    proof = _parsed(args.proof, parse_proof, _vocabulary(args))
    atom_cap = Config.TAUTOLOGY_ATOM_CAP if args.atom_cap is None else args.atom_cap
    verdicts = check_proof(proof, atom_cap)
    ok = proof_ok(verdicts)
    lines = [dict(v.as_dict(), rule=str(proof.lines[v.index - 1].just)) for v in verdicts]
    text = []
    for line in lines:
        status = "ok" if line["ok"] else f"rejected: {line['diagnostic']}"
        text.append(f"{line['line']:>3}  {line['rule']:<18} {status}")
    rejected = [str(v.index) for v in verdicts if not v.ok]
    text.append("proof ok" if ok else f"proof rejected at line(s) {', '.join(rejected)}")
    if any(v.budget_exceeded for v in verdicts):
        status = EXIT_BUDGET
    else:
        status = EXIT_OK if ok else EXIT_INVALID
    report = RunReport("prove", {"proof": args.proof}, {"ok": ok, "lines": lines},
                       budget={"atom_cap": atom_cap}, text=text,
                       table=ReportExporter.export_proof_verdicts(verdicts, proof))
    return report, status


def cmd_search(args) -> Outcome:
    voc = _vocabulary(args) or Vocabulary()
    theory = []
    for path in args.theory:
        voc, sentence = _parsed(path, parse_formula_file, voc)
        theory.append(sentence)
    voc, phi = _parsed(args.formula, parse_formula_file, voc)
    bounds = Config.default_search_bounds(args.domain_bound)
    overrides = {name: getattr(args, name) for name in ("u_bound", "g_bound", "step_cap")
                 if getattr(args, name) is not None}
    bounds = dataclasses.replace(bounds, **overrides)
    inputs = {"formula": args.formula, "theory": list(args.theory)}
    try:
        henkin = countermodel_search(theory, phi, bounds, voc)
    except PreconditionViolation as exc:
        raise InputError(args.formula, exc) from exc
    except NotFound as exc:
        result = {"found": False, "searched": exc.searched, "complete": exc.complete}
        text = [f"NotFound: {exc}"]
        return RunReport("search", inputs, result, budget=bounds.as_dict(), text=text), EXIT_OK
    result = {"found": True, "countermodel": henkin_to_dict(henkin)}
    text = [f"countermodel of size {henkin.size()} found", render_henkin(henkin)]
    return RunReport("search", inputs, result, budget=bounds.as_dict(), text=text), EXIT_OK


def cmd_history(args) -> Outcome:
    path = args.history or Config.HISTORY_DB
    if not path:
        raise UsageError("no history database: pass --history PATH or set SORTLOG_HISTORY_DB")
    store = RunStore(path)
    if args.show is not None:
        run = store.get_run(args.show)
        if run is None:
            raise UsageError(f"no stored run {args.show}")
        lines = store.get_proof_lines(args.show)
        text = [report_json(run["report"])]
        text.extend(f"{line['line']:>3}  {'ok' if line['ok'] else line['diagnostic']}" for line in lines)
        table = pd.DataFrame(lines) if lines else None
        return RunReport("history", {"db": path}, {"run": run}, text=text, table=table), EXIT_OK
    if args.summary:
        summary = store.command_summary()
        text = [f"{row['command']:<14} runs={row['runs']} failures={row['failures']}" for row in summary]
        return RunReport("history", {"db": path}, {"summary": summary}, text=text,
                         table=pd.DataFrame(summary)), EXIT_OK
    runs = store.list_runs(args.command_name, args.limit)
    text = [f"#{run['id']} {run['created_at']} {run['command']} {run['outcome']} exit={run['exit_status']}"
            for run in runs] or ["no runs recorded"]
    return RunReport("history", {"db": path}, {"runs": runs}, text=text,
                     table=ReportExporter.export_runs(runs)), EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "parse": cmd_parse,
    "check": cmd_check,
    "eval": cmd_eval,
    "heval": cmd_heval,
    "henkin-check": cmd_henkin_check,
    "prove": cmd_prove,
    "search": cmd_search,
    "history": cmd_history,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="report format")
    common.add_argument("--timing", action="store_true", help="add elapsed milliseconds to JSON reports")
    common.add_argument("--history", metavar="PATH", help="SQLite file that records this run")
    common.add_argument("-V", "--vocabulary", metavar="FILE", help="vocabulary file (JSON)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--bound", dest="domain_bound", type=int, help="largest new domain to try")
    budget.add_argument("--step-cap", dest="step_cap", type=int, help="evaluation or search step cap")

    parser = _Parser(prog="sortlog", description="Sort logic workbench: parse, evaluate and prove.")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    sub = commands.add_parser("parse", parents=[common], help="echo a formula with its free variables and sorts")
    sub.add_argument("-f", "--formula", required=True)
    sub.add_argument("--free-sorts", action="store_true", help="print only the free sorts")

    sub = commands.add_parser("check", parents=[common], help="check input files for well-formedness")
    sub.add_argument("-f", "--formula")
    sub.add_argument("-s", "--structure")
    sub.add_argument("-H", "--henkin")
    sub.add_argument("-p", "--proof")

    sub = commands.add_parser("eval", parents=[common, budget], help="evaluate a sentence in full semantics")
    sub.add_argument("-s", "--structure", required=True)
    sub.add_argument("-f", "--formula", required=True)
    sub.add_argument("--rel-cap", dest="relation_cap", type=int, help="largest relation set to enumerate")

    sub = commands.add_parser("heval", parents=[common], help="evaluate a sentence in a Henkin structure")
    sub.add_argument("-H", "--henkin", required=True)
    sub.add_argument("-f", "--formula", required=True)

    sub = commands.add_parser("henkin-check", parents=[common], help="check comprehension in a Henkin structure")
    sub.add_argument("-H", "--henkin", required=True)
    sub.add_argument("--depth", type=int, help="quantifier depth of comprehension formulas")
    sub.add_argument("--size", type=int, help="node count of comprehension formulas")
    sub.add_argument("--arity", type=int, help="largest arity of comprehension relations")

    sub = commands.add_parser("prove", parents=[common], help="verify a proof")
    sub.add_argument("proof")
    sub.add_argument("--atom-cap", type=int, help="largest tautology atom count")

    sub = commands.add_parser("search", parents=[common, budget], help="search a Henkin countermodel")
    sub.add_argument("-f", "--formula", required=True)
    sub.add_argument("-t", "--theory", action="append", default=[], help="theory sentence file (repeatable)")
    sub.add_argument("--u-bound", type=int, help="largest number of candidate domains")
    sub.add_argument("--g-bound", type=int, help="largest number of G relations")

    sub = commands.add_parser("history", parents=[common], help="list recorded runs")
    sub.add_argument("--command", dest="command_name", help="only runs of this subcommand")
    sub.add_argument("--limit", type=int, default=20)
    sub.add_argument("--summary", action="store_true", help="run and failure counts per subcommand")
    sub.add_argument("--show", type=int, metavar="ID", help="print one stored report")
    return parser


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _emit(report: RunReport, args) -> None:
    if args.format == "json":
        print(report_json(report.as_dict(timing=args.timing)))
    elif args.format == "table" and report.table is not None:
        print(ReportExporter.to_text(report.table))
    else:
        print("\n".join(report.text))


def _record(report: RunReport, status: int, args) -> None:
    path = args.history or Config.HISTORY_DB
    if not path or report.command == "history":
        return
    run_id = RunStore(path).save_run(report.as_dict(), status, report.elapsed_ms)
    logger.debug("recorded run %d in %s", run_id, path)


def _print_input_error(exc: InputError) -> None:
    error = exc.error
    if isinstance(error, ValidationError):
        print(f"{exc.path}: {error}", file=sys.stderr)
    elif isinstance(error, ParseError):
        print(f"{exc.path}:{error.span.line}:{error.span.column}: {error}", file=sys.stderr)
    else:
        print(f"{exc.path}: {type(error).__name__}: {error}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    level = logging.DEBUG if args.verbose else getattr(logging, Config.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    started = time.perf_counter()
    try:
        report, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sortlog: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        _print_input_error(exc)
        return EXIT_INVALID
    report.elapsed_ms = (time.perf_counter() - started) * 1000.0

    _emit(report, args)
    _record(report, status, args)
    return status


if __name__ == "__main__":
    sys.exit(main())
