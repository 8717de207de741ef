"""Command-line interface: ``slp solve``, ``slp query`` and ``slp repl``.

Exit codes: 0 ok, 1 inconsistent program or inconsistent completion,
2 syntax error (including context and range-restriction errors),
3 resource guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence, TextIO

from . import __version__
from .core import DefaultAtom, Program, format_term
from .errors import GuardExceeded, InconsistentProgram, ParseError, RangeRestrictionError
from .frontend.clausal import monitored_atoms, parse_program, parse_query
from .frontend.parser import parse_statements
from .grounder import DEFAULT_MAX_FACTS
from .query import AnswerSet, PipelineResult, answer, run_pipeline
from .solver import DEFAULT_MAX_CRITNEG, DefFixResult

EXIT_CODES = {
    "ok": 0,
    "inconsistent-program": 1,
    "inconsistent-completion": 1,
    "syntax-error": 2,
    "guard-exceeded": 3,
}
# when several queries fail differently, report the most severe
_SEVERITY = ["ok", "inconsistent-completion", "inconsistent-program", "guard-exceeded", "syntax-error"]


@dataclass
class RunConfig:
    path: str = "-"
    queries: list[str] = field(default_factory=list)
    monitor: list[str] = field(default_factory=list)
    dump_ground: bool = False
    dump_residual: bool = False
    dump_defix: bool = False
    possible: bool = False
    oracle: bool = False
    format: str = "text"
    max_critneg: int = DEFAULT_MAX_CRITNEG
    max_facts: int = DEFAULT_MAX_FACTS

    def __post_init__(self):
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.max_critneg <= 0 or self.max_facts <= 0:
            raise ValueError("guards must be positive")


@dataclass
class RunReport:
    status: str = "ok"
    lines: list[str] = field(default_factory=list)  # text-mode stdout
    errors: list[str] = field(default_factory=list)  # stderr
    defix: dict | None = None
    residual: list[str] | None = None
    answers: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def escalate(self, status: str) -> None:
        if _SEVERITY.index(status) > _SEVERITY.index(self.status):
            self.status = status

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "defix": self.defix,
            "residual": self.residual,
            "answers": self.answers,
            "timings": self.timings,
        }


# ---------------------------------------------------------------------------
# rendering


def format_table(columns: Sequence[str], rows: Sequence[Sequence[int]]) -> list[str]:
    """A ``|``-bordered 0/1 table with one column per default or objective atom."""
    if not columns:
        return ["(no columns)"] + [f"({len(rows)} row{'s' if len(rows) != 1 else ''})"]
    widths = [max(len(c), 1) for c in columns]
    head = "| " + " | ".join(c.center(w) for c, w in zip(columns, widths)) + " |"
    rule = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    body = ["| " + " | ".join(str(v).center(w) for v, w in zip(r, widths)) + " |" for r in rows]
    return [head, rule, *body] if rows else [head, rule, "(empty)"]


def defix_tables(result: DefFixResult) -> list[str]:
    lines = ["% DefFix"]
    lines += format_table([str(d) for d in result.crit_neg], result.defix_rows)
    lines.append("% objective parts")
    lines += format_table([str(a) for a in result.crit_obj], result.objective_rows)
    return lines


def defix_json(result: DefFixResult) -> dict:
    return {
        "columns": [str(d) for d in result.crit_neg],
        "rows": [list(r) for r in result.defix_rows],
        "objective_columns": [str(a) for a in result.crit_obj],
        "objective_rows": [list(r) for r in result.objective_rows],
    }


def _binding(variables, values) -> str:
    return ", ".join(f"{v.name} = {format_term(t)}" for v, t in zip(variables, values))


def _json_term(t):
    return t if isinstance(t, int) else str(t)


def render_answers(ans: AnswerSet, show_possible: bool) -> list[str]:
    lines = [ans.query.text]
    if ans.inconsistent:
        return lines + ["inconsistent completion"]
    if ans.is_ground:
        lines.append("yes" if ans.yes else "no")
    elif not ans.definite:
        lines.append("no")
    else:
        lines += [_binding(ans.query.variables, t) for t in ans.definite]
    if show_possible:
        for disj in ans.possible:
            if ans.is_ground:
                continue
            lines.append("possible: " + " | ".join(_binding(ans.query.variables, t) for t in disj))
    return lines


def answers_json(ans: AnswerSet, show_possible: bool) -> dict:
    names = [v.name for v in ans.query.variables]
    return {
        "query": ans.query.text,
        "definite": [{n: _json_term(t) for n, t in zip(names, tup)} for tup in ans.definite],
        "possible": [[{n: _json_term(t) for n, t in zip(names, tup)} for tup in disj] for disj in ans.possible]
        if show_possible
        else [],
    }


# ---------------------------------------------------------------------------
# running


def parse_monitor(text: str) -> list[DefaultAtom]:
    """``--monitor "not(a & b)"`` → the default atoms it denotes."""
    text = text.strip().rstrip(".")
    (st,) = parse_statements(f"#monitor {text}.")
    return monitored_atoms(st.formula, st.line, st.column)


def read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load(config: RunConfig, text: str) -> Program:
    program = parse_program(text)
    for m in config.monitor:
        for d in parse_monitor(m):
            if d not in program.monitored:
                program.monitored.append(d)
    return program


def _where(config: RunConfig) -> str:
    return "<stdin>" if config.path == "-" else config.path


def run(config: RunConfig, text: str | None = None) -> RunReport:
    """Parse, ground, reduce, solve and answer; never raises for program-level problems."""
    report = RunReport()
    t0 = time.perf_counter()
    try:
        source = read_source(config.path) if text is None else text
        program = load(config, source)
        extra = [parse_query(q) for q in config.queries]
    except (ParseError, RangeRestrictionError) as exc:
        report.status = "syntax-error"
        report.errors.append(f"{_where(config)}:{exc}")
        return report
    except OSError as exc:
        report.status = "syntax-error"
        report.errors.append(f"cannot read {_where(config)}: {exc}")
        return report
    report.timings["parse"] = time.perf_counter() - t0

    try:
        base = run_pipeline(program.clauses, program.monitored, config.max_facts, config.max_critneg)
    except InconsistentProgram as exc:
        report.status = "inconsistent-program"
        report.errors.append(str(exc))
        return report
    except GuardExceeded as exc:
        report.status = "guard-exceeded"
        report.errors.append(f"resource limit: {exc}")
        return report
    report.timings.update(base.timings)
    report.defix = defix_json(base.defix)
    report.residual = [str(f) for f in base.residual.facts.sorted()]
    if base.inconsistent:
        report.escalate("inconsistent-completion")

    queries = [*program.queries, *extra]
    if config.dump_ground:
        report.lines += ["% ground"] + [str(f) for f in base.ground]
    if config.dump_residual:
        report.lines += ["% residual"] + report.residual
    if config.dump_defix or (not queries and not config.dump_ground and not config.dump_residual):
        report.lines += defix_tables(base.defix)

    t1 = time.perf_counter()
    for q in queries:
        try:
            ans = answer(program, q, max_facts=config.max_facts, max_critneg=config.max_critneg)
        except GuardExceeded as exc:
            report.escalate("guard-exceeded")
            report.errors.append(f"resource limit in {q.text}: {exc}")
            report.lines += [q.text, "guard exceeded"]
            continue
        except InconsistentProgram as exc:
            report.escalate("inconsistent-program")
            report.errors.append(str(exc))
            report.lines += [q.text, "inconsistent program"]
            continue
        if ans.inconsistent:
            report.escalate("inconsistent-completion")
        report.lines += render_answers(ans, config.possible)
        report.answers.append(answers_json(ans, config.possible))
    if queries:
        report.timings["queries"] = time.perf_counter() - t1

    if report.status == "inconsistent-completion":
        report.lines.append("% inconsistent completion: no static interpretation of the default atoms")
    if config.oracle:
        report.errors.extend(_oracle_lines(program, base))
    return report


def _oracle_lines(program: Program, base: PipelineResult) -> list[str]:
    from .oracle import cross_check

    try:
        result = cross_check(program.clauses, max_critneg=DEFAULT_MAX_CRITNEG)
    except GuardExceeded as exc:
        return [f"oracle: refused, program too large ({exc})"]
    return [f"oracle: {result}"]


def emit(report: RunReport, config: RunConfig, out: TextIO, err: TextIO) -> int:
    for line in report.errors:
        print(f"slp: {line}", file=err)
    if config.format == "json":
        json.dump(report.to_json(), out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for line in report.lines:
            print(line, file=out)
        if report.status not in ("ok", "inconsistent-completion"):
            print(f"status: {report.status}", file=out)
    return report.exit_code


# ---------------------------------------------------------------------------
# repl


def repl(config: RunConfig, stdin: TextIO, out: TextIO) -> int:
    """Answer one query per input line against the cached program.

    ``:defix`` prints the DefFix tables, ``:residual`` the residual program,
    ``:quit`` (or end of input) leaves.
    """
    try:
        program = load(config, read_source(config.path))
        base = run_pipeline(program.clauses, program.monitored, config.max_facts, config.max_critneg)
    except (ParseError, RangeRestrictionError) as exc:
        print(f"slp: {_where(config)}:{exc}", file=sys.stderr)
        return EXIT_CODES["syntax-error"]
    except InconsistentProgram as exc:
        print(f"slp: {exc}", file=sys.stderr)
        return EXIT_CODES["inconsistent-program"]
    except GuardExceeded as exc:
        print(f"slp: resource limit: {exc}", file=sys.stderr)
        return EXIT_CODES["guard-exceeded"]
    interactive = stdin.isatty()
    while True:
        if interactive:
            out.write("?- ")
            out.flush()
        line = stdin.readline()
        if not line:
            return 0
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        if line in (":quit", ":q"):
            return 0
        if line == ":defix":
            print("\n".join(defix_tables(base.defix)), file=out)
            continue
        if line == ":residual":
            print("\n".join(str(f) for f in base.residual.facts.sorted()), file=out)
            continue
        try:
            ans = answer(program, line, max_facts=config.max_facts, max_critneg=config.max_critneg)
        except (ParseError, RangeRestrictionError) as exc:
            print(f"error: {exc}", file=out)
            continue
        except (GuardExceeded, InconsistentProgram) as exc:
            print(f"error: {exc}", file=out)
            continue
        print("\n".join(render_answers(ans, config.possible)[1:]), file=out)


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    env = os.environ.get("SLP_MAX_CRITNEG")
    default_critneg = int(env) if env else DEFAULT_MAX_CRITNEG

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dump-ground", action="store_true", help="print the hyperresolution fixed point")
    common.add_argument("--dump-residual", action="store_true", help="print the residual program")
    common.add_argument("--dump-defix", action="store_true", help="print the DefFix and objective-part tables")
    common.add_argument("--possible", action="store_true", help="also report disjunctive answers")
    common.add_argument("--oracle", action="store_true", help="cross-check against the brute-force oracle (small programs)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-critneg", type=_positive_int, default=default_critneg,
                        help="limit on critical default atoms (default 24, env SLP_MAX_CRITNEG)")
    common.add_argument("--max-facts", type=_positive_int, default=DEFAULT_MAX_FACTS,
                        help="limit on derived conditional facts")
    common.add_argument("--monitor", action="append", default=[], metavar="NOT",
                        help="extra default atom to show, e.g. 'not(a & b)' (repeatable)")

    parser = argparse.ArgumentParser(prog="slp", description="Query answering for super logic programs under the static semantics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", parents=[common], help="compute DefFix and answer the program's queries")
    p.add_argument("file", help="program file ('-' for stdin)")
    p = sub.add_parser("query", parents=[common], help="answer one query against a program")
    p.add_argument("file")
    p.add_argument("query", help="query body, e.g. 'p(X), not q(X)'")
    p = sub.add_parser("repl", parents=[common], help="answer queries read line by line")
    p.add_argument("file")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        path=args.file,
        queries=[args.query] if getattr(args, "query", None) else [],
        monitor=args.monitor,
        dump_ground=args.dump_ground,
        dump_residual=args.dump_residual,
        dump_defix=args.dump_defix,
        possible=args.possible,
        oracle=args.oracle,
        format=args.format,
        max_critneg=args.max_critneg,
        max_facts=args.max_facts,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    if args.command == "repl":
        return repl(config, sys.stdin, sys.stdout)
    return emit(run(config), config, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
