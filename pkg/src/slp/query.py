"""Query evaluation through the reserved ``$answer`` predicate, and the shared pipeline."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import ANSWER, Atom, ConditionalFact, DefaultAtom, Program, SuperClause
from .frontend.clausal import (
    Query,
    check_range_restriction,
    expand_strong_negation,
    parse_query,
    split_default,
    to_clausal,
)
from .frontend.parser import AtomF, If, Not, occurrences
from .grounder import DEFAULT_MAX_FACTS, ground_fixpoint
from .reducer import ResidualProgram, residual
from .solver import DefFixResult, compute_defix


@dataclass
class PipelineResult:
    ground: list[ConditionalFact]
    residual: ResidualProgram
    defix: DefFixResult
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def inconsistent(self) -> bool:
        return self.defix.inconsistent


def run_pipeline(
    clauses: Sequence[SuperClause],
    monitored: Iterable[DefaultAtom] = (),
    max_facts: int = DEFAULT_MAX_FACTS,
    max_critneg: int | None = None,
) -> PipelineResult:
    """Ground, reduce and solve.  Raises InconsistentProgram / GuardExceeded."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    store = ground_fixpoint(clauses, max_facts=max_facts)
    ground = store.sorted()
    t1 = time.perf_counter()
    timings["ground"] = t1 - t0
    res = residual(store, monitored)
    t2 = time.perf_counter()
    timings["reduce"] = t2 - t1
    defix = compute_defix(res, max_critneg=max_critneg)
    timings["solve"] = time.perf_counter() - t2
    return PipelineResult(ground, res, defix, timings)


def rewrite(query: Query | str) -> SuperClause:
    """``$answer(X1,..,Xn) <- body`` with the query variables in first-occurrence order."""
    if isinstance(query, str):
        query = parse_query(query)
    head = Atom(ANSWER, query.variables)
    clauses = [c for c in to_clausal(If(AtomF(head), query.body)) if c.head]
    # a body containing not(true) can never hold; keep a rule that never fires
    clause = clauses[0] if clauses else SuperClause([head], (), [DefaultAtom()])
    check_range_restriction(clause)
    return clause


def query_default_atoms(query: Query) -> list[DefaultAtom]:
    """The ground default atoms written in the query (monitored so they show in DefFix)."""
    out: list[DefaultAtom] = []
    for node, _, _ in occurrences(query.body):
        if isinstance(node, Not):
            out.extend(d for d in split_default(node) if d.is_ground and not d.is_false and d not in out)
    return out


@dataclass
class AnswerSet:
    query: Query
    definite: list[tuple]  # answer tuples; [()] is "yes" for a ground query
    possible: list[tuple[tuple, ...]]  # disjunctions of answer tuples
    pipeline: PipelineResult

    @property
    def inconsistent(self) -> bool:
        return self.pipeline.inconsistent

    @property
    def is_ground(self) -> bool:
        return not self.query.variables

    @property
    def yes(self) -> bool:
        return bool(self.definite)


def _holds_everywhere(conds: list[int], defix: frozenset[int]) -> bool:
    """In every DefFix member some condition is true."""
    return bool(defix) and all(any(c & d == c for c in conds) for d in defix)


def answer(
    program: Program,
    query: Query | str,
    monitored: Iterable[DefaultAtom] = (),
    max_facts: int = DEFAULT_MAX_FACTS,
    max_critneg: int | None = None,
) -> AnswerSet:
    """Cautious answers: tuples whose ``$answer`` condition holds in every member of DefFix.

    An answer may be witnessed by different conditional facts in different
    DefFix members.  Under an inconsistent completion no answers are reported
    (the caller distinguishes that status).
    """
    if isinstance(query, str):
        query = parse_query(query)
    clause = rewrite(query)
    clauses = expand_strong_negation(list(program.clauses) + [clause])
    watch = list(dict.fromkeys([*program.monitored, *monitored, *query_default_atoms(query)]))
    result = run_pipeline(clauses, watch, max_facts=max_facts, max_critneg=max_critneg)
    comp = result.defix.compiled
    defix = result.defix.defix

    singles: dict[tuple, list[int]] = {}
    multis: dict[frozenset, list[int]] = {}
    for fact, cond in comp.answer_facts:
        if any(a.pred != ANSWER for a in fact.head):
            continue
        if len(fact.head) == 1:
            (a,) = fact.head
            singles.setdefault(a.args, []).append(cond)
        else:
            multis.setdefault(fact.head, []).append(cond)
    definite = sorted((t for t, cs in singles.items() if _holds_everywhere(cs, defix)), key=_tuple_key)
    possible = sorted(
        (tuple(sorted((a.args for a in h), key=_tuple_key)) for h, cs in multis.items() if _holds_everywhere(cs, defix)),
        key=lambda ts: [_tuple_key(t) for t in ts],
    )
    return AnswerSet(query, definite, possible, result)


def _tuple_key(t: tuple):
    return Atom(ANSWER, t).key
