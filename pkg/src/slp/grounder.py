"""Bottom-up hyperresolution over conditional facts (seminaive)."""

from __future__ import annotations

import logging
from typing import Iterable, Iterator, Sequence

from .core import Atom, ConditionalFact, SuperClause, Var
from .errors import GuardExceeded, InconsistentProgram
from .store import FactStore, InsertResult

log = logging.getLogger(__name__)

DEFAULT_MAX_FACTS = 1_000_000


def match(pattern: Atom, ground: Atom, binding: dict) -> dict | None:
    """Extend ``binding`` so that ``pattern`` instantiates to ``ground``; None if impossible."""
    if pattern.pred != ground.pred or len(pattern.args) != len(ground.args):
        return None
    out = binding
    for p, g in zip(pattern.args, ground.args):
        if isinstance(p, Var):
            bound = out.get(p)
            if bound is None:
                if out is binding:
                    out = dict(binding)
                out[p] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return out


def _body(clause: SuperClause) -> list[Atom]:
    return sorted(clause.pos)


def _resolvent(clause: SuperClause, binding: dict, chosen: Sequence[tuple[ConditionalFact, Atom]]) -> ConditionalFact:
    head = {a.substitute(binding) for a in clause.head}
    cond = {d.substitute(binding) for d in clause.neg}
    for fact, lit in chosen:
        head.update(a for a in fact.head if a != lit)
        cond.update(fact.cond)
    return ConditionalFact(head, cond)


def _join(
    body: list[Atom],
    k: int,
    pools: list,
    store: FactStore,
    binding: dict,
    chosen: list,
) -> Iterator[tuple[dict, list]]:
    if k == len(body):
        yield binding, chosen
        return
    pattern = body[k]
    pool = pools[k]
    for fact in list(store.with_head_signature(pattern.signature)):
        if pool is not None and not pool(fact):
            continue
        for lit in fact.head:
            b = match(pattern, lit, binding)
            if b is None:
                continue
            chosen.append((fact, lit))
            yield from _join(body, k + 1, pools, store, b, chosen)
            chosen.pop()


def hyperresolve_round(
    clauses: Iterable[SuperClause],
    store: FactStore,
    delta: set[ConditionalFact],
    first_round: bool = False,
    origins: dict | None = None,
) -> set[ConditionalFact]:
    """Facts derivable in one step where at least one body atom is resolved against ``delta``.

    Bodiless clauses only fire when ``first_round`` is set.  Position ``i`` is
    drawn from ``delta``, earlier positions from the old facts only, later ones
    from everything, so each combination of premises is produced once.
    """
    out: set[ConditionalFact] = set()
    in_delta = delta.__contains__

    def old(f):
        return f not in delta

    for clause in clauses:
        body = _body(clause)
        if not body:
            if first_round:
                out.add(_resolvent(clause, {}, []))
                if origins is not None and not clause.head and not clause.neg:
                    origins.setdefault(ConditionalFact(), clause)
            continue
        if not delta:
            continue
        for i in range(len(body)):
            pools = [old] * i + [in_delta] + [None] * (len(body) - i - 1)
            for binding, chosen in _join(body, 0, pools, store, {}, []):
                fact = _resolvent(clause, binding, chosen)
                out.add(fact)
                if origins is not None and fact.is_empty:
                    origins.setdefault(fact, (clause, binding))
    return {f for f in out if not any(d.is_false for d in f.cond)}


def ground_fixpoint(
    clauses: Sequence[SuperClause],
    max_facts: int = DEFAULT_MAX_FACTS,
) -> FactStore:
    """Iterate hyperresolution with subsumption until no fact is inserted.

    Raises :class:`InconsistentProgram` when the empty fact is derived and
    :class:`GuardExceeded` when the store outgrows ``max_facts``.
    """
    store = FactStore()
    delta: set[ConditionalFact] = set()
    rounds = 0
    first = True
    while first or delta:
        origins: dict = {}
        candidates = hyperresolve_round(clauses, store, delta, first_round=first, origins=origins)
        first = False
        rounds += 1
        inserted = []
        for fact in sorted(candidates, key=lambda f: f.sort_key):
            result = store.insert(fact)
            if result is InsertResult.INCONSISTENT:
                raise InconsistentProgram(_explain(origins.get(fact)), origins.get(fact))
            if result is InsertResult.INSERTED:
                inserted.append(fact)
                if len(store) > max_facts:
                    raise GuardExceeded(f"more than {max_facts} conditional facts derived")
        delta = {f for f in inserted if f in store}
        log.debug("round %d: %d candidates, %d new, store %d", rounds, len(candidates), len(delta), len(store))
    return store


def _explain(origin) -> str:
    if origin is None:
        return "inconsistent program: derived the empty conditional fact"
    if isinstance(origin, SuperClause):
        return f"inconsistent program: {origin}"
    clause, binding = origin
    inst = SuperClause(
        (a.substitute(binding) for a in clause.head),
        (a.substitute(binding) for a in clause.pos),
        (d.substitute(binding) for d in clause.neg),
    )
    return f"inconsistent program: the body of {inst} is derivable unconditionally"
