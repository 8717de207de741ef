"""Shared pipeline shortcuts for the tests."""

from __future__ import annotations

from dataclasses import replace

from slp.core import Atom, DefaultAtom
from slp.frontend import parse_program
from slp.grounder import ground_fixpoint
from slp.reducer import critical_atoms, residual
from slp.solver import compute_defix


def na(*names: str) -> DefaultAtom:
    return DefaultAtom(Atom(n) for n in names)


def solve(text: str, monitor=(), reduce: bool = True, **kw):
    program = parse_program(text)
    store = ground_fixpoint(program.clauses)
    res = residual(store, [*program.monitored, *monitor], reduce=reduce)
    return compute_defix(res, **kw)


def remonitor(res, monitored):
    """The same residual with a different monitored set (reductions do not depend on it)."""
    crit_neg, crit_obj = critical_atoms(res.facts, monitored)
    return replace(res, crit_neg=crit_neg, crit_obj=crit_obj, monitored=list(monitored))


def defix_dicts(result) -> set[frozenset]:
    """DefFix as a set of frozensets of (default atom, value) pairs, independent of bit order."""
    return {frozenset(result.compiled.def_interp(m).items()) for m in result.defix}
