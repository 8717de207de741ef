"""Positive and negative reduction of the hyperresolution fixpoint.

Only singleton default atoms ``not p`` are evaluated; default atoms over
conjunctions are left for the solver.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .core import ANSWER, Atom, ConditionalFact, DefaultAtom
from .store import FactStore, InsertResult


def is_answer_fact(fact: ConditionalFact) -> bool:
    return any(a.pred == ANSWER for a in fact.head)


@dataclass
class ResidualProgram:
    facts: FactStore
    crit_neg: list[DefaultAtom]
    crit_obj: list[Atom]
    monitored: list[DefaultAtom] = field(default_factory=list)
    inconsistent: bool = False  # the empty fact arose during reduction

    @property
    def program_facts(self) -> list[ConditionalFact]:
        """Facts that carry the program's semantics (``$answer`` facts excluded)."""
        return [f for f in self.facts.sorted() if not is_answer_fact(f)]

    @property
    def answer_facts(self) -> list[ConditionalFact]:
        return [f for f in self.facts.sorted() if is_answer_fact(f)]

    def __str__(self):
        return "\n".join(str(f) for f in self.facts.sorted())


class _Reducer:
    def __init__(self, store: FactStore, rng: random.Random | None = None):
        self.store = store
        self.rng = rng
        self.inconsistent = False
        self.heads: Counter[Atom] = Counter()
        for f in store:
            self._count(f, +1)

    def _count(self, fact: ConditionalFact, delta: int) -> None:
        if is_answer_fact(fact):
            return
        for a in fact.head:
            self.heads[a] += delta
            if not self.heads[a]:
                del self.heads[a]

    def _order(self, items: Iterable) -> list:
        items = list(items)
        if self.rng is not None:
            self.rng.shuffle(items)
        else:
            items.sort(key=lambda x: x.sort_key)
        return items

    def delete(self, fact: ConditionalFact) -> None:
        if fact in self.store:
            self.store.delete(fact)
            self._count(fact, -1)

    def insert(self, fact: ConditionalFact) -> None:
        result = self.store.insert(fact)
        if result is InsertResult.INCONSISTENT:
            self.inconsistent = True
            return
        for gone in self.store.last_deleted:
            self._count(gone, -1)
        if result is InsertResult.INSERTED:
            self._count(fact, +1)

    def positive_step(self) -> bool:
        """Drop ``not p`` from conditions whenever ``p`` heads no (non-answer) fact."""
        changed = False
        while not self.inconsistent:
            zero = [d for d in self.store.cond_keys() if len(d.atoms) == 1 and d.atoms[0] not in self.heads]
            targets: dict[ConditionalFact, set[DefaultAtom]] = {}
            for d in zero:
                for f in self.store.with_cond(d):
                    targets.setdefault(f, set()).add(d)
            if not targets:
                break
            for f in self._order(targets):
                if f not in self.store:
                    continue
                self.delete(f)
                self.insert(ConditionalFact(f.head, f.cond - targets[f]))
                changed = True
                if self.inconsistent:
                    break
        return changed

    def negative_step(self) -> bool:
        """Delete facts whose condition contains ``not p1 .. not pk`` for an unconditional ``p1 | .. | pk``."""
        changed = False
        units = [f for f in self.store if not f.cond and f.head and not is_answer_fact(f)]
        for u in self._order(units):
            if u not in self.store:
                continue
            needed = [DefaultAtom([a]) for a in u.head]
            buckets = sorted((self.store.with_cond(d) for d in needed), key=len)
            victims = set(buckets[0]).intersection(*buckets[1:]) if buckets else set()
            for v in self._order(victims):
                self.delete(v)
                changed = True
        return changed


def positive_reduction(store: FactStore) -> FactStore:
    r = _Reducer(store)
    r.positive_step()
    return store


def negative_reduction(store: FactStore) -> FactStore:
    r = _Reducer(store)
    while r.negative_step():
        pass
    return store


def reduce_store(store: FactStore, rng: random.Random | None = None) -> bool:
    """Apply both reductions in place until neither applies; returns False if the empty fact arose."""
    r = _Reducer(store, rng)
    while True:
        steps = [r.positive_step, r.negative_step]
        if rng is not None:
            rng.shuffle(steps)
        changed = False
        for step in steps:
            changed |= step()
            if r.inconsistent:
                return False
        if not changed:
            return True


def critical_atoms(facts: Iterable[ConditionalFact], monitored: Iterable[DefaultAtom] = ()):
    crit = {d for f in facts for d in f.cond}
    crit.update(monitored)
    crit_neg = sorted(crit, key=lambda d: d.sort_key)
    crit_obj = sorted({a for d in crit_neg for a in d.atoms})
    return crit_neg, crit_obj


def residual(
    store: FactStore,
    monitored: Iterable[DefaultAtom] = (),
    reduce: bool = True,
    rng: random.Random | None = None,
) -> ResidualProgram:
    """Close ``store`` under both reductions (in place) and compute the critical atoms."""
    monitored = list(dict.fromkeys(monitored))
    ok = reduce_store(store, rng) if reduce else True
    crit_neg, crit_obj = critical_atoms(store, monitored)
    return ResidualProgram(store, crit_neg, crit_obj, monitored, inconsistent=not ok)
