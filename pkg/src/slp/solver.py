"""Fixed point of the default-interpretation operator over a residual program.

The residual's critical default atoms are interned to bit positions
``0 .. n-1`` (a default interpretation is an ``int`` whose bit ``i`` is the
truth value of ``crit_neg[i]``); critical objective atoms get the low bits
of the objective masks, the remaining head atoms the higher ones.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .core import Atom, ConditionalFact, DefaultAtom, DefInterp, ObjInterp, SuperClause
from .errors import ContractError, GuardExceeded
from .modgen import ModgenStats, minimize, modgen_true_sets
from .reducer import ResidualProgram, is_answer_fact

log = logging.getLogger(__name__)

DEFAULT_MAX_CRITNEG = 24


def default_max_critneg() -> int:
    value = os.environ.get("SLP_MAX_CRITNEG")
    return int(value) if value else DEFAULT_MAX_CRITNEG


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Compiled:
    """The residual program in bit-mask form, with a per-``D`` model cache."""

    def __init__(self, residual: ResidualProgram):
        self.residual = residual
        self.crit_neg: list[DefaultAtom] = list(residual.crit_neg)
        self.crit_obj: list[Atom] = list(residual.crit_obj)
        self.neg_index = {d: i for i, d in enumerate(self.crit_neg)}
        head_atoms = sorted({a for f in residual.program_facts for a in f.head} - set(self.crit_obj))
        self.atoms: list[Atom] = self.crit_obj + head_atoms
        self.atom_index = {a: i for i, a in enumerate(self.atoms)}
        self.n_neg = len(self.crit_neg)
        self.n_crit = len(self.crit_obj)
        # the objective conjunction under each critical default atom
        self.neg_masks = [self.obj_mask(d.atoms) for d in self.crit_neg]
        self.facts: list[tuple[int, int]] = [
            (self.cond_mask(f.cond), self.obj_mask(f.head)) for f in residual.program_facts
        ]
        self.answer_facts: list[tuple[ConditionalFact, int]] = [
            (f, self.cond_mask(f.cond)) for f in residual.answer_facts
        ]
        self.cond_bits = 0
        for c, _ in self.facts:
            self.cond_bits |= c
        self.constraints = [c for c, h in self.facts if h == 0]
        self._models: dict[frozenset[int], frozenset[int]] = {}
        self.stats = ModgenStats()

    def obj_mask(self, atoms: Iterable[Atom]) -> int:
        m = 0
        for a in atoms:
            m |= 1 << self.atom_index[a]
        return m

    def cond_mask(self, cond: Iterable[DefaultAtom]) -> int:
        m = 0
        for d in cond:
            try:
                m |= 1 << self.neg_index[d]
            except KeyError:
                raise ContractError(f"default atom {d} is not critical") from None
        return m

    # -- conversions ----------------------------------------------------------
    def def_interp(self, mask: int) -> DefInterp:
        return DefInterp({d: bool(mask >> i & 1) for i, d in enumerate(self.crit_neg)})

    def obj_interp(self, mask: int) -> ObjInterp:
        return ObjInterp({a: bool(mask >> i & 1) for i, a in enumerate(self.crit_obj)})

    def def_mask(self, def_i: DefInterp) -> int:
        return sum(1 << i for i, d in enumerate(self.crit_neg) if def_i[d])

    # -- operators ------------------------------------------------------------
    def blocked(self, def_i: int) -> bool:
        return any(c & def_i == c for c in self.constraints)

    def disjunctions(self, def_i: int) -> frozenset[int] | None:
        """Heads of the facts whose condition holds under ``def_i``; None when a constraint fires."""
        heads = []
        for c, h in self.facts:
            if c & def_i == c:
                if h == 0:
                    return None
                heads.append(h)
        return minimize(heads)

    def models(self, def_i: int) -> frozenset[int]:
        d = self.disjunctions(def_i)
        if d is None:
            return frozenset()
        cached = self._models.get(d)
        if cached is None:
            cached = modgen_true_sets(d, self.n_crit, self.stats)
            self._models[d] = cached
        return cached

    def view(self, obj: int) -> int:
        """The default atoms of ``crit_neg`` made true by the objective part ``obj``."""
        v = 0
        for i, e in enumerate(self.neg_masks):
            if e & obj != e:
                v |= 1 << i
        return v


# ---------------------------------------------------------------------------
# public operations


def evaluate_conditions(residual: ResidualProgram | Compiled, def_i: DefInterp) -> set[frozenset[Atom]] | None:
    """Head disjunctions of the (non-answer) facts whose conditions hold; None when blocked."""
    comp = residual if isinstance(residual, Compiled) else Compiled(residual)
    d = comp.disjunctions(comp.def_mask(def_i))
    if d is None:
        return None
    return {frozenset(comp.atoms[i] for i in _bits(m)) for m in d}


def modgen(disjunctions: Iterable[Iterable[Atom]], crit_obj: Iterable[Atom]) -> set[ObjInterp]:
    """Objective parts (over ``crit_obj``) of the minimal models of a set of positive disjunctions."""
    crit = list(crit_obj)
    ds = [frozenset(d) for d in disjunctions]
    others = sorted({a for d in ds for a in d} - set(crit))
    index = {a: i for i, a in enumerate(crit + others)}
    masks = [sum(1 << index[a] for a in d) for d in ds]
    out = set()
    for t in modgen_true_sets(masks, len(crit)):
        out.add(ObjInterp({a: bool(t >> i & 1) for i, a in enumerate(crit)}))
    return out


def omega(comp: Compiled, def_set: Iterable[int]) -> frozenset[int]:
    out: set[int] = set()
    for d in def_set:
        out |= comp.models(d)
    return frozenset(out)


def possible_views(def_i: int, views: Iterable[int], full: int) -> bool:
    """``def_i`` is the intersection of every view that contains it (and there is one)."""
    meet = full
    nonempty = False
    for v in views:
        if def_i & v == def_i:
            meet &= v
            nonempty = True
    return nonempty and meet == def_i


def possible(comp: Compiled, def_i: int, obj_set: Iterable[int]) -> bool:
    return possible_views(def_i, {comp.view(o) for o in obj_set}, (1 << comp.n_neg) - 1)


def intersection_closure(views: Iterable[int]) -> set[int]:
    """All intersections of nonempty subfamilies of ``views``."""
    closed: set[int] = set()
    for v in set(views):
        closed |= {c & v for c in closed}
        closed.add(v)
    return closed


@dataclass
class Iteration:
    obj_set: frozenset[int]
    def_set: frozenset[int]


@dataclass
class DefFixResult:
    compiled: Compiled
    defix: frozenset[int]
    objset_last: frozenset[int]
    history: list[Iteration] = field(default_factory=list)

    @property
    def crit_neg(self) -> list[DefaultAtom]:
        return self.compiled.crit_neg

    @property
    def crit_obj(self) -> list[Atom]:
        return self.compiled.crit_obj

    @property
    def inconsistent(self) -> bool:
        return not self.defix

    @property
    def iterations(self) -> int:
        return len(self.history)

    def rows(self, masks: Iterable[int], width: int) -> list[tuple[int, ...]]:
        return [tuple(m >> i & 1 for i in range(width)) for m in masks]

    @property
    def defix_rows(self) -> list[tuple[int, ...]]:
        """DefFix as 0/1 rows over ``crit_neg``, sorted in descending order."""
        return sorted(self.rows(self.defix, self.compiled.n_neg), reverse=True)

    @property
    def objective_rows(self) -> list[tuple[int, ...]]:
        """Final objective parts as 0/1 rows over ``crit_obj``, sorted ascending."""
        return sorted(self.rows(self.objset_last, self.compiled.n_crit))

    def interpretations(self) -> list[DefInterp]:
        return [self.compiled.def_interp(m) for m in sorted(self.defix, reverse=True)]


def compute_defix(
    residual: ResidualProgram,
    max_critneg: int | None = None,
    strategy: str = "closure",
) -> DefFixResult:
    """Iterate the default-interpretation operator from the set of all interpretations.

    Phase one evaluates the models for every interpretation of the
    condition atoms (monitored atoms not occurring in conditions cannot
    change them) and keeps the interpretations that are intersections of
    views of those models and violate no constraint.  ``strategy="closure"``
    builds that set as the intersection closure of the views;
    ``strategy="enumerate"`` tests each of the ``2^n`` interpretations.
    """
    comp = Compiled(residual)
    limit = default_max_critneg() if max_critneg is None else max_critneg
    if comp.n_neg > limit:
        raise GuardExceeded(f"{comp.n_neg} critical default atoms exceed the limit of {limit}")
    if residual.inconsistent:
        return DefFixResult(comp, frozenset(), frozenset(), [])
    full = (1 << comp.n_neg) - 1

    obj_set = omega(comp, _submasks(comp.cond_bits))
    views = {comp.view(o) for o in obj_set}
    if strategy == "closure":
        candidates: Iterable[int] = intersection_closure(views)
    elif strategy == "enumerate":
        candidates = (d for d in range(full + 1) if possible_views(d, views, full))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    def_set = frozenset(d for d in candidates if not comp.blocked(d))
    history = [Iteration(obj_set, def_set)]
    log.debug("phase 1: %d objective parts, %d default interpretations", len(obj_set), len(def_set))

    while True:
        obj_set = omega(comp, def_set)
        views = {comp.view(o) for o in obj_set}
        kept = frozenset(d for d in def_set if possible_views(d, views, full))
        assert kept <= def_set, "the iteration must be decreasing"
        history.append(Iteration(obj_set, kept))
        if kept == def_set:
            break
        def_set = kept
        assert len(history) <= (1 << comp.n_neg) + 2
    assert comp.stats.dead_ends == 0
    return DefFixResult(comp, def_set, obj_set, history)


def _positive_clause(query) -> frozenset[Atom]:
    if isinstance(query, Atom):
        return frozenset([query])
    if isinstance(query, ConditionalFact):
        if query.cond:
            raise ContractError(f"only positive clauses can be checked for entailment: {query}")
        return query.head
    if isinstance(query, SuperClause):
        if query.pos or query.neg:
            raise ContractError(f"only positive clauses can be checked for entailment: {query}")
        return query.head
    return frozenset(query)


def entails(result: DefFixResult, query) -> bool:
    """Truth in every reduced model of the completion.

    ``query`` is a critical :class:`DefaultAtom`, a ground atom, or a
    positive ground clause (a :class:`ConditionalFact`/:class:`SuperClause`
    without body, or an iterable of atoms read as a disjunction).  An empty
    DefFix (inconsistent completion) entails everything.
    """
    comp = result.compiled
    if isinstance(query, DefaultAtom):
        if query.is_false:
            return not result.defix
        if query not in comp.neg_index:
            raise ContractError(f"default atom {query} is not monitored")
        bit = 1 << comp.neg_index[query]
        return all(d & bit for d in result.defix)
    head = _positive_clause(query)
    mask = sum(1 << comp.atom_index[a] for a in head if a in comp.atom_index)
    for d in result.defix:
        ds = comp.disjunctions(d)
        if ds is None:
            continue
        if not any(x & mask == x for x in ds):
            return False
    return True
