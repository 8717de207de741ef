"""Independent brute-force semantics for small ground programs.

Everything here works on the *input* clauses (not on conditional facts) and
enumerates interpretations exhaustively, so it shares no algorithmic code
with the grounder, reducer or solver.  Sizes are guarded: the full default
space over ``k`` atoms has ``2^k - 1`` conjunctions, and interpretations of
it are enumerated as bit masks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .core import Atom, ConditionalFact, DefaultAtom, SuperClause, Var
from .errors import GuardExceeded, InconsistentProgram

MAX_ORACLE_ATOMS = 4  # full default space enumerated valuation by valuation
MAX_FIXPOINT_ATOMS = 6  # the implication iteration only enumerates intersections of views
MAX_BRUTE_ATOMS = 8
MAX_BRUTE_DEFAULTS = 14
MAX_GROUND_INSTANCES = 100_000


def _as_clause(c) -> SuperClause:
    if isinstance(c, ConditionalFact):
        return SuperClause(c.head, (), c.cond)
    return c


def program_atoms(clauses: Iterable) -> list[Atom]:
    out: set[Atom] = set()
    for c in map(_as_clause, clauses):
        if not c.is_ground:
            raise ValueError(f"the oracle needs ground clauses, got: {c}")
        out |= c.head | c.pos
        for d in c.neg:
            out.update(d.atoms)
    return sorted(out)


def all_conjunctions(atoms: Sequence[Atom]) -> list[DefaultAtom]:
    """``not E`` for every nonempty ``E ⊆ atoms``, in canonical order."""
    out = [DefaultAtom(c) for r in range(1, len(atoms) + 1) for c in itertools.combinations(atoms, r)]
    return sorted(out, key=lambda d: d.sort_key)


class _Table:
    """Clause satisfaction over all objective interpretations, grouped by active-clause pattern."""

    def __init__(self, clauses: Sequence[SuperClause], atoms: Sequence[Atom], defaults: Sequence[DefaultAtom]):
        self.atoms = list(atoms)
        self.defaults = list(defaults)
        aix = {a: i for i, a in enumerate(self.atoms)}
        dix = {d: i for i, d in enumerate(self.defaults)}
        objs = np.arange(1 << len(self.atoms), dtype=np.int64)
        self.objs = objs
        self.rows: list[tuple[int, np.ndarray]] = []  # (required default bits, satisfied-by-obj vector)
        self.neg_bits = 0
        for c in clauses:
            if any(d.is_false for d in c.neg):
                continue  # body contains not(true): never applicable
            need = 0
            for d in c.neg:
                if d not in dix:
                    raise ValueError(f"default atom {d} is outside the enumerated default space")
                need |= 1 << dix[d]
            head = sum(1 << aix[a] for a in c.head)
            pos = sum(1 << aix[a] for a in c.pos)
            sat = ((objs & head) != 0) | ((objs & pos) != pos)
            self.rows.append((need, sat))
            self.neg_bits |= need
        self._cache: dict[int, tuple[np.ndarray, frozenset[int]]] = {}

    def pattern(self, delta: int) -> int:
        return delta & self.neg_bits

    def solve(self, delta: int) -> tuple[np.ndarray, frozenset[int]]:
        """(model indicator over objective interpretations, minimal models) for a default part."""
        key = self.pattern(delta)
        hit = self._cache.get(key)
        if hit is None:
            ok = np.ones(len(self.objs), dtype=bool)
            for need, sat in self.rows:
                if need & key == need:
                    ok &= sat
            models = self.objs[ok]
            if len(models):
                sub = (models[:, None] & models[None, :]) == models[:, None]
                np.fill_diagonal(sub, False)
                minimal = models[~sub.any(axis=0)]
            else:
                minimal = models
            hit = (ok, frozenset(int(m) for m in minimal))
            self._cache[key] = hit
        return hit

    def patterns(self) -> list[int]:
        """Every distinct active-clause pattern (submasks of the default bits used by clauses)."""
        out, sub = [], self.neg_bits
        while True:
            out.append(sub)
            if not sub:
                return out
            sub = (sub - 1) & self.neg_bits


# ---------------------------------------------------------------------------
# reduced minimal models


@dataclass
class ReducedModels:
    atoms: list[Atom]
    defaults: list[DefaultAtom]
    models: set[tuple[frozenset[DefaultAtom], frozenset[Atom]]]

    def objective_parts(self) -> set[frozenset[Atom]]:
        return {o for _, o in self.models}


def brute_minimal_models(
    clauses: Iterable,
    defaults: Sequence[DefaultAtom] | None = None,
    atoms: Sequence[Atom] | None = None,
) -> ReducedModels:
    """All minimal reduced models: every default valuation, objective part minimal for it.

    ``defaults`` defaults to the full space of conjunctions over the program
    atoms (``≤ 4`` atoms); an explicit list may be given instead, e.g. the
    default atoms occurring in the program.
    """
    clauses = [_as_clause(c) for c in clauses]
    atoms = sorted(set(atoms) | set(program_atoms(clauses))) if atoms is not None else program_atoms(clauses)
    if defaults is None:
        if len(atoms) > MAX_ORACLE_ATOMS:
            raise GuardExceeded(f"the full default space needs at most {MAX_ORACLE_ATOMS} atoms, got {len(atoms)}")
        defaults = all_conjunctions(atoms)
    defaults = list(defaults)
    if len(atoms) > MAX_BRUTE_ATOMS or len(defaults) > MAX_BRUTE_DEFAULTS:
        raise GuardExceeded(f"brute-force enumeration over {len(atoms)} atoms and {len(defaults)} default atoms is too large")
    table = _Table(clauses, atoms, defaults)
    out = set()
    for delta in range(1 << len(defaults)):
        _, minimal = table.solve(delta)
        if not minimal:
            continue
        dpart = frozenset(d for i, d in enumerate(defaults) if delta >> i & 1)
        for m in minimal:
            out.add((dpart, frozenset(a for i, a in enumerate(atoms) if m >> i & 1)))
    return ReducedModels(atoms, defaults, out)


# ---------------------------------------------------------------------------
# syntactic fixed point over implications between default atoms


@dataclass
class ImplicationSet:
    """The limit of the implication iteration, kept semantically.

    ``allowed`` is the set of default valuations (bit masks over
    ``defaults``) satisfying every implication of the limit; ``models`` those
    of them under which the program itself has a model.  An implication is a
    member iff it holds in all of ``models``.
    """

    atoms: list[Atom]
    defaults: list[DefaultAtom]
    allowed: frozenset[int]
    models: frozenset[int]
    iterations: int
    history: list[frozenset[int]] = field(default_factory=list)

    def bit(self, d: DefaultAtom) -> int:
        return 1 << self.defaults.index(d)

    def entails(self, antecedent: Iterable[DefaultAtom], consequent: DefaultAtom | None) -> bool:
        """``not E1 & .. & not Em -> not E0`` (``consequent`` None or not(true) means false)."""
        need = 0
        for d in antecedent:
            if d.is_false:
                return True
            need |= self.bit(d)
        if consequent is None or consequent.is_false:
            return not any(m & need == need for m in self.models)
        c = self.bit(consequent)
        return all(m & c for m in self.models if m & need == need)

    def entails_default(self, d: DefaultAtom) -> bool:
        return self.entails((), d)

    @property
    def inconsistent(self) -> bool:
        return not self.models

    def project(self, targets: Sequence[DefaultAtom]) -> set[tuple[bool, ...]]:
        """Default parts of the models, restricted to ``targets`` (not(true) reads as false)."""
        bits = [None if d.is_false else self.bit(d) for d in targets]
        return {tuple(bool(b is not None and m & b) for b in bits) for m in self.models}


def _views(objective_parts: Iterable[int], defaults_obj: Sequence[int]) -> set[int]:
    """For each objective part, the set (mask) of conjunctions it falsifies."""
    out = set()
    for o in objective_parts:
        v = 0
        for i, e in enumerate(defaults_obj):
            if e & o != e:
                v |= 1 << i
        out.add(v)
    return out


def _meet_closure(views: Iterable[int]) -> set[int]:
    closed: set[int] = set()
    for v in set(views):
        closed |= {c & v for c in closed}
        closed.add(v)
    return closed


def syntactic_fixpoint(clauses: Iterable) -> ImplicationSet:
    """Iterate: keep the implications between default atoms that hold in all minimal models.

    The implications valid in a family of objective parts ``S`` are exactly
    the Horn clauses true in every falsified-conjunction set of ``S``; their
    models are the nonempty intersections of those sets.  The next stage's
    minimal models are the minimal models of the program under default
    valuations satisfying the implications.
    """
    clauses = [_as_clause(c) for c in clauses]
    atoms = program_atoms(clauses)
    if len(atoms) > MAX_FIXPOINT_ATOMS:
        raise GuardExceeded(f"the oracle handles at most {MAX_FIXPOINT_ATOMS} atoms, got {len(atoms)}")
    defaults = all_conjunctions(atoms)
    aix = {a: i for i, a in enumerate(atoms)}
    dobj = [sum(1 << aix[a] for a in d.atoms) for d in defaults]
    table = _Table(clauses, atoms, defaults)
    full = (1 << len(defaults)) - 1

    # stage 0: no implications, every default valuation is allowed
    objective: set[int] = set()
    for pat in table.patterns():
        objective |= table.solve(pat)[1]
    allowed = frozenset(_meet_closure(_views(objective, dobj))) if objective else frozenset()
    history = [allowed]
    while True:
        objective = set()
        for delta in allowed:
            objective |= table.solve(delta)[1]
        nxt = frozenset(_meet_closure(_views(objective, dobj))) if objective else frozenset()
        assert nxt <= allowed, "the implication sets must grow"
        history.append(nxt)
        if nxt == allowed:
            break
        allowed = nxt
        assert len(history) <= full + 3
    for delta in allowed:  # regularity: not E implies not E' for every E' ⊇ E
        for i, e in enumerate(dobj):
            if delta >> i & 1:
                for j, e2 in enumerate(dobj):
                    assert not (e2 & e == e) or delta >> j & 1, "allowed valuation is not monotone"
    models = frozenset(d for d in allowed if table.solve(d)[0].any())
    return ImplicationSet(atoms, defaults, allowed, models, len(history), history)


# ---------------------------------------------------------------------------
# well-founded semantics


@dataclass
class ThreeValued:
    true: frozenset[Atom]
    false: frozenset[Atom]
    undefined: frozenset[Atom]


def wfs_reference(clauses: Iterable, atoms: Iterable[Atom] = ()) -> ThreeValued:
    """Well-founded model of a normal ground program via the alternating fixpoint."""
    clauses = [_as_clause(c) for c in clauses]
    rules = []
    for c in clauses:
        if len(c.head) != 1:
            raise ValueError(f"not a normal clause (exactly one head atom required): {c}")
        if any(len(d.atoms) != 1 for d in c.neg):
            raise ValueError(f"not a normal clause (default negation of single atoms only): {c}")
        (h,) = c.head
        rules.append((h, c.pos, frozenset(d.atoms[0] for d in c.neg)))
    base = set(program_atoms(clauses)) | set(atoms)

    def gamma(assumed_true: frozenset[Atom]) -> frozenset[Atom]:
        derived: set[Atom] = set()
        changed = True
        while changed:
            changed = False
            for h, pos, neg in rules:
                if h not in derived and pos <= derived and not (neg & assumed_true):
                    derived.add(h)
                    changed = True
        return frozenset(derived)

    true: frozenset[Atom] = frozenset()
    while True:
        nxt = gamma(gamma(true))
        if nxt == true:
            break
        true = nxt
    possibly = gamma(true)
    false = frozenset(base - possibly)
    return ThreeValued(true, false, frozenset(base - true - false))


# ---------------------------------------------------------------------------
# naive grounding


def ground_naive(clauses: Iterable[SuperClause], max_instances: int = MAX_GROUND_INSTANCES) -> list[SuperClause]:
    """Full instantiation over the program's constants (reference for the grounder)."""
    clauses = list(clauses)
    constants: set = set()
    for c in clauses:
        for a in list(c.head | c.pos) + [x for d in c.neg for x in d.atoms]:
            constants.update(t for t in a.args if not isinstance(t, Var))
    universe = sorted(constants, key=lambda t: (isinstance(t, str), t))
    out: dict[SuperClause, None] = {}
    count = 0
    for c in clauses:
        vs = sorted(c.variables, key=lambda v: v.name)
        for values in itertools.product(universe, repeat=len(vs)):
            count += 1
            if count > max_instances:
                raise GuardExceeded(f"more than {max_instances} ground instances")
            b = dict(zip(vs, values))
            out[
                SuperClause(
                    (a.substitute(b) for a in c.head),
                    (a.substitute(b) for a in c.pos),
                    (d.substitute(b) for d in c.neg),
                )
            ] = None
    return list(out)


# ---------------------------------------------------------------------------
# differential check against the solver


@dataclass
class CrossCheckReport:
    passed: bool
    failures: list[str]
    fixpoint: ImplicationSet | None = None

    @property
    def first(self) -> str | None:
        return self.failures[0] if self.failures else None

    def __str__(self):
        return "pass" if self.passed else f"FAIL: {self.first}"


def cross_check(clauses: Sequence[SuperClause], max_critneg: int = 24) -> CrossCheckReport:
    """Compare the implication fixed point with DefFix computed by the solver.

    (a) for every conjunction E: ``not E`` is entailed by the fixed point iff
    every DefFix member (E monitored) makes it true; (b) every pairwise
    implication of the fixed point holds in every DefFix member (all E
    and its consequents monitored); (c) DefFix equals the fixed point's default parts projected
    onto the solver's critical default atoms.
    """
    from .grounder import ground_fixpoint
    from .reducer import critical_atoms, residual
    from .solver import compute_defix

    clauses = list(clauses)
    if any(not c.is_ground for c in clauses):
        clauses = ground_naive(clauses)
    fix = syntactic_fixpoint(clauses)
    failures: list[str] = []
    try:
        store = ground_fixpoint(clauses)
    except InconsistentProgram:
        if not fix.inconsistent:
            failures.append("grounding derived the empty fact but the fixed point has models")
        return CrossCheckReport(not failures, failures, fix)
    base = residual(store)

    def solve(monitored: list[DefaultAtom]):
        crit_neg, crit_obj = critical_atoms(base.facts, monitored)
        return compute_defix(replace(base, crit_neg=crit_neg, crit_obj=crit_obj, monitored=monitored), max_critneg)

    for e in fix.defaults:
        res = solve([e])
        bit = 1 << res.compiled.neg_index[e]
        solver_says = all(d & bit for d in res.defix)
        if solver_says != fix.entails_default(e):
            failures.append(f"(a) {e}: fixed point {fix.entails_default(e)}, solver {solver_says}")
        got = {tuple(bool(d >> i & 1) for i in range(res.compiled.n_neg)) for d in res.defix}
        want = fix.project(res.crit_neg)
        if got != want:
            failures.append(f"(c) monitoring {e}: solver {sorted(got)} != fixed point {sorted(want)}")

    room = max(1, max_critneg - len(base.crit_neg) - 1)
    for e1 in fix.defaults:
        implied = [e2 for e2 in fix.defaults if e2 != e1 and fix.entails([e1], e2)]
        for start in range(0, len(implied), room):
            chunk = implied[start : start + room]
            res = solve([e1, *chunk])
            index = res.compiled.neg_index
            b1 = 1 << index[e1]
            for e2 in chunk:
                b2 = 1 << index[e2]
                bad = [d for d in res.defix if d & b1 and not d & b2]
                if bad:
                    failures.append(f"(b) {e1} -> {e2} fails in {res.compiled.def_interp(bad[0])}")
    if len(base.crit_neg) + len(fix.defaults) <= max_critneg:
        res = solve(list(fix.defaults))
        got = {tuple(bool(d >> i & 1) for i in range(res.compiled.n_neg)) for d in res.defix}
        if got != fix.project(res.crit_neg):
            failures.append("(c) DefFix over all conjunctions differs from the fixed point's default parts")
    return CrossCheckReport(not failures, failures, fix)
