"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are collected in ``RESULTS`` and printed by ``conftest.py`` in the
terminal summary under "acceptance criteria".
"""

import functools
import itertools
import random
import time

from generators import affirmative_program, mixed_program, normal_program, positive_disjunctive_program, random_program
from helpers import defix_dicts, na, remonitor, solve
from programs import BROKEN_FIXED, CAR, PQR, VISIT, WORK_SLEEP

from slp.core import Atom, ConditionalFact, DefaultAtom
from slp.errors import InconsistentProgram
from slp.frontend import parse_program
from slp.grounder import ground_fixpoint
from slp.oracle import all_conjunctions, brute_minimal_models, cross_check, wfs_reference
from slp.query import answer, run_pipeline
from slp.reducer import critical_atoms, residual
from slp.solver import compute_defix, entails
from slp.store import FactStore, naive_antichain

RESULTS: dict[int, str] = {}


def criterion(number: int, label: str):
    """Record a PASS/FAIL line for the decorated test; the test returns a detail string."""

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            try:
                detail = fn()
            except BaseException as exc:
                RESULTS[number] = f"FAIL {number:2d}. {label}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
                raise
            took = time.perf_counter() - start
            suffix = f" ({detail})" if detail else ""
            RESULTS[number] = f"PASS {number:2d}. {label}{suffix} [{took:.2f}s]"

        return run

    return wrap


def _pipeline(text, monitor=()):
    program = parse_program(text)
    return run_pipeline(program.clauses, [*program.monitored, *monitor])


# ---------------------------------------------------------------------------
# worked examples


@criterion(1, "car/broken: entails car, runs, not broken in under 0.1 s")
def test_car():
    start = time.perf_counter()
    result = _pipeline(CAR, [na("broken")]).defix
    ok = [entails(result, Atom("car")), entails(result, Atom("runs")), entails(result, na("broken"))]
    took = time.perf_counter() - start
    assert ok == [True, True, True]
    assert took < 0.1, f"took {took:.3f}s"
    return f"{took * 1000:.1f} ms"


@criterion(2, "broken/fixed/runs: entails broken, not fixed, not runs; residual has no default atoms")
def test_broken_fixed():
    base = _pipeline(BROKEN_FIXED)
    assert base.residual.crit_neg == []
    assert all(not f.cond for f in base.residual.facts)
    result = _pipeline(BROKEN_FIXED, [na("fixed"), na("runs")]).defix
    assert entails(result, Atom("broken"))
    assert entails(result, na("fixed"))
    assert entails(result, na("runs"))
    assert not entails(result, Atom("runs"))
    return "residual: " + " ".join(str(f) for f in base.residual.facts.sorted())


@criterion(3, "travel program: happy, prudent, not bankrupt, not disappointed, not(europe & australia); not 'not visit_europe'")
def test_visit():
    program = parse_program(VISIT)
    yes = ["happy", "prudent", "not bankrupt", "not disappointed", "not(visit_europe & visit_australia)"]
    for q in yes:
        assert answer(program, q).yes, q
    assert not answer(program, "not visit_europe").yes
    assert not answer(program, "bankrupt").yes
    return f"{len(yes)} entailed, 'not visit_europe' not entailed"


@criterion(4, "three-atom program with not p monitored: objective-part, intermediate and DefFix tables")
def test_small_program_tables():
    result = _pipeline(PQR, [na("p")]).defix
    comp = result.compiled
    assert [str(d) for d in result.crit_neg] == ["not p", "not q", "not r"]
    assert [str(a) for a in result.crit_obj] == ["p", "q", "r"]
    first = result.history[0]
    objective = {tuple(r) for r in result.rows(first.obj_set, comp.n_crit)}
    assert objective == {(0, 0, 0), (1, 0, 0), (0, 1, 1)}
    intermediate = {tuple(r) for r in result.rows(first.def_set, comp.n_neg)}
    assert intermediate == {(1, 1, 1), (1, 0, 0), (0, 1, 1), (0, 0, 0)}
    assert result.defix_rows == [(1, 1, 1), (1, 0, 0)]
    assert [entails(result, d) for d in result.crit_neg] == [True, False, False]
    return "DefFix {111, 100}; only not p entailed"


@criterion(5, "odd loop with paid/angry: entails paid and not angry, DefFix nonempty, no stable model")
def test_work_sleep():
    program = parse_program(WORK_SLEEP)
    assert answer(program, "paid").yes
    assert answer(program, "not angry").yes
    result = _pipeline(WORK_SLEEP).defix
    assert result.defix
    # the program has no stable model: check every candidate set against its reduct
    rules = [(next(iter(c.head)), c.pos, {d.atoms[0] for d in c.neg}) for c in program.clauses]
    atoms = sorted(program.atoms())
    stable = []
    for k in range(len(atoms) + 1):
        for cand in itertools.combinations(atoms, k):
            m = set(cand)
            least: set[Atom] = set()
            changed = True
            while changed:
                changed = False
                for h, pos, neg in rules:
                    if h not in least and pos <= least and not (neg & m):
                        least.add(h)
                        changed = True
            if least == m:
                stable.append(m)
    assert stable == []
    return f"|DefFix| = {len(result.defix)}, 0 stable models"


@criterion(6, "reductions: {p <- not q} becomes {p}; {p | q, s <- not p & not q & not r} becomes {p | q}")
def test_reductions():
    first = {str(f) for f in _pipeline("p <- not q.").residual.facts}
    second = {str(f) for f in _pipeline("p | q. s <- not p & not q & not r.").residual.facts}
    assert first == {"p."}
    assert second == {"p | q."}
    return None


# ---------------------------------------------------------------------------
# property suites


def _default_atoms(clauses):
    return sorted({d for c in clauses for d in c.neg}, key=lambda d: d.sort_key)


@criterion(7, "hyperresolution fixed point has the program's minimal models (300 ground programs, <= 5 atoms, <= 8 rules, < 60 s)")
def test_fixpoint_minimal_models():
    rng = random.Random(7001)
    start = time.perf_counter()
    inconsistent = 0
    for _ in range(300):
        text = random_program(rng, n_atoms=5, n_rules=8, max_head=3, min_head=0, max_pos=2, max_neg=2, max_conj=2)
        clauses = parse_program(text).clauses
        defaults = _default_atoms(clauses)
        atoms = sorted({a for c in clauses for a in c.head | c.pos} | {a for d in defaults for a in d.atoms})
        expected = brute_minimal_models(clauses, defaults=defaults, atoms=atoms).models
        try:
            facts = ground_fixpoint(clauses).facts
        except InconsistentProgram:
            inconsistent += 1
            assert expected == set(), text
            continue
        got = brute_minimal_models(list(facts), defaults=defaults, atoms=atoms).models
        assert got == expected, text
    took = time.perf_counter() - start
    assert took < 60, f"took {took:.1f}s"
    return f"300 programs, {inconsistent} inconsistent, 0 failures"


def _oracle_suite() -> list[str]:
    rng = random.Random(8001)
    return [mixed_program(rng, n_atoms=4, n_rules=6) for _ in range(200)]


@criterion(8, "implication fixed point vs DefFix (200 programs, <= 4 atoms, <= 6 rules, < 120 s)")
def test_oracle_equivalence():
    start = time.perf_counter()
    failures = []
    for text in _oracle_suite():
        report = cross_check(parse_program(text).clauses)
        if not report.passed:
            failures.append((text, report.first))
    took = time.perf_counter() - start
    assert not failures, failures[0]
    assert took < 120, f"took {took:.1f}s"
    return "200 programs, 0 failures"


@criterion(9, "normal programs agree with the well-founded model (300 programs, <= 6 atoms)")
def test_wfs_coincidence():
    rng = random.Random(9001)
    for _ in range(300):
        text = normal_program(rng, n_atoms=6, n_rules=8)
        program = parse_program(text)
        atoms = sorted(program.atoms())
        result = _pipeline(text, [na(a.pred) for a in atoms]).defix
        true = {a for a in atoms if entails(result, a)}
        false = {a for a in atoms if entails(result, na(a.pred))}
        wfs = wfs_reference(program.clauses, atoms)
        assert (true, false) == (set(wfs.true), set(wfs.false)), text
    return "300 programs, 0 failures"


@criterion(10, "positive disjunctive programs: not E entailed iff E false in all minimal models (200 programs, <= 5 atoms)")
def test_minimal_model_coincidence():
    rng = random.Random(10001)
    checked = 0
    for _ in range(200):
        text = positive_disjunctive_program(rng, n_atoms=5, n_rules=6)
        program = parse_program(text)
        atoms = sorted(program.atoms())
        minimal = brute_minimal_models(program.clauses, defaults=[], atoms=atoms).objective_parts()
        base = _pipeline(text).residual
        for e in all_conjunctions(atoms):
            result = compute_defix(remonitor(base, [e]))
            expected = all(not set(e.atoms) <= m for m in minimal)
            assert entails(result, e) == expected, (text, str(e))
            checked += 1
    return f"200 programs, {checked} conjunctions, 0 failures"


@criterion(11, "affirmative programs have a nonempty DefFix (200 programs)")
def test_affirmative_consistency():
    rng = random.Random(11001)
    for _ in range(200):
        text = affirmative_program(rng, n_atoms=5, n_rules=6)
        assert _pipeline(text).defix.defix, text
    return "200 programs, 0 failures"


@criterion(12, "subsumption index equals the naive filter on 10^4 insertions over 30 literals")
def test_subsumption_index():
    heads = [Atom(f"h{i}") for i in range(15)]
    conds = [DefaultAtom([Atom(f"c{i}")]) for i in range(15)]
    rng = random.Random(12001)
    seq = [
        ConditionalFact(rng.sample(heads, rng.randint(2, 4)), rng.sample(conds, rng.randint(1, 4)))
        for _ in range(10_000)
    ]
    t0 = time.perf_counter()
    naive = naive_antichain(seq)
    t1 = time.perf_counter()
    indexed = FactStore(seq).facts
    t2 = time.perf_counter()
    assert indexed == naive
    ratio = (t1 - t0) / max(t2 - t1, 1e-9)
    # the speed ratio is informational; correctness is the gate
    return f"antichain {len(naive)} facts; naive {t1 - t0:.2f}s, indexed {t2 - t1:.2f}s, speedup {ratio:.1f}x"


@criterion(13, "DefFix before and after reduction agrees on the shared default atoms (suite of criterion 8)")
def test_reduction_preserves_defix():
    compared = 0
    for text in _oracle_suite():
        clauses = parse_program(text).clauses
        try:
            reduced = residual(ground_fixpoint(clauses))
        except InconsistentProgram:
            continue
        raw = residual(ground_fixpoint(clauses), reduce=False)
        shared = sorted(set(reduced.crit_neg) | set(raw.crit_neg), key=lambda d: d.sort_key)
        a = compute_defix(remonitor(reduced, shared))
        b = compute_defix(remonitor(raw, shared))
        assert critical_atoms([], shared)[0] == a.crit_neg == b.crit_neg
        assert defix_dicts(a) == defix_dicts(b), text
        compared += 1
    return f"{compared} consistent programs compared, 0 failures"
