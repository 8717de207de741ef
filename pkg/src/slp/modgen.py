"""Minimal model generation for sets of positive disjunctions.

Disjunctions and interpretations are integer bit masks over objective atom
ids.  Only the *critical* atoms (bits ``0 .. n_crit-1``) are decided; the
generator branches on them in increasing bit order and emits each partial
assignment once all of them are decided.  Every emitted assignment extends
to a minimal model of the input and every minimal model's restriction is
emitted (possibly several times; callers collect into a set).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


def minimize(disjunctions: Iterable[int]) -> frozenset[int]:
    """Drop every disjunction that is a proper superset of another one."""
    ds = sorted(set(disjunctions), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for d in ds:
        if not any(k & d == k for k in kept):
            kept.append(d)
    return frozenset(kept)


@dataclass
class ModgenStats:
    calls: int = 0
    emitted: int = 0
    dead_ends: int = 0  # must stay 0: every branch reaches an emit


def modgen(
    disjunctions: Iterable[int],
    n_crit: int,
    stats: ModgenStats | None = None,
) -> set[tuple[int, int]]:
    """Restrictions of the minimal models of ``disjunctions`` to the first ``n_crit`` atoms.

    Returns pairs ``(true_mask, false_mask)`` partitioning the critical bits;
    with all critical bits decided, ``true_mask`` alone identifies the pair,
    see :func:`modgen_true_sets`.
    """
    d0 = minimize(disjunctions)
    if 0 in d0:
        raise ValueError("the empty disjunction has no models")
    out: set[tuple[int, int]] = set()
    crit_all = (1 << n_crit) - 1
    st = stats if stats is not None else ModgenStats()

    def rec(d: frozenset[int], true: int, false: int, nxt: int) -> int:
        st.calls += 1
        if (true | false) & crit_all == crit_all:
            out.add((true & crit_all, false & crit_all))
            st.emitted += 1
            return 1
        # select the smallest undecided critical atom
        while (true | false) >> nxt & 1:
            nxt += 1
        bit = 1 << nxt
        containing = [a for a in d if a & bit]
        if not containing:
            return rec(d, true, false | bit, nxt + 1)
        if bit in d:
            return rec(d, true | bit, false, nxt + 1)
        found = rec(minimize(a & ~bit for a in d), true, false | bit, nxt + 1)
        for a in sorted(containing):
            others = a & ~bit
            nd = minimize([x & ~others for x in d] + [bit])
            if 0 in nd:
                st.dead_ends += 1
                continue
            found += rec(nd, true | bit, false | others, nxt + 1)
        if not found:
            st.dead_ends += 1
        return found

    rec(d0, 0, 0, 0)
    return out


def modgen_true_sets(disjunctions: Iterable[int], n_crit: int, stats: ModgenStats | None = None) -> frozenset[int]:
    """As :func:`modgen`, reporting each critical restriction by its set of true atoms."""
    return frozenset(t for t, _ in modgen(disjunctions, n_crit, stats))


def brute_minimal_models(disjunctions: Iterable[int], n_atoms: int) -> set[int]:
    """All ⊆-minimal models over ``n_atoms`` atoms, by exhaustive enumeration (reference only)."""
    ds = list(disjunctions)
    models = [m for m in range(1 << n_atoms) if all(m & d for d in ds)]
    return {m for m in models if not any(o != m and o & m == o for o in models)}
