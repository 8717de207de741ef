"""Conditional-fact store with duplicate and non-minimality elimination.

Every stored fact occupies a slot; each literal (head atom or condition
default atom) keeps an integer bit mask of the slots containing it.  To
insert a fact, the masks of its literals are added into a bit-sliced
counter, giving for all slots at once the overlap with the new fact.  A
stored fact whose overlap equals its own length subsumes the new fact; a
stored fact whose overlap equals the new fact's length is subsumed by it.
The cost is a few big-integer operations per literal of the new fact.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from typing import Iterable, Iterator

from .core import Atom, ConditionalFact


class InsertResult(enum.Enum):
    INSERTED = "inserted"
    SUBSUMED = "subsumed"
    INCONSISTENT = "inconsistent"


def _literal_keys(fact: ConditionalFact) -> list[tuple]:
    return [("h", a) for a in fact.head] + [("c", c) for c in fact.cond]


def _count_equal(planes: list[int], support: int, k: int) -> int:
    """Slots (within ``support``) whose bit-sliced counter value is ``k``."""
    if k >> len(planes):
        return 0
    out = support
    for i, plane in enumerate(planes):
        out = out & plane if k >> i & 1 else out & ~plane
        if not out:
            break
    return out


class FactStore:
    """An antichain of conditional facts under componentwise set inclusion.

    Head atoms and condition default-atoms are indexed separately; a second
    index maps each predicate signature to the facts with such a head atom,
    which is what the grounder joins against.
    """

    def __init__(self, facts: Iterable[ConditionalFact] = ()):
        self._slot: dict[ConditionalFact, int] = {}
        self._at: list[ConditionalFact | None] = []
        self._free: list[int] = []
        self._lit_mask: dict[tuple, int] = defaultdict(int)
        self._len_mask: dict[int, int] = defaultdict(int)
        self._head_index: dict[Atom, set[ConditionalFact]] = defaultdict(set)
        self._cond_index: dict = defaultdict(set)
        self._pred_index: dict[tuple[str, int], set[ConditionalFact]] = defaultdict(set)
        self.last_deleted: list[ConditionalFact] = []
        self.touched = 0  # instrumentation: stored facts materialized by insert()
        for f in facts:
            self.insert(f)

    def __len__(self):
        return len(self._slot)

    def __iter__(self) -> Iterator[ConditionalFact]:
        return iter(self._slot)

    def __contains__(self, fact) -> bool:
        return fact in self._slot

    @property
    def facts(self) -> frozenset[ConditionalFact]:
        return frozenset(self._slot)

    def sorted(self) -> list[ConditionalFact]:
        return sorted(self._slot, key=lambda f: f.sort_key)

    def with_head_atom(self, atom: Atom) -> set[ConditionalFact]:
        return self._head_index.get(atom, set())

    def with_cond(self, datom) -> set[ConditionalFact]:
        return self._cond_index.get(datom, set())

    def cond_keys(self) -> list:
        return list(self._cond_index)

    def with_head_signature(self, sig: tuple[str, int]) -> set[ConditionalFact]:
        return self._pred_index.get(sig, set())

    def bucket_total(self, fact: ConditionalFact) -> int:
        """Sum of the index bucket sizes for the literals of ``fact`` (upper bound on insert cost)."""
        return sum(len(self._head_index.get(a, ())) for a in fact.head) + sum(
            len(self._cond_index.get(c, ())) for c in fact.cond
        )

    def insert(self, fact: ConditionalFact) -> InsertResult:
        self.last_deleted = []
        if fact.is_empty:
            return InsertResult.INCONSISTENT
        if fact in self._slot:
            self.touched += 1
            return InsertResult.SUBSUMED
        planes: list[int] = []
        support = 0
        for key in _literal_keys(fact):
            carry = self._lit_mask.get(key, 0)
            if not carry:
                continue
            support |= carry
            for i in range(len(planes)):
                nxt = planes[i] & carry
                planes[i] ^= carry
                carry = nxt
                if not carry:
                    break
            if carry:
                planes.append(carry)
        length = len(fact)
        for k in range(1, length + 1):
            hit = self._len_mask.get(k, 0) & _count_equal(planes, support, k)
            if hit:
                self.touched += 1
                return InsertResult.SUBSUMED
        doomed_mask = _count_equal(planes, support, length)
        doomed = []
        while doomed_mask:
            low = doomed_mask & -doomed_mask
            doomed.append(self._at[low.bit_length() - 1])
            doomed_mask ^= low
        self.touched += len(doomed)
        for other in doomed:
            self.delete(other)
        self.last_deleted = doomed
        self._add(fact)
        return InsertResult.INSERTED

    def _add(self, fact: ConditionalFact) -> None:
        if self._free:
            slot = self._free.pop()
            self._at[slot] = fact
        else:
            slot = len(self._at)
            self._at.append(fact)
        self._slot[fact] = slot
        bit = 1 << slot
        for key in _literal_keys(fact):
            self._lit_mask[key] |= bit
        self._len_mask[len(fact)] |= bit
        for a in fact.head:
            self._head_index[a].add(fact)
            self._pred_index[a.signature].add(fact)
        for c in fact.cond:
            self._cond_index[c].add(fact)

    def delete(self, fact: ConditionalFact) -> None:
        slot = self._slot.pop(fact)
        self._at[slot] = None
        self._free.append(slot)
        bit = 1 << slot
        for key in _literal_keys(fact):
            self._drop_bit(self._lit_mask, key, bit)
        self._drop_bit(self._len_mask, len(fact), bit)
        for a in fact.head:
            self._drop(self._head_index, a, fact)
            self._drop(self._pred_index, a.signature, fact)
        for c in fact.cond:
            self._drop(self._cond_index, c, fact)

    @staticmethod
    def _drop_bit(index: dict, key, bit: int) -> None:
        mask = index[key] & ~bit
        if mask:
            index[key] = mask
        else:
            del index[key]

    @staticmethod
    def _drop(index: dict, key, fact) -> None:
        bucket = index.get(key)
        if bucket is not None:
            bucket.discard(fact)
            if not bucket:
                del index[key]


def naive_antichain(facts: Iterable[ConditionalFact]) -> set[ConditionalFact]:
    """Quadratic reference filter: insert one by one, comparing against every stored fact."""
    kept: list[tuple[frozenset, frozenset, ConditionalFact]] = []
    for f in facts:
        if f.is_empty:
            raise ValueError("empty conditional fact")
        subsumed = False
        survivors = []
        for h, c, g in kept:
            if h <= f.head and c <= f.cond:
                subsumed = True
                break
            if not (f.head <= h and f.cond <= c):
                survivors.append((h, c, g))
        if not subsumed:
            survivors.append((f.head, f.cond, f))
            kept = survivors
    return {g for _, _, g in kept}
