"""Ground and non-ground building blocks: atoms, default atoms, clauses,
conditional facts and reduced interpretations.

All objects are immutable and hash-consed on construction (the hash is
computed once), so they can be used freely as set members and dict keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import ContractError

ANSWER = "$answer"

_PLAIN = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_RESERVED = frozenset({"not", "v", "true", "false"})


def format_name(name: str) -> str:
    """Render a predicate or constant so that the lexer reads it back unchanged."""
    if name.startswith("-"):
        return "-" + format_name(name[1:])
    if name == ANSWER or (_PLAIN.match(name) and name not in _RESERVED):
        return name
    return "'" + name.replace("'", "''") + "'"


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("Var", name))

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name


Term = Union[str, int, Var]


def _term_key(t: Term):
    if isinstance(t, int):
        return (0, t, "")
    if isinstance(t, str):
        return (1, 0, t)
    return (2, 0, t.name)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, int):
        return str(t)
    return format_name(t)


class Atom:
    """An objective atom ``pred(args)``; ground when no argument is a :class:`Var`.

    Strong negation ``-p(t)`` is represented by the predicate name ``"-p"``.
    """

    __slots__ = ("pred", "args", "key", "_hash")

    def __init__(self, pred: str, args: Iterable[Term] = ()):
        args = tuple(args)
        self.pred = pred
        self.args = args
        self.key = (pred, len(args), tuple(_term_key(a) for a in args))
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Atom) and other.key == self.key

    def __lt__(self, other: "Atom"):
        return self.key < other.key

    def __le__(self, other: "Atom"):
        return self.key <= other.key

    def __gt__(self, other: "Atom"):
        return self.key > other.key

    def __hash__(self):
        return self._hash

    @property
    def signature(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    @property
    def is_ground(self) -> bool:
        return not any(isinstance(a, Var) for a in self.args)

    @property
    def variables(self) -> set[Var]:
        return {a for a in self.args if isinstance(a, Var)}

    def substitute(self, binding: Mapping[Var, Term]) -> "Atom":
        if not self.args:
            return self
        return Atom(self.pred, (binding.get(a, a) if isinstance(a, Var) else a for a in self.args))

    def __str__(self):
        if not self.args:
            return format_name(self.pred)
        return f"{format_name(self.pred)}({','.join(format_term(a) for a in self.args)})"

    __repr__ = __str__


GroundAtom = Atom


class DefaultAtom:
    """``not(p1 & ... & pn)`` with the conjunction kept as a sorted, duplicate-free tuple.

    The empty conjunction denotes ``not(true)``, which is constantly false.
    """

    __slots__ = ("atoms", "_hash")

    def __init__(self, atoms: Iterable[Atom] = ()):
        self.atoms = tuple(sorted(set(atoms)))
        self._hash = hash(("not", self.atoms))

    def __eq__(self, other):
        return isinstance(other, DefaultAtom) and other.atoms == self.atoms

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "DefaultAtom"):
        return self.sort_key < other.sort_key

    @property
    def sort_key(self):
        return (len(self.atoms), tuple(a.key for a in self.atoms))

    @property
    def is_false(self) -> bool:
        return not self.atoms

    @property
    def is_ground(self) -> bool:
        return all(a.is_ground for a in self.atoms)

    @property
    def variables(self) -> set[Var]:
        out: set[Var] = set()
        for a in self.atoms:
            out |= a.variables
        return out

    def substitute(self, binding: Mapping[Var, Term]) -> "DefaultAtom":
        return DefaultAtom(a.substitute(binding) for a in self.atoms)

    def __str__(self):
        if not self.atoms:
            return "not(true)"
        if len(self.atoms) == 1:
            return f"not {self.atoms[0]}"
        return "not(" + " & ".join(map(str, self.atoms)) + ")"

    __repr__ = __str__


def canonicalize(atoms: Iterable[Atom]) -> DefaultAtom:
    return DefaultAtom(atoms)


def _body_text(pos, neg) -> str:
    return " & ".join([str(a) for a in sorted(pos)] + [str(d) for d in sorted(neg)])


def _rule_text(head, pos, neg) -> str:
    head_text = " | ".join(str(a) for a in sorted(head))
    body = _body_text(pos, neg)
    if not body:
        return f"{head_text or 'false'}."
    if not head_text:
        return f"<- {body}."
    return f"{head_text} <- {body}."


class SuperClause:
    """``A1 | ... | Ak <- B1 & ... & Bm & not C1 & ... & not Cn`` (atoms may hold variables)."""

    __slots__ = ("head", "pos", "neg", "_hash")

    def __init__(self, head: Iterable[Atom] = (), pos: Iterable[Atom] = (), neg: Iterable[DefaultAtom] = ()):
        self.head = frozenset(head)
        self.pos = frozenset(pos)
        self.neg = frozenset(neg)
        self._hash = hash((self.head, self.pos, self.neg))

    def __eq__(self, other):
        return (
            isinstance(other, SuperClause)
            and other.head == self.head
            and other.pos == self.pos
            and other.neg == self.neg
        )

    def __hash__(self):
        return self._hash

    @property
    def sort_key(self):
        return (
            tuple(sorted(a.key for a in self.head)),
            tuple(sorted(a.key for a in self.pos)),
            tuple(sorted(d.sort_key for d in self.neg)),
        )

    @property
    def variables(self) -> set[Var]:
        out: set[Var] = set()
        for a in self.head | self.pos:
            out |= a.variables
        for d in self.neg:
            out |= d.variables
        return out

    @property
    def is_ground(self) -> bool:
        return not self.variables

    def __str__(self):
        return _rule_text(self.head, self.pos, self.neg)

    __repr__ = __str__


class ConditionalFact:
    """A ground disjunction ``head`` conditioned on a set of default atoms."""

    __slots__ = ("head", "cond", "_hash")

    def __init__(self, head: Iterable[Atom] = (), cond: Iterable[DefaultAtom] = ()):
        self.head = frozenset(head)
        self.cond = frozenset(cond)
        self._hash = hash((self.head, self.cond))

    def __eq__(self, other):
        return isinstance(other, ConditionalFact) and other.head == self.head and other.cond == self.cond

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.head) + len(self.cond)

    @property
    def is_empty(self) -> bool:
        return not self.head and not self.cond

    @property
    def sort_key(self):
        return (tuple(sorted(a.key for a in self.head)), tuple(sorted(d.sort_key for d in self.cond)))

    def __str__(self):
        return _rule_text(self.head, (), self.cond)

    __repr__ = __str__


class _Valuation(Mapping):
    """Total assignment over a fixed domain; lookups outside the domain are contract violations."""

    __slots__ = ("_values",)
    _kind = "atom"

    def __init__(self, values: Mapping):
        self._values = dict(values)

    def __getitem__(self, key):
        try:
            return self._values[key]
        except KeyError:
            raise ContractError(f"{self._kind} {key} is outside the interpretation's domain") from None

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        return isinstance(other, type(self)) and other._values == self._values

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def true_set(self) -> frozenset:
        return frozenset(k for k, v in self._values.items() if v)

    def __repr__(self):
        inner = ", ".join(f"{k}={int(v)}" for k, v in sorted(self._values.items()))
        return f"{type(self).__name__}({inner})"


class DefInterp(_Valuation):
    __slots__ = ()
    _kind = "default atom"

    def __getitem__(self, key: DefaultAtom) -> bool:
        if isinstance(key, DefaultAtom) and key.is_false:
            return False
        return super().__getitem__(key)


class ObjInterp(_Valuation):
    __slots__ = ()
    _kind = "objective atom"


@dataclass
class Program:
    clauses: list[SuperClause] = field(default_factory=list)
    monitored: list[DefaultAtom] = field(default_factory=list)
    queries: list = field(default_factory=list)
    strong: set[tuple[str, int]] = field(default_factory=set)

    def atoms(self) -> set[Atom]:
        out: set[Atom] = set()
        for c in self.clauses:
            out |= c.head | c.pos
            for d in c.neg:
                out.update(d.atoms)
        return out


def eval(def_i: DefInterp, obj_i: ObjInterp, target) -> bool:  # noqa: A001 - mirrors the operation name
    """Propositional truth of a conditional fact, default atom or atom set (read as a disjunction)."""
    if isinstance(target, DefaultAtom):
        return def_i[target]
    if isinstance(target, ConditionalFact):
        if not all(def_i[d] for d in target.cond):
            return True
        return any(obj_i[a] for a in target.head)
    if isinstance(target, Atom):
        return obj_i[target]
    return any(obj_i[a] for a in target)
