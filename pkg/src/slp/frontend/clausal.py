"""Clausal normal form, range restriction and strong negation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..core import Atom, DefaultAtom, Program, SuperClause, Var
from ..errors import ContextError, ParseError, RangeRestrictionError
from .parser import (
    And,
    AtomF,
    Const,
    Formula,
    Iff,
    If,
    Implies,
    Neg,
    Not,
    Or,
    check_context,
    parse_statements,
)


@dataclass(frozen=True)
class DefLeaf(Formula):
    """A default atom produced by splitting ``not H`` over the disjuncts of H."""

    datom: DefaultAtom

    def __str__(self):
        return str(self.datom)


def dnf(f: Formula) -> list[frozenset[Atom]]:
    """Disjunctive normal form of a positive formula, with absorbed (non-minimal) disjuncts removed."""
    if isinstance(f, AtomF):
        terms = [frozenset([f.atom])]
    elif isinstance(f, Const):
        terms = [frozenset()] if f.value else []
    elif isinstance(f, Or):
        terms = dnf(f.left) + dnf(f.right)
    elif isinstance(f, And):
        terms = [a | b for a in dnf(f.left) for b in dnf(f.right)]
    else:
        raise ContextError(f"only '&', '|' and objective atoms may occur inside default negation: {f}")
    terms = set(terms)
    return sorted((t for t in terms if not any(o < t for o in terms)), key=lambda t: sorted(a.key for a in t))


def split_default(f: Not) -> list[DefaultAtom]:
    """``not(H1 | ... | Hk)`` is equivalent to ``not H1 & ... & not Hk``."""
    return [DefaultAtom(t) for t in dnf(f.arg)]


def _expand_not(f: Formula) -> Formula:
    if isinstance(f, Not):
        leaves: list[Formula] = [DefLeaf(d) for d in split_default(f)]
        if not leaves:
            return Const(True)
        out = leaves[-1]
        for leaf in reversed(leaves[:-1]):
            out = And(leaf, out)
        return out
    if isinstance(f, Neg):
        return Neg(_expand_not(f.arg))
    if isinstance(f, (And, Or, Implies, If, Iff)):
        return type(f)(_expand_not(f.left), _expand_not(f.right))
    return f


Literal = tuple  # (Atom | DefaultAtom, sign)


def _product(xs: list[frozenset], ys: list[frozenset]) -> list[frozenset]:
    out = []
    for x in xs:
        for y in ys:
            c = x | y
            if not _tautology(c):
                out.append(c)
    return out


def _tautology(c: frozenset) -> bool:
    return any((lit, not sign) in c for lit, sign in c)


def _cnf(f: Formula, sign: bool) -> list[frozenset]:
    if isinstance(f, (AtomF, DefLeaf)):
        item = f.atom if isinstance(f, AtomF) else f.datom
        if isinstance(item, DefaultAtom) and item.is_false:
            return _cnf(Const(False), sign)
        return [frozenset([(item, sign)])]
    if isinstance(f, Const):
        return [] if f.value == sign else [frozenset()]
    if isinstance(f, Neg):
        return _cnf(f.arg, not sign)
    if isinstance(f, And):
        if sign:
            return _cnf(f.left, True) + _cnf(f.right, True)
        return _product(_cnf(f.left, False), _cnf(f.right, False))
    if isinstance(f, Or):
        if sign:
            return _product(_cnf(f.left, True), _cnf(f.right, True))
        return _cnf(f.left, False) + _cnf(f.right, False)
    if isinstance(f, Implies):
        if sign:
            return _product(_cnf(f.left, False), _cnf(f.right, True))
        return _cnf(f.left, True) + _cnf(f.right, False)
    if isinstance(f, If):
        if sign:
            return _product(_cnf(f.left, True), _cnf(f.right, False))
        return _cnf(f.left, False) + _cnf(f.right, True)
    if isinstance(f, Iff):
        if sign:
            return _product(_cnf(f.left, False), _cnf(f.right, True)) + _product(
                _cnf(f.left, True), _cnf(f.right, False)
            )
        return _product(_cnf(f.left, True), _cnf(f.right, True)) + _product(
            _cnf(f.left, False), _cnf(f.right, False)
        )
    raise TypeError(f"unexpected formula node {f!r}")


def to_clausal(f: Formula) -> list[SuperClause]:
    """Clauses ``head <- pos & not ...`` equivalent to ``f`` (context check must have passed)."""
    out: dict[SuperClause, None] = {}
    for lits in _cnf(_expand_not(f), True):
        head, pos, neg = [], [], []
        for item, sign in lits:
            if isinstance(item, DefaultAtom):
                if sign:
                    raise ContextError(f"default negation in positive context: {item}")
                neg.append(item)
            elif sign:
                head.append(item)
            else:
                pos.append(item)
        clause = SuperClause(head, pos, neg)
        if clause.head & clause.pos:
            continue
        out[clause] = None
    return sorted(out, key=lambda c: c.sort_key)


def check_range_restriction(clause: SuperClause) -> None:
    bound: set[Var] = set()
    for a in clause.pos:
        bound |= a.variables
    loose = clause.variables - bound
    if loose:
        names = sorted(v.name for v in loose)
        raise RangeRestrictionError(
            f"variable(s) {', '.join(names)} do not occur in a positive body literal of: {clause}", names
        )


def strong_signatures(clauses: Iterable[SuperClause]) -> set[tuple[str, int]]:
    sigs = set()
    for c in clauses:
        atoms = set(c.head | c.pos)
        for d in c.neg:
            atoms.update(d.atoms)
        sigs.update(a.signature for a in atoms if a.pred.startswith("-"))
    return sigs


def strong_constraint(sig: tuple[str, int]) -> SuperClause:
    pred, arity = sig
    xs = [Var(f"X{i}") for i in range(1, arity + 1)]
    return SuperClause((), (Atom(pred[1:], xs), Atom(pred, xs)), ())


def expand_strong_negation(clauses: list[SuperClause]) -> list[SuperClause]:
    """Append ``<- p(X) & -p(X)`` for every strongly negated predicate that occurs."""
    sigs = strong_signatures(clauses)
    if not sigs:
        return list(clauses)
    extra = [strong_constraint(s) for s in sorted(sigs)]
    return list(clauses) + [c for c in extra if c not in clauses]


# --------------------------------------------------------------------------
# whole programs


@dataclass(frozen=True)
class Query:
    """A query body: a conjunction of literals, variables listed in first-occurrence order."""

    body: Formula
    variables: tuple[Var, ...]
    text: str


def _literals(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _literals(f.left) + _literals(f.right)
    return [f]


def _formula_vars(f: Formula) -> list[Var]:
    seen: dict[Var, None] = {}

    def walk(g):
        if isinstance(g, AtomF):
            for a in g.atom.args:
                if isinstance(a, Var) and not a.name.startswith("_G"):
                    seen.setdefault(a)
        elif isinstance(g, (Neg, Not)):
            walk(g.arg)
        elif hasattr(g, "left"):
            walk(g.left)
            walk(g.right)

    walk(f)
    return list(seen)


def make_query(body: Formula, line: int | None = None, column: int | None = None) -> Query:
    for lit in _literals(body):
        if isinstance(lit, Not) or isinstance(lit, AtomF):
            continue
        raise ParseError(f"query literals must be atoms or default negations, got: {lit}", line, column)
    check_context(If(Const(False), body))
    text = ", ".join(str(lit) for lit in _literals(body))
    return Query(body, tuple(_formula_vars(body)), f"? {text}.")


def monitored_atoms(body: Formula, line=None, column=None) -> list[DefaultAtom]:
    out = []
    for lit in _literals(body):
        if not isinstance(lit, Not):
            raise ParseError(f"#monitor expects default negation literals, got: {lit}", line, column)
        check_context(If(Const(False), lit))
        for d in split_default(lit):
            if not d.is_ground:
                raise ParseError(f"monitored default atom must be ground: {d}", line, column)
            out.append(d)
    return out


def clauses_of(f: Formula, line=None, column=None) -> list[SuperClause]:
    try:
        check_context(f)
    except ContextError as exc:
        if exc.line is None and line is not None:
            raise ContextError(str(exc), line, column) from None
        raise
    clauses = to_clausal(f)
    for c in clauses:
        try:
            check_range_restriction(c)
        except RangeRestrictionError as exc:
            if line is not None:
                raise RangeRestrictionError(f"{line}:{column}: {exc}", exc.variables) from None
            raise
    return clauses


def parse_program(text: str) -> Program:
    """Parse ``.slp`` text into clauses, monitored default atoms and queries."""
    program = Program()
    for st in parse_statements(text):
        if st.kind == "query":
            program.queries.append(make_query(st.formula, st.line, st.column))
        elif st.kind == "monitor":
            program.monitored.extend(d for d in monitored_atoms(st.formula, st.line, st.column)
                                     if d not in program.monitored)
        else:
            program.clauses.extend(clauses_of(st.formula, st.line, st.column))
    program.strong = strong_signatures(program.clauses)
    program.clauses = expand_strong_negation(program.clauses)
    return program


def parse_query(text: str) -> Query:
    text = text.strip()
    if not text.startswith("?"):
        text = "? " + text
    if not text.endswith("."):
        text += "."
    (st,) = parse_statements(text)
    return make_query(st.formula, st.line, st.column)


def format_program(program: Program) -> str:
    lines = [str(c) for c in program.clauses]
    if program.monitored:
        lines.append("#monitor " + ", ".join(str(d) for d in program.monitored) + ".")
    lines.extend(q.text for q in program.queries)
    return "\n".join(lines) + ("\n" if lines else "")
