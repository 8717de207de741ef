"""Operator-precedence parser for formulas, queries and directives.

Priorities (tightest first): ``~``/``not`` (1), ``&`` (2), ``|`` (3),
``->``/``<-``/``<->`` (4).  Levels 2 and 3 are right-associative; level 4
operators are not associative, so ``a -> b -> c`` is rejected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from ..core import Atom, Var
from ..errors import ContextError, ParseError
from .lexer import Token, tokenize


class Formula:
    pass


@dataclass(frozen=True)
class AtomF(Formula):
    atom: Atom
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula

    def __str__(self):
        return f"~{_wrap(self.arg)}"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self):
        if isinstance(self.arg, Binary):
            return f"not({self.arg})"
        return f"not {self.arg}"


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula
    symbol = "?"

    def __str__(self):
        return f"{_wrap(self.left)} {self.symbol} {_wrap(self.right)}"


class And(Binary):
    symbol = "&"


class Or(Binary):
    symbol = "|"


class Implies(Binary):
    """``left -> right``"""

    symbol = "->"


class If(Binary):
    """``left <- right``"""

    symbol = "<-"


class Iff(Binary):
    symbol = "<->"


def _wrap(f: Formula) -> str:
    return f"({f})" if isinstance(f, Binary) else str(f)


_LEVEL4 = {"IMPLIES": Implies, "IF": If, "IFF": Iff}


@dataclass
class Statement:
    kind: str  # "rule", "query" or "monitor"
    formula: Formula
    line: int
    column: int


class Parser:
    def __init__(self, tokens: list[Token], anon: Iterator[int] | None = None):
        self.tokens = tokens
        self.i = 0
        self.not_depth = 0
        self._anon = anon if anon is not None else itertools.count(1)

    # token helpers -----------------------------------------------------
    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, *kinds: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input (missing '.'?)")
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        if not self.at(kind):
            self.error(f"expected {what}")
        return self.advance()

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(message, last.line if last else None, last.column if last else None)
        found = "" if tok.kind == "FULLSTOP" and "'.'" in message else f" near {tok.text!r}"
        raise ParseError(message + found, tok.line, tok.column)

    # grammar -----------------------------------------------------------
    def statement(self) -> Statement:
        first = self.peek()
        if first.kind == "QUERY":
            self.advance()
            body = self.formula3()
            kind = "query"
        elif first.kind == "DIRECTIVE":
            if first.text != "monitor":
                self.error(f"unknown directive #{first.text}")
            self.advance()
            body = self.formula3()
            kind = "monitor"
        else:
            body = self.formula4()
            kind = "rule"
        self.expect("FULLSTOP", "'.'")
        return Statement(kind, body, first.line, first.column)

    def formula4(self) -> Formula:
        if self.at("IF"):
            self.advance()
            left: Formula = Const(False)
            right = self.formula3()
            result: Formula = If(left, right)
        else:
            left = self.formula3()
            tok = self.peek()
            if tok is None or tok.kind not in _LEVEL4:
                return left
            self.advance()
            result = _LEVEL4[tok.kind](left, self.formula3())
        tok = self.peek()
        if tok is not None and tok.kind in _LEVEL4:
            self.error(f"operator {tok.text!r} is not associative; add parentheses", tok)
        return result

    def formula3(self) -> Formula:
        left = self.formula2()
        if self.at("OR"):
            self.advance()
            return Or(left, self.formula3())
        return left

    def formula2(self) -> Formula:
        left = self.formula1()
        if self.at("AND"):
            self.advance()
            return And(left, self.formula2())
        return left

    def formula1(self) -> Formula:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok.kind == "NEG":
            self.advance()
            return Neg(self.formula1())
        if tok.kind == "NOT":
            self.advance()
            if self.not_depth or self.at("NOT"):
                self.error("default negation cannot be nested", tok)
            self.not_depth += 1
            try:
                arg = self.formula1()
            finally:
                self.not_depth -= 1
            return Not(arg, (tok.line, tok.column))
        if tok.kind == "MINUS":
            self.advance()
            if not self.at("IDENT", "QUOTED"):
                self.error("strong negation '-' can only be applied to an atom")
            inner = self.atom()
            if isinstance(inner, Const):
                self.error("strong negation '-' can only be applied to an atom", tok)
            return AtomF(Atom("-" + inner.atom.pred, inner.atom.args), inner.pos)
        if tok.kind == "LPAREN":
            self.advance()
            inner = self.formula4()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind in ("IDENT", "QUOTED"):
            return self.atom()
        self.error("expected a formula")

    def atom(self) -> Formula:
        tok = self.advance()
        name = tok.text
        args = []
        if self.at("LPAREN"):
            self.advance()
            args.append(self.term())
            while self.at("AND") and self.peek().text == ",":
                self.advance()
                args.append(self.term())
            self.expect("RPAREN", "')' or ','")
        elif tok.kind == "IDENT" and name in ("true", "false"):
            return Const(name == "true")
        return AtomF(Atom(name, args), (tok.line, tok.column))

    def term(self):
        tok = self.advance()
        if tok.kind == "VAR":
            return Var(tok.text)
        if tok.kind == "ANON":
            return Var(f"_G{next(self._anon)}")
        if tok.kind == "INT":
            return int(tok.text)
        if tok.kind == "MINUS" and self.at("INT"):
            return -int(self.advance().text)
        if tok.kind in ("IDENT", "QUOTED"):
            if self.at("LPAREN"):
                self.error("function symbols are not permitted")
            return tok.text
        self.error("expected a term (constant, integer or variable)", tok)


def parse_formula(tokens: list[Token] | str) -> Formula:
    """Parse one formula terminated by a full stop."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    p = Parser(tokens)
    if not tokens:
        raise ParseError("empty input")
    f = p.formula4()
    p.expect("FULLSTOP", "'.'")
    if p.peek() is not None:
        p.error("unexpected input after '.'")
    return f


def split_statements(tokens: list[Token]) -> list[list[Token]]:
    out, cur = [], []
    for tok in tokens:
        cur.append(tok)
        if tok.kind == "FULLSTOP":
            out.append(cur)
            cur = []
    if cur:
        t = cur[-1]
        raise ParseError("statement is not terminated by '.'", t.line, t.column)
    return out


def parse_statements(text: str) -> list[Statement]:
    anon = itertools.count(1)
    out = []
    for chunk in split_statements(tokenize(text)):
        p = Parser(chunk, anon)
        out.append(p.statement())
    return out


# --------------------------------------------------------------------------
# polarity


def occurrences(f: Formula, positive: bool = True, negative: bool = False):
    """Yield ``(subformula, positive, negative)`` for every node; both flags may be set under ``<->``."""
    yield f, positive, negative
    if isinstance(f, (AtomF, Const)):
        return
    if isinstance(f, Neg):
        yield from occurrences(f.arg, negative, positive)
    elif isinstance(f, Not):
        yield from occurrences(f.arg, positive, negative)
    elif isinstance(f, (And, Or)):
        yield from occurrences(f.left, positive, negative)
        yield from occurrences(f.right, positive, negative)
    elif isinstance(f, Implies):
        yield from occurrences(f.left, negative, positive)
        yield from occurrences(f.right, positive, negative)
    elif isinstance(f, If):
        yield from occurrences(f.left, positive, negative)
        yield from occurrences(f.right, negative, positive)
    elif isinstance(f, Iff):
        both = positive or negative
        yield from occurrences(f.left, both, both)
        yield from occurrences(f.right, both, both)


def _objective_positive(f: Formula) -> bool:
    if isinstance(f, (AtomF, Const)):
        return True
    if isinstance(f, (And, Or)):
        return _objective_positive(f.left) and _objective_positive(f.right)
    return False


def check_context(f: Formula) -> None:
    """Raise :class:`ContextError` unless every ``not`` sits in negative context
    and only wraps ``&``/``|`` combinations of objective atoms."""
    for node, pos, neg in occurrences(f):
        if not isinstance(node, Not):
            continue
        line, col = node.pos
        if pos or not neg:
            raise ContextError(f"default negation in positive context: {node}", line or None, col or None)
        if not _objective_positive(node.arg):
            raise ContextError(
                f"only '&', '|' and objective atoms may occur inside default negation: {node}",
                line or None,
                col or None,
            )
