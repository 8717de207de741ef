"""Tokenizer for ``.slp`` source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

# Kinds for operator tokens; several spellings map to the same kind.
OPERATORS = {
    "<->": "IFF",
    "->": "IMPLIES",
    "<-": "IF",
    ":-": "IF",
    "~": "NEG",
    "&": "AND",
    ",": "AND",
    "|": "OR",
    ";": "OR",
    "(": "LPAREN",
    ")": "RPAREN",
    ".": "FULLSTOP",
    "?": "QUERY",
    "-": "MINUS",
}

_OP_RE = "|".join(re.escape(op) for op in sorted(OPERATORS, key=len, reverse=True))
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#[a-z_]+)
  | (?P<int>[0-9]+)
  | (?P<word>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<quote>')
  | (?P<op>{_OP_RE})
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def __repr__(self):
        return f"{self.kind}({self.text!r})"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        col = pos - line_start + 1
        if text[pos] == "'":
            end, value = _scan_quoted(text, pos + 1, line, col)
            tokens.append(Token("QUOTED", value, line, col))
            pos = end
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"illegal character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ws":
            pass
        elif kind == "comment":
            pass
        elif kind == "directive":
            tokens.append(Token("DIRECTIVE", lexeme[1:], line, col))
        elif kind == "int":
            tokens.append(Token("INT", lexeme, line, col))
        elif kind == "word":
            if lexeme == "not":
                tokens.append(Token("NOT", lexeme, line, col))
            elif lexeme == "v":
                tokens.append(Token("OR", lexeme, line, col))
            else:
                tokens.append(Token("IDENT", lexeme, line, col))
        elif kind == "var":
            tokens.append(Token("ANON" if lexeme == "_" else "VAR", lexeme, line, col))
        else:
            tokens.append(Token(OPERATORS[lexeme], lexeme, line, col))
        for i in range(pos, m.end()):
            if text[i] == "\n":
                line += 1
                line_start = i + 1
        pos = m.end()
    return tokens


def _scan_quoted(text: str, pos: int, line: int, col: int) -> tuple[int, str]:
    chars = []
    n = len(text)
    while pos < n:
        c = text[pos]
        if c == "'":
            if pos + 1 < n and text[pos + 1] == "'":
                chars.append("'")
                pos += 2
                continue
            return pos + 1, "".join(chars)
        if c == "\n":
            break
        chars.append(c)
        pos += 1
    raise ParseError("unterminated quoted atom", line, col)
