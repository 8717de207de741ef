"""Reading ``.slp`` text: tokens, formulas, context checks and clausal form."""

from .clausal import (
    Query,
    check_range_restriction,
    dnf,
    expand_strong_negation,
    format_program,
    parse_program,
    parse_query,
    to_clausal,
)
from .lexer import Token, tokenize
from .parser import check_context, parse_formula, parse_statements

__all__ = [
    "Query",
    "Token",
    "check_context",
    "check_range_restriction",
    "dnf",
    "expand_strong_negation",
    "format_program",
    "parse_formula",
    "parse_program",
    "parse_query",
    "parse_statements",
    "to_clausal",
    "tokenize",
]
