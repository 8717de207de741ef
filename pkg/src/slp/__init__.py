"""Query answering for super logic programs under the static semantics."""

__version__ = "0.1.0"
