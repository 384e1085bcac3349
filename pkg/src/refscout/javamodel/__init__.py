"""Structural parsing of Java source for metric computation."""
from .lexer import EncodingError, JavaSyntaxError, tokenize
from .model import (
    ClassModel,
    CodeModel,
    FieldModel,
    InvocationRecord,
    MethodModel,
    Parameter,
    Statement,
    StatementTree,
)
from .parser import canonicalize_statement, canonicalize_text, parse_compilation_unit, render_tokens

__all__ = [
    "ClassModel",
    "CodeModel",
    "EncodingError",
    "FieldModel",
    "InvocationRecord",
    "JavaSyntaxError",
    "MethodModel",
    "Parameter",
    "Statement",
    "StatementTree",
    "canonicalize_statement",
    "canonicalize_text",
    "parse_compilation_unit",
    "render_tokens",
    "tokenize",
]
