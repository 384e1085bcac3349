"""Structural model of a parsed Java compilation unit."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .lexer import Token

VISIBILITIES = ("public", "private", "protected", "default")

STATEMENT_KINDS = frozenset(
    {
        "if", "else-branch", "for", "while", "do", "switch-case", "try", "catch",
        "finally", "return", "assignment", "declaration", "expression", "block",
        "lambda-body", "anonymous-class-body",
    }
)


@dataclass
class Statement:
    kind: str
    nesting_depth: int
    canonical_text: str
    line: int
    children: list[Statement] = field(default_factory=list)

    def walk(self) -> Iterator[Statement]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class StatementTree:
    roots: list[Statement] = field(default_factory=list)

    def nodes(self) -> Iterator[Statement]:
        for root in self.roots:
            yield from root.walk()

    def count(self, kind: str) -> int:
        return sum(1 for node in self.nodes() if node.kind == kind)

    def canonical_texts(self) -> list[str]:
        return [node.canonical_text for node in self.nodes()]


@dataclass(frozen=True)
class InvocationRecord:
    receiver: str | None
    name: str
    arg_count: int
    line: int
    is_static: bool = False


@dataclass
class FieldModel:
    name: str
    type_name: str
    visibility: str
    modifiers: frozenset[str]
    line: int


@dataclass
class Parameter:
    name: str
    type_name: str


@dataclass
class MethodModel:
    name: str
    signature: str
    return_type: str | None
    visibility: str
    modifiers: frozenset[str]
    parameters: list[Parameter]
    is_constructor: bool
    has_body: bool
    body: StatementTree
    invocations: list[InvocationRecord]
    accessed_field_names: frozenset[str]
    source_span: tuple[int, int]
    raw_body_text: str
    tokens: list[Token] = field(repr=False, default_factory=list)
    local_names: frozenset[str] = frozenset()
    type_params: frozenset[str] = frozenset()
    local_class_count: int = 0
    variable_count: int = 0


@dataclass
class ClassModel:
    name: str
    qualified_name: str
    kind: str  # class | interface | enum | annotation
    is_inner: bool
    fields: list[FieldModel]
    methods: list[MethodModel]
    subclass_count: int
    referenced_type_names: frozenset[str]
    source_span: tuple[int, int]
    initializers: list[StatementTree] = field(default_factory=list)
    initializer_invocations: list[InvocationRecord] = field(default_factory=list)
    initializer_variable_count: int = 0
    own_tokens: list[Token] = field(repr=False, default_factory=list)
    type_params: frozenset[str] = frozenset()
    extends: tuple[str, ...] = ()
    implements: tuple[str, ...] = ()
    outer: str | None = None

    def method(self, signature: str) -> MethodModel | None:
        for m in self.methods:
            if m.signature == signature:
                return m
        return None


@dataclass
class CodeModel:
    path: str
    classes: list[ClassModel]
    package: str | None = None
    code_lines: frozenset[int] = frozenset()

    def find_class(self, qualified_name: str) -> ClassModel | None:
        for cls in self.classes:
            if cls.qualified_name == qualified_name:
                return cls
        return None

    def methods(self) -> Iterator[tuple[ClassModel, MethodModel]]:
        for cls in self.classes:
            for m in cls.methods:
                yield cls, m
