"""Recursive-descent parser for the supported Java subset.

Declarations and statements are parsed structurally; expressions are walked
as token ranges, which is enough to find invocations, lambdas, anonymous
classes, casts and type references without building an expression AST.
"""
from __future__ import annotations

from .lexer import (
    MODIFIERS,
    PRIMITIVES,
    JavaSyntaxError,
    Token,
    code_lines,
    decode_source,
    tokenize,
)
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

ASSIGNMENT_OPS = frozenset("= += -= *= /= %= &= |= ^= <<= >>= >>>=".split())
_TYPE_DECL_KW = frozenset({"class", "interface", "enum"})
_FIELD_MODIFIERS = frozenset({"static", "final", "synchronized"})
_METHOD_MODIFIERS = frozenset({"static", "final", "synchronized", "abstract"})
_VISIBILITY = ("public", "private", "protected")
_NOT_TYPES = PRIMITIVES | {"void", "var"}


def render_tokens(tokens) -> str:
    """Join tokens with the single-space layout used for canonical text."""
    out: list[str] = []
    prev = None
    for tok in tokens:
        if prev is not None and _space_between(prev, tok):
            out.append(" ")
        out.append(tok.text)
        prev = tok
    return "".join(out)


def _space_between(a: Token, b: Token) -> bool:
    if b.kind == "op":
        if b.text in (";", ",", ")", "]", ".", "::"):
            return False
        if b.text == "(" and b.paren == "call":
            return False
        if b.text == "[" and (
            a.kind == "ident"
            or a.text in (")", "]")
            or (a.kind == "keyword" and a.text in PRIMITIVES)
            or (a.generic and a.text == ">")
        ):
            return False
        if b.generic and b.text in ("<", ">"):
            return False
        if b.text in ("++", "--") and (a.kind == "ident" or a.text in (")", "]")):
            return False
    if a.kind == "op":
        if a.text in ("(", "[", ".", "::", "@", "!", "~"):
            return False
        if a.generic and a.text == "<":
            return False
    return True


def canonicalize_text(text: str) -> str:
    """Canonical form of a code fragment: comments dropped, layout normalized."""
    return render_tokens(tokenize(decode_source(text)))


def canonicalize_statement(statement) -> str:
    if isinstance(statement, Statement):
        return statement.canonical_text
    return canonicalize_text(statement)


def _visibility(mods) -> str:
    for v in _VISIBILITY:
        if v in mods:
            return v
    return "default"


class _BodyContext:
    """Facts gathered while one method (or the class initializers) is parsed."""

    def __init__(self, locals_=()):
        self.locals: set[str] = set(locals_)
        self.name_uses: list[int] = []
        self.calls: list[tuple[int, int | None, int]] = []  # (name idx, receiver start, argc)
        self.local_classes = 0
        self.variables = 0


class _ClassState:
    def __init__(self, cls: ClassModel, decl_start: int):
        self.cls = cls
        self.decl_start = decl_start
        self.fields: list[FieldModel] = []
        self.pending: list[tuple[MethodModel, _BodyContext]] = []
        self.init_ctx = _BodyContext()
        self.initializers: list[StatementTree] = []
        self.nested_spans: list[tuple[int, int]] = []
        self.method_type_params: set[str] = set()


class _Parser:
    def __init__(self, text: str, path: str):
        self.text = text
        self.path = path
        self.t = tokenize(text, path)
        self.n = len(self.t)
        self.i = 0
        self.classes: list[ClassModel] = []
        self.package: str | None = None
        self.match = self._bracket_map()

    # ----------------------------------------------------------------- utils
    def _bracket_map(self) -> dict[int, int]:
        pairs = {")": "(", "]": "[", "}": "{"}
        stack: list[int] = []
        match: dict[int, int] = {}
        for idx, tok in enumerate(self.t):
            if tok.kind != "op":
                continue
            if tok.text in ("(", "[", "{"):
                stack.append(idx)
            elif tok.text in pairs:
                if not stack or self.t[stack[-1]].text != pairs[tok.text]:
                    expected = {"(": ")", "[": "]", "{": "}"}[self.t[stack[-1]].text] if stack else None
                    msg = f"unexpected {tok.text!r}" + (f", expected {expected!r}" if expected else "")
                    raise JavaSyntaxError(msg, tok.line, tok.col, self.path)
                open_idx = stack.pop()
                match[open_idx] = idx
                match[idx] = open_idx
        if stack:
            tok = self.t[stack[-1]]
            raise JavaSyntaxError(f"unclosed {tok.text!r}", tok.line, tok.col, self.path)
        return match

    def tok(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.t[j] if 0 <= j < self.n else None

    def at_op(self, text: str, k: int = 0) -> bool:
        tok = self.tok(k)
        return tok is not None and tok.kind == "op" and tok.text == text

    def at_kw(self, text: str, k: int = 0) -> bool:
        tok = self.tok(k)
        return tok is not None and tok.kind == "keyword" and tok.text == text

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok()
        if tok is None:
            if self.t:
                last = self.t[-1]
                raise JavaSyntaxError(message, last.end_line, last.col + len(last.text), self.path)
            raise JavaSyntaxError(message, 1, 1, self.path)
        raise JavaSyntaxError(message, tok.line, tok.col, self.path)

    def expect_op(self, text: str) -> Token:
        if not self.at_op(text):
            found = self.tok()
            self.error(f"expected {text!r}" + (f", found {found.text!r}" if found else " at end of input"))
        tok = self.t[self.i]
        self.i += 1
        return tok

    def expect_ident(self) -> Token:
        tok = self.tok()
        if tok is None or tok.kind != "ident":
            self.error("expected identifier" + (f", found {tok.text!r}" if tok else " at end of input"))
        self.i += 1
        return tok

    def skip_annotations(self):
        while self.i < self.n and self.t[self.i].annotation:
            self.i += 1

    def render(self, a: int, b: int) -> str:
        return render_tokens(self.t[a : b + 1])

    def node(self, kind: str, a: int, b: int, depth: int, children=None) -> Statement:
        return Statement(kind, depth, self.render(a, b), self.t[a].line, list(children or []))

    # ----------------------------------------------------------------- types
    def scan_type(self, j: int) -> int | None:
        """Lookahead: index just past a type starting at ``j``, or None."""
        if j >= self.n:
            return None
        tok = self.t[j]
        if tok.kind == "keyword" and (tok.text in PRIMITIVES or tok.text == "void"):
            j += 1
        elif tok.kind == "ident":
            j += 1
            while j < self.n:
                cur = self.t[j]
                if cur.generic and cur.text == "<":
                    j = self._skip_generic(j)
                elif cur.is_op(".") and j + 1 < self.n and self.t[j + 1].kind == "ident":
                    j += 2
                else:
                    break
        else:
            return None
        while j + 1 < self.n and self.t[j].is_op("[") and self.t[j + 1].is_op("]"):
            j += 2
        return j

    def _skip_generic(self, j: int) -> int:
        depth = 0
        while j < self.n:
            cur = self.t[j]
            if cur.generic and cur.kind == "op":
                if cur.text == "<":
                    depth += 1
                elif cur.text == ">":
                    depth -= 1
                    if depth == 0:
                        return j + 1
            j += 1
        self.error("unterminated type arguments")

    def mark_type(self, a: int, b: int):
        for k in range(a, b):
            tok = self.t[k]
            if tok.kind != "ident":
                continue
            qualifier = k + 2 < b and self.t[k + 1].is_op(".") and self.t[k + 2].kind == "ident"
            if not qualifier:
                tok.role = "type"

    def parse_type(self) -> str:
        start = self.i
        end = self.scan_type(start)
        if end is None:
            self.error("expected type")
        self.mark_type(start, end)
        self.i = end
        return self.render(start, end - 1)

    def parse_type_list(self) -> list[str]:
        names = [self.parse_type()]
        while self.at_op(","):
            self.i += 1
            names.append(self.parse_type())
        return names

    def parse_type_params(self) -> set[str]:
        start = self.i
        end = self._skip_generic(start)
        names: set[str] = set()
        depth = 0
        for k in range(start, end):
            tok = self.t[k]
            if tok.generic and tok.kind == "op" and tok.text in ("<", ">"):
                depth += 1 if tok.text == "<" else -1
                continue
            prev = self.t[k - 1]
            if depth == 1 and tok.kind == "ident" and (prev.is_op(",") or (prev.is_op("<") and prev.generic)):
                names.add(tok.text)
        self.mark_type(start, end)
        for k in range(start, end):
            if self.t[k].text in names:
                self.t[k].role = None
        self.i = end
        return names

    # ------------------------------------------------------------ modifiers
    def parse_modifiers(self) -> tuple[set[str], int | None]:
        mods: set[str] = set()
        first = None
        while self.i < self.n:
            tok = self.t[self.i]
            if tok.annotation:
                self.i += 1
                continue
            if tok.kind == "keyword" and tok.text in MODIFIERS and not (
                tok.text == "default" and (self.at_op(":", 1) or self.at_op("->", 1))
            ):
                mods.add(tok.text)
                if first is None:
                    first = self.i
                self.i += 1
                continue
            if tok.kind == "ident" and tok.text == "sealed" and self.tok(1) is not None and (
                self.tok(1).kind == "keyword" or self.tok(1).kind == "ident"
            ):
                if first is None:
                    first = self.i
                self.i += 1
                continue
            break
        return mods, first

    def at_type_decl(self) -> bool:
        tok = self.tok()
        if tok is None:
            return False
        if tok.kind == "keyword" and tok.text in _TYPE_DECL_KW:
            return True
        return tok.is_op("@") and self.at_kw("interface", 1)

    # ----------------------------------------------------------- top level
    def parse_unit(self) -> CodeModel:
        self.skip_annotations()
        if self.at_kw("package"):
            self.i += 1
            start = self.i
            while self.i < self.n and not self.at_op(";"):
                self.i += 1
            self.package = "".join(tok.text for tok in self.t[start : self.i])
            self.expect_op(";")
        while True:
            self.skip_annotations()
            if not self.at_kw("import"):
                break
            while self.i < self.n and not self.at_op(";"):
                self.i += 1
            self.expect_op(";")
        while self.i < self.n:
            if self.at_op(";"):
                self.i += 1
                continue
            mods, first = self.parse_modifiers()
            if not self.at_type_decl():
                self.error("expected class, interface or enum declaration")
            self.parse_type_decl(mods, first if first is not None else self.i, None)
        return CodeModel(self.path, self.classes, self.package, code_lines(self.t))

    def parse_type_decl(self, mods: set[str], decl_start: int, outer: _ClassState | None) -> ClassModel:
        if self.at_op("@"):
            kind = "annotation"
            self.i += 2
        else:
            kind = self.t[self.i].text
            self.i += 1
        name = self.expect_ident().text
        type_params: set[str] = set()
        if self.tok() is not None and self.tok().generic and self.at_op("<"):
            type_params = self.parse_type_params()
        extends: list[str] = []
        implements: list[str] = []
        while True:
            if self.at_kw("extends"):
                self.i += 1
                extends = self.parse_type_list()
            elif self.at_kw("implements"):
                self.i += 1
                implements = self.parse_type_list()
            elif self.tok() is not None and self.tok().kind == "ident" and self.tok().text == "permits":
                self.i += 1
                self.parse_type_list()
            else:
                break
        if not self.at_op("{"):
            self.error("expected '{' to open the type body")
        if outer is not None:
            qualified = f"{outer.cls.qualified_name}.{name}"
            type_params |= outer.cls.type_params
        else:
            qualified = f"{self.package}.{name}" if self.package else name
        cls = ClassModel(
            name=name,
            qualified_name=qualified,
            kind=kind,
            is_inner=outer is not None,
            fields=[],
            methods=[],
            subclass_count=0,
            referenced_type_names=frozenset(),
            source_span=(self.t[decl_start].line, self.t[decl_start].line),
            type_params=frozenset(type_params),
            extends=tuple(extends),
            implements=tuple(implements),
            outer=outer.cls.qualified_name if outer else None,
        )
        self.classes.append(cls)
        state = _ClassState(cls, decl_start)
        open_idx = self.i
        close = self.match[open_idx]
        self.i = open_idx + 1
        if kind == "enum":
            self.parse_enum_constants(state, close)
        while self.i < close:
            self.parse_member(state)
        if self.i != close:
            self.error("malformed type body")
        self.i = close + 1
        self.finish_class(state, close)
        return cls

    def parse_enum_constants(self, state: _ClassState, close: int):
        scratch: list[Statement] = []
        while self.i < close:
            self.skip_annotations()
            tok = self.tok()
            if tok.is_op(";"):
                self.i += 1
                return
            if tok.is_op(","):
                self.i += 1
                continue
            if tok.kind != "ident":
                return
            self.i += 1
            if self.at_op("("):
                c = self.match[self.i]
                self.scan_region(self.i + 1, c, 0, state.init_ctx, scratch)
                self.i = c + 1
            if self.at_op("{"):
                c = self.match[self.i]
                self.parse_anonymous_members(self.i, c, 0, state.init_ctx)
                self.i = c + 1

    def parse_member(self, state: _ClassState):
        if self.at_op(";"):
            self.i += 1
            return
        if self.at_op("{") or (self.at_kw("static") and self.at_op("{", 1)):
            if self.at_kw("static"):
                self.i += 1
            roots = self.parse_block_statements(0, state.init_ctx)
            state.initializers.append(StatementTree(roots))
            return
        mods, first = self.parse_modifiers()
        decl_start = first if first is not None else self.i
        if self.at_type_decl():
            self.parse_type_decl(mods, decl_start, state)
            state.nested_spans.append((decl_start, self.i - 1))
            return
        type_params: set[str] = set()
        tok = self.tok()
        if tok is not None and tok.generic and tok.text == "<":
            type_params = self.parse_type_params()
        tok = self.tok()
        if tok is not None and tok.kind == "ident" and self.at_op("(", 1):
            name_tok = tok
            self.i += 1
            self.parse_method(state, mods, decl_start, name_tok, None, type_params)
            return
        return_type = self.parse_type()
        name_tok = self.expect_ident()
        if self.at_op("("):
            self.parse_method(state, mods, decl_start, name_tok, return_type, type_params)
        else:
            self.parse_fields(state, mods, name_tok, return_type)

    def parse_fields(self, state: _ClassState, mods: set[str], name_tok: Token, type_text: str):
        scratch: list[Statement] = []
        names = [name_tok]
        while True:
            while self.at_op("[") and self.at_op("]", 1):
                self.i += 2
            if self.at_op("="):
                self.i += 1
                end = self.find_expr_end(self.i, {",", ";"})
                self.scan_region(self.i, end, 0, state.init_ctx, scratch)
                self.i = end
            if self.at_op(","):
                self.i += 1
                names.append(self.expect_ident())
                continue
            self.expect_op(";")
            break
        vis = _visibility(mods)
        keep = frozenset(mods & _FIELD_MODIFIERS)
        for tok in names:
            state.fields.append(FieldModel(tok.text, type_text, vis, keep, tok.line))

    def parse_params(self, ctx: _BodyContext) -> list[Parameter]:
        self.expect_op("(")
        params: list[Parameter] = []
        if self.at_op(")"):
            self.i += 1
            return params
        while True:
            self.parse_modifiers()
            start = self.i
            end = self.scan_type(start)
            if end is None:
                found = self.tok()
                self.error("expected parameter type" + (f", found {found.text!r}" if found else ""))
            self.mark_type(start, end)
            type_text = self.render(start, end - 1).replace(", ", ",")
            self.i = end
            if self.at_op("..."):
                type_text += "..."
                self.i += 1
            if self.at_kw("this"):
                self.i += 1
                name = "this"
            else:
                name = self.expect_ident().text
            while self.at_op("[") and self.at_op("]", 1):
                type_text += "[]"
                self.i += 2
            params.append(Parameter(name, type_text))
            ctx.locals.add(name)
            if self.at_op(","):
                self.i += 1
                continue
            self.expect_op(")")
            return params

    def parse_method(self, state, mods, decl_start, name_tok, return_type, type_params):
        ctx = _BodyContext()
        params = self.parse_params(ctx)
        while self.at_op("[") and self.at_op("]", 1):
            self.i += 2
        if self.at_kw("throws"):
            self.i += 1
            self.parse_type_list()
        has_body = self.at_op("{")
        roots: list[Statement] = []
        raw = ""
        if has_body:
            open_idx = self.i
            roots = self.parse_block_statements(0, ctx)
            end = self.i - 1
            raw = self.text[self.t[open_idx].start : self.t[end].end]
        else:
            if self.at_kw("default"):
                self.i += 1
                end_expr = self.find_expr_end(self.i, {";"})
                self.scan_region(self.i, end_expr, 0, ctx, [])
                self.i = end_expr
            self.expect_op(";")
            end = self.i - 1
        signature = f"{name_tok.text}({','.join(p.type_name for p in params)})"
        method_mods = set(mods & _METHOD_MODIFIERS)
        if not has_body and "native" not in mods:
            method_mods.add("abstract")
        method = MethodModel(
            name=name_tok.text,
            signature=signature,
            return_type=return_type,
            visibility=_visibility(mods),
            modifiers=frozenset(method_mods),
            parameters=params,
            is_constructor=return_type is None,
            has_body=has_body,
            body=StatementTree(roots),
            invocations=[],
            accessed_field_names=frozenset(),
            source_span=(self.t[decl_start].line, self.t[end].end_line),
            raw_body_text=raw,
            tokens=[tok for tok in self.t[decl_start : end + 1] if not tok.annotation],
            type_params=frozenset(type_params),
        )
        state.method_type_params |= type_params
        state.pending.append((method, ctx))
        state.cls.methods.append(method)

    # ------------------------------------------------------------ finishing
    def finish_class(self, state: _ClassState, close: int):
        cls = state.cls
        cls.fields = state.fields
        cls.initializers = state.initializers
        cls.subclass_count = len(state.nested_spans)
        field_names = {f.name for f in state.fields}
        for method, ctx in state.pending:
            accessed, calls = self.resolve(ctx, field_names)
            method.accessed_field_names = frozenset(accessed)
            method.invocations = calls
            method.local_names = frozenset(ctx.locals)
            method.local_class_count = ctx.local_classes
            method.variable_count = ctx.variables
        _, init_calls = self.resolve(state.init_ctx, field_names)
        cls.initializer_invocations = init_calls
        cls.initializer_variable_count = state.init_ctx.variables
        own: list[Token] = []
        k = state.decl_start
        spans = sorted(state.nested_spans)
        si = 0
        while k <= close:
            if si < len(spans) and k == spans[si][0]:
                k = spans[si][1] + 1
                si += 1
                continue
            tok = self.t[k]
            if not tok.annotation:
                own.append(tok)
            k += 1
        cls.own_tokens = own
        cls.source_span = (self.t[state.decl_start].line, self.t[close].end_line)
        excluded = _NOT_TYPES | {cls.name} | set(cls.type_params) | state.method_type_params
        cls.referenced_type_names = frozenset(
            tok.text for tok in own if tok.role == "type" and tok.text not in excluded
        )

    def resolve(self, ctx: _BodyContext, field_names: set[str]):
        accessed: set[str] = set()
        for k in ctx.name_uses:
            tok = self.t[k]
            name = tok.text
            prev = self.t[k - 1] if k else None
            nxt = self.t[k + 1] if k + 1 < self.n else None
            this_dot = prev is not None and prev.is_op(".") and k >= 2 and self.t[k - 2].is_kw("this")
            if prev is not None and prev.is_op(".") and not this_dot:
                continue
            if name in field_names and (this_dot or name not in ctx.locals):
                accessed.add(name)
                continue
            if (
                not this_dot
                and name[0].isupper()
                and nxt is not None
                and nxt.kind == "op"
                and nxt.text in (".", "::")
                and name not in ctx.locals
                and name not in field_names
            ):
                tok.role = "type"
        calls: list[InvocationRecord] = []
        for name_idx, recv_start, argc in ctx.calls:
            name_tok = self.t[name_idx]
            receiver = None
            is_static = False
            if recv_start is not None:
                dot = name_idx - 1
                while not self.t[dot].is_op("."):
                    dot -= 1
                receiver = self.render(recv_start, dot - 1)
                parts = self.t[recv_start:dot]
                simple = all(p.kind == "ident" or p.is_op(".") for p in parts)
                head = self.t[recv_start]
                if (
                    simple
                    and head.text[0].isupper()
                    and head.text not in ctx.locals
                    and head.text not in field_names
                ):
                    is_static = True
                    head.role = "type"
            calls.append(InvocationRecord(receiver, name_tok.text, argc, name_tok.line, is_static))
        return accessed, calls

    # ------------------------------------------------------------ statements
    def parse_block_statements(self, depth: int, ctx: _BodyContext) -> list[Statement]:
        if not self.at_op("{"):
            self.error("expected '{'")
        close = self.match[self.i]
        self.i += 1
        out: list[Statement] = []
        while self.i < close:
            out.extend(self.parse_statement(depth, ctx))
        if self.i != close:
            self.error("malformed block")
        self.i = close + 1
        return out

    def parse_sub(self, depth: int, ctx: _BodyContext) -> list[Statement]:
        if self.at_op("{"):
            return self.parse_block_statements(depth + 1, ctx)
        return self.parse_statement(depth + 1, ctx)

    def paren_expr(self, depth: int, ctx: _BodyContext, children: list[Statement]):
        if not self.at_op("("):
            self.error("expected '('")
        close = self.match[self.i]
        self.scan_region(self.i + 1, close, depth, ctx, children)
        self.i = close + 1

    def parse_statement(self, depth: int, ctx: _BodyContext) -> list[Statement]:
        tok = self.tok()
        if tok is None:
            self.error("unexpected end of input")
        start = self.i
        if tok.is_op("{"):
            children = self.parse_block_statements(depth + 1, ctx)
            return [self.node("block", start, self.i - 1, depth, children)]
        if tok.is_op(";"):
            self.i += 1
            return []
        if tok.annotation:
            self.skip_annotations()
            return self.parse_statement(depth, ctx)
        if tok.kind == "keyword":
            text = tok.text
            if text == "if":
                return self.parse_if(depth, ctx)
            if text == "for":
                return [self.parse_for(depth, ctx)]
            if text == "while":
                self.i += 1
                extra: list[Statement] = []
                self.paren_expr(depth, ctx, extra)
                children = self.parse_sub(depth, ctx)
                return [self.node("while", start, self.i - 1, depth, extra + children)]
            if text == "do":
                self.i += 1
                children = self.parse_sub(depth, ctx)
                if not self.at_kw("while"):
                    self.error("expected 'while' after do body")
                self.i += 1
                extra = []
                self.paren_expr(depth, ctx, extra)
                self.expect_op(";")
                return [self.node("do", start, self.i - 1, depth, children + extra)]
            if text == "switch":
                return [self.parse_switch(depth, ctx)]
            if text == "try":
                return self.parse_try(depth, ctx)
            if text == "return":
                return [self.simple_statement("return", depth, ctx)]
            if text in ("throw", "break", "continue", "assert"):
                return [self.simple_statement("expression", depth, ctx)]
            if text == "synchronized" and self.at_op("(", 1):
                self.i += 1
                extra = []
                self.paren_expr(depth, ctx, extra)
                children = self.parse_block_statements(depth + 1, ctx)
                return [self.node("block", start, self.i - 1, depth, extra + children)]
            if text in _TYPE_DECL_KW or (text in ("abstract", "final", "static") and self._local_class_ahead()):
                return [self.parse_local_class(depth, ctx)]
        if tok.kind == "ident":
            if self.at_op(":", 1):
                self.i += 2
                return self.parse_statement(depth, ctx)
            if tok.text == "yield" and not (self.at_op("=", 1) or self.at_op("(", 1) or self.at_op(".", 1)):
                return [self.simple_statement("expression", depth, ctx)]
        if self.is_local_decl(self.i):
            extra = []
            self.parse_local_decl(depth, ctx, extra, {",", ";"})
            self.expect_op(";")
            return [self.node("declaration", start, self.i - 1, depth, extra)]
        end = self.find_expr_end(self.i, {";"})
        extra = []
        self.scan_region(self.i, end, depth, ctx, extra)
        kind = "assignment" if self._has_top_level_assignment(self.i, end) else "expression"
        self.i = end + 1
        return [self.node(kind, start, end, depth, extra)]

    def _local_class_ahead(self) -> bool:
        j = self.i
        while j < self.n and self.t[j].kind == "keyword" and self.t[j].text in ("abstract", "final", "static"):
            j += 1
        return j < self.n and self.t[j].kind == "keyword" and self.t[j].text in _TYPE_DECL_KW

    def _has_top_level_assignment(self, a: int, b: int) -> bool:
        depth = 0
        for k in range(a, b):
            tok = self.t[k]
            if tok.kind != "op":
                continue
            if tok.text in ("(", "[", "{"):
                depth += 1
            elif tok.text in (")", "]", "}"):
                depth -= 1
            elif depth == 0 and tok.text in ASSIGNMENT_OPS:
                return True
            elif depth == 0 and tok.text == "->":
                return False
        return False

    def simple_statement(self, kind: str, depth: int, ctx: _BodyContext) -> Statement:
        start = self.i
        self.i += 1
        end = self.find_expr_end(self.i, {";"})
        extra: list[Statement] = []
        self.scan_region(self.i, end, depth, ctx, extra)
        self.i = end + 1
        return self.node(kind, start, end, depth, extra)

    def parse_if(self, depth: int, ctx: _BodyContext) -> list[Statement]:
        start = self.i
        self.i += 1
        extra: list[Statement] = []
        self.paren_expr(depth, ctx, extra)
        children = self.parse_sub(depth, ctx)
        out = [self.node("if", start, self.i - 1, depth, extra + children)]
        if self.at_kw("else"):
            else_start = self.i
            self.i += 1
            if self.at_kw("if"):
                out.append(self.node("else-branch", else_start, else_start, depth))
                out.extend(self.parse_if(depth, ctx))
            else:
                children = self.parse_sub(depth, ctx)
                out.append(self.node("else-branch", else_start, self.i - 1, depth, children))
        return out

    def parse_for(self, depth: int, ctx: _BodyContext) -> Statement:
        start = self.i
        self.i += 1
        if not self.at_op("("):
            self.error("expected '(' after for")
        open_idx = self.i
        close = self.match[open_idx]
        classic = False
        level = 0
        for k in range(open_idx + 1, close):
            tok = self.t[k]
            if tok.kind != "op":
                continue
            if tok.text in ("(", "[", "{"):
                level += 1
            elif tok.text in (")", "]", "}"):
                level -= 1
            elif tok.text == ";" and level == 0:
                classic = True
                break
        extra: list[Statement] = []
        self.i = open_idx + 1
        if classic:
            if not self.at_op(";"):
                if self.is_local_decl(self.i):
                    self.parse_local_decl(depth, ctx, extra, {",", ";"})
                else:
                    end = self.find_expr_end(self.i, {";"})
                    self.scan_region(self.i, end, depth, ctx, extra)
                    self.i = end
            self.expect_op(";")
            end = self.find_expr_end(self.i, {";"})
            self.scan_region(self.i, end, depth, ctx, extra)
            self.i = end
            self.expect_op(";")
            self.scan_region(self.i, close, depth, ctx, extra)
        else:
            self.parse_modifiers()
            self.parse_type()
            name = self.expect_ident()
            ctx.locals.add(name.text)
            ctx.variables += 1
            self.expect_op(":")
            self.scan_region(self.i, close, depth, ctx, extra)
        self.i = close + 1
        children = self.parse_sub(depth, ctx)
        return self.node("for", start, self.i - 1, depth, extra + children)

    def parse_switch(self, depth: int, ctx: _BodyContext) -> Statement:
        start = self.i
        self.i += 1
        children: list[Statement] = []
        self.paren_expr(depth, ctx, children)
        if not self.at_op("{"):
            self.error("expected '{' after switch")
        close = self.match[self.i]
        self.i += 1
        while self.i < close:
            if self.at_kw("case") or (self.at_kw("default") and (self.at_op(":", 1) or self.at_op("->", 1))):
                is_case = self.at_kw("case")
                self.i += 1
                if is_case:
                    end = self.find_expr_end(self.i, {":", "->"}, stop_at=close)
                    self.scan_region(self.i, end, depth + 1, ctx, children)
                    self.i = end
                if self.at_op("->"):
                    self.i += 1
                    if self.at_op("{"):
                        body_start = self.i
                        inner = self.parse_block_statements(depth + 2, ctx)
                        children.append(self.node("block", body_start, self.i - 1, depth + 1, inner))
                    else:
                        children.extend(self.parse_statement(depth + 1, ctx))
                else:
                    self.expect_op(":")
                continue
            children.extend(self.parse_statement(depth + 1, ctx))
        self.i = close + 1
        return self.node("switch-case", start, close, depth, children)

    def parse_try(self, depth: int, ctx: _BodyContext) -> list[Statement]:
        start = self.i
        self.i += 1
        extra: list[Statement] = []
        if self.at_op("("):
            close = self.match[self.i]
            self.i += 1
            while self.i < close:
                if self.at_op(";"):
                    self.i += 1
                    continue
                if self.is_local_decl(self.i):
                    self.parse_local_decl(depth, ctx, extra, {";"}, stop_at=close)
                else:
                    end = self.find_expr_end(self.i, {";"}, stop_at=close)
                    self.scan_region(self.i, end, depth, ctx, extra)
                    self.i = end
            self.i = close + 1
        children = self.parse_block_statements(depth + 1, ctx)
        out = [self.node("try", start, self.i - 1, depth, extra + children)]
        while self.at_kw("catch"):
            cstart = self.i
            self.i += 1
            if not self.at_op("("):
                self.error("expected '(' after catch")
            close = self.match[self.i]
            self.i += 1
            self.parse_modifiers()
            self.parse_type()
            while self.at_op("|"):
                self.i += 1
                self.parse_type()
            ctx.locals.add(self.expect_ident().text)
            if self.i != close:
                self.error("malformed catch clause")
            self.i = close + 1
            children = self.parse_block_statements(depth + 1, ctx)
            out.append(self.node("catch", cstart, self.i - 1, depth, children))
        if self.at_kw("finally"):
            fstart = self.i
            self.i += 1
            children = self.parse_block_statements(depth + 1, ctx)
            out.append(self.node("finally", fstart, self.i - 1, depth, children))
        if len(out) == 1 and not extra:
            self.error("try without catch or finally", self.t[start])
        return out

    def parse_local_class(self, depth: int, ctx: _BodyContext) -> Statement:
        start = self.i
        self.parse_modifiers()
        is_enum = self.at_kw("enum")
        self.i += 1
        self.expect_ident()
        if self.tok() is not None and self.tok().generic and self.at_op("<"):
            self.parse_type_params()
        while self.at_kw("extends") or self.at_kw("implements"):
            self.i += 1
            self.parse_type_list()
        if not self.at_op("{"):
            self.error("expected '{' to open the local class body")
        open_idx = self.i
        close = self.match[open_idx]
        body_from = open_idx
        if is_enum:
            body_from = self.find_expr_end(open_idx + 1, {";"}, stop_at=close)
            if body_from >= close:
                body_from = close - 1
        children = self.parse_anonymous_members(body_from, close, depth, ctx)
        ctx.local_classes += 1
        self.i = close + 1
        return self.node("declaration", start, close, depth, children)

    def parse_anonymous_members(self, open_idx: int, close: int, depth: int, ctx: _BodyContext) -> list[Statement]:
        """Members of an anonymous/local class body; statements land at depth + 1."""
        saved = self.i
        self.i = open_idx + 1
        children: list[Statement] = []
        while self.i < close:
            if self.at_op(";"):
                self.i += 1
                continue
            if self.at_op("{") or (self.at_kw("static") and self.at_op("{", 1)):
                if self.at_kw("static"):
                    self.i += 1
                children.extend(self.parse_block_statements(depth + 1, ctx))
                continue
            self.parse_modifiers()
            if self.at_type_decl():
                children.append(self.parse_local_class(depth + 1, ctx))
                continue
            tok = self.tok()
            if tok is not None and tok.generic and tok.text == "<":
                self.parse_type_params()
            if self.tok().kind == "ident" and self.at_op("(", 1):
                self.i += 1
            else:
                self.parse_type()
                self.expect_ident()
            if self.at_op("("):
                self.parse_params(ctx)
                if self.at_kw("throws"):
                    self.i += 1
                    self.parse_type_list()
                if self.at_op("{"):
                    children.extend(self.parse_block_statements(depth + 1, ctx))
                else:
                    self.expect_op(";")
                continue
            while True:
                while self.at_op("[") and self.at_op("]", 1):
                    self.i += 2
                if self.at_op("="):
                    self.i += 1
                    end = self.find_expr_end(self.i, {",", ";"})
                    self.scan_region(self.i, end, depth, ctx, children)
                    self.i = end
                if self.at_op(","):
                    self.i += 1
                    self.expect_ident()
                    continue
                self.expect_op(";")
                break
        self.i = saved
        return children

    def is_local_decl(self, j: int) -> bool:
        while j < self.n and (self.t[j].annotation or self.t[j].is_kw("final")):
            j += 1
        if j >= self.n:
            return False
        first = self.t[j]
        if first.kind == "keyword" and first.text not in PRIMITIVES:
            return False
        end = self.scan_type(j)
        if end is None or end + 1 >= self.n:
            return False
        if self.t[end].kind != "ident":
            return False
        after = self.t[end + 1]
        return after.kind == "op" and after.text in ("=", ";", ",", "[", ":")

    def parse_local_decl(self, depth, ctx, extra, stops, stop_at=None):
        self.parse_modifiers()
        self.parse_type()
        while True:
            name = self.expect_ident()
            ctx.locals.add(name.text)
            ctx.variables += 1
            while self.at_op("[") and self.at_op("]", 1):
                self.i += 2
            if self.at_op("="):
                self.i += 1
                end = self.find_expr_end(self.i, stops, stop_at=stop_at)
                self.scan_region(self.i, end, depth, ctx, extra)
                self.i = end
            if self.at_op(",") and "," in stops:
                self.i += 1
                continue
            return

    # ----------------------------------------------------------- expressions
    def find_expr_end(self, j: int, stops: set[str], stop_at: int | None = None) -> int:
        """First index at bracket depth 0 holding one of ``stops``."""
        limit = self.n if stop_at is None else stop_at
        while j < limit:
            tok = self.t[j]
            if tok.kind == "op":
                if tok.text in stops:
                    return j
                if tok.text in ("(", "[", "{"):
                    j = self.match[j] + 1
                    continue
                if tok.text in (")", "]", "}"):
                    if stop_at is not None:
                        return j
                    self.error(f"unexpected {tok.text!r}", tok)
            j += 1
        if stop_at is not None:
            return stop_at
        self.error("unexpected end of input in expression")

    def _lambda_expr_end(self, j: int, b: int) -> int:
        while j < b:
            tok = self.t[j]
            if tok.kind == "op":
                if tok.text in ("(", "[", "{"):
                    j = self.match[j] + 1
                    continue
                if tok.text in (",", ";", ")", "]", "}"):
                    return j
            j += 1
        return b

    def _receiver_start(self, name_idx: int, a: int) -> int | None:
        j = name_idx - 1
        if j >= a and self.t[j].generic and self.t[j].text == ">":
            depth = 0
            while j >= a:
                cur = self.t[j]
                if cur.generic and cur.text == ">":
                    depth += 1
                elif cur.generic and cur.text == "<":
                    depth -= 1
                    if depth == 0:
                        break
                j -= 1
            j -= 1
        if j < a or not self.t[j].is_op("."):
            return None
        j -= 1
        while j >= a:
            tok = self.t[j]
            if tok.is_op(")") or tok.is_op("]"):
                j = self.match[j]
                if j - 1 >= a and (self.t[j - 1].kind == "ident" or self.t[j - 1].text in ("this", "super")):
                    j -= 1
                elif self.t[j].text == "[" and j - 1 >= a:
                    j -= 1
                    continue
            elif tok.kind in ("ident", "string", "number", "char") or tok.text in ("this", "super"):
                pass
            else:
                return j + 1
            if j - 1 >= a and self.t[j - 1].is_kw("new"):
                return j - 1
            if j - 1 >= a and self.t[j - 1].is_op("."):
                j -= 2
                continue
            return j
        return a

    def _arg_count(self, open_idx: int) -> int:
        close = self.match[open_idx]
        if close == open_idx + 1:
            return 0
        count = 1
        j = open_idx + 1
        while j < close:
            tok = self.t[j]
            if tok.kind == "op" and tok.text in ("(", "[", "{"):
                j = self.match[j] + 1
                continue
            if tok.is_op(","):
                count += 1
            j += 1
        return count

    def scan_region(self, a: int, b: int, depth: int, ctx: _BodyContext, children: list[Statement]):
        k = a
        while k < b:
            tok = self.t[k]
            if tok.annotation:
                k += 1
                continue
            kind = tok.kind
            if kind == "keyword":
                if tok.text == "new":
                    k = self.scan_new(k, b, depth, ctx, children)
                    continue
                if tok.text == "instanceof":
                    j = k + 1
                    while j < b and self.t[j].is_kw("final"):
                        j += 1
                    end = self.scan_type(j)
                    if end is not None:
                        self.mark_type(j, end)
                        if end < b and self.t[end].kind == "ident":
                            ctx.locals.add(self.t[end].text)
                            end += 1
                        k = end
                        continue
                if tok.text == "switch" and k + 1 < b and self.t[k + 1].is_op("("):
                    saved = self.i
                    self.i = k
                    children.append(self.parse_switch(depth + 1, ctx))
                    k = self.i
                    self.i = saved
                    continue
                k += 1
                continue
            if kind == "op":
                text = tok.text
                if text == "->":
                    k = self.scan_lambda(k, b, depth, ctx, children)
                    continue
                if text == "{":
                    close = self.match[k]
                    self.scan_region(k + 1, close, depth, ctx, children)
                    k = close + 1
                    continue
                if text == "(" and tok.paren == "cast":
                    close = self.match[k]
                    self.mark_type(k + 1, close)
                    k = close + 1
                    continue
                k += 1
                continue
            if kind == "ident":
                if tok.generic:
                    self.mark_type(k, k + 1)
                    k += 1
                    continue
                nxt = self.t[k + 1] if k + 1 < self.n else None
                if nxt is not None and nxt.is_op("(") and nxt.paren == "call":
                    prev = self.t[k - 1] if k else None
                    if not (prev is not None and prev.is_op("::")):
                        ctx.calls.append((k, self._receiver_start(k, a), self._arg_count(k + 1)))
                    k += 1
                    continue
                if not (k and self.t[k - 1].is_op("::")):
                    ctx.name_uses.append(k)
            k += 1

    def scan_lambda(self, k: int, b: int, depth: int, ctx: _BodyContext, children: list[Statement]) -> int:
        self.t[k].role = "lambda"
        prev = self.t[k - 1]
        if prev.is_op(")"):
            lam_start = self.match[k - 1]
            for j in range(lam_start + 1, k - 1):
                if self.t[j].kind == "ident":
                    ctx.locals.add(self.t[j].text)
        else:
            lam_start = k - 1
            ctx.locals.add(prev.text)
        if k + 1 < self.n and self.t[k + 1].is_op("{"):
            saved = self.i
            self.i = k + 1
            inner = self.parse_block_statements(depth + 2, ctx)
            end = self.i - 1
            self.i = saved
            children.append(self.node("lambda-body", lam_start, end, depth + 1, inner))
            return end + 1
        end = self._lambda_expr_end(k + 1, b)
        inner: list[Statement] = []
        self.scan_region(k + 1, end, depth + 1, ctx, inner)
        children.append(self.node("lambda-body", lam_start, end - 1, depth + 1, inner))
        return end

    def scan_new(self, k: int, b: int, depth: int, ctx: _BodyContext, children: list[Statement]) -> int:
        j = k + 1
        while j < b and self.t[j].annotation:
            j += 1
        tok = self.t[j] if j < self.n else None
        if tok is None:
            self.error("malformed object creation", self.t[k])
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            end = j + 1
        elif tok.kind == "ident":
            end = j + 1
            while end < self.n:
                cur = self.t[end]
                if cur.generic and cur.text == "<":
                    end = self._skip_generic(end)
                elif cur.is_op(".") and end + 1 < self.n and self.t[end + 1].kind == "ident":
                    end += 2
                else:
                    break
        else:
            self.error("malformed object creation", tok)
        self.mark_type(j, end)
        j = end
        if j < self.n and self.t[j].is_op("["):
            while j < self.n and self.t[j].is_op("["):
                close = self.match[j]
                self.scan_region(j + 1, close, depth, ctx, children)
                j = close + 1
            if j < self.n and self.t[j].is_op("{"):
                close = self.match[j]
                self.scan_region(j + 1, close, depth, ctx, children)
                j = close + 1
            return j
        if j < self.n and self.t[j].is_op("("):
            close = self.match[j]
            self.scan_region(j + 1, close, depth, ctx, children)
            j = close + 1
            if j < self.n and self.t[j].is_op("{"):
                body_close = self.match[j]
                self.t[j].role = "anonymous"
                inner = self.parse_anonymous_members(j, body_close, depth + 1, ctx)
                children.append(self.node("anonymous-class-body", j, body_close, depth + 1, inner))
                j = body_close + 1
            return j
        self.error("malformed object creation", self.t[j] if j < self.n else None)


def parse_compilation_unit(source, path: str = "<unknown>") -> CodeModel:
    """Parse Java source (str or UTF-8 bytes) into a :class:`CodeModel`."""
    text = decode_source(source)
    return _Parser(text, path).parse_unit()
