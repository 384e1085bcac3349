"""Tokenizer for the supported Java subset.

Besides splitting the text into tokens, the lexer runs three context passes
that later stages rely on:

* annotation usages (``@Foo(...)``) are flagged so every metric can skip them,
* ``<`` / ``>`` pairs that delimit type arguments are flagged ``generic``
  (``>>`` closing nested arguments is split into single tokens),
* every ``(`` gets a ``paren`` role: call, control, cast, lambda or expr.
"""
from __future__ import annotations

import re

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized this
    throw throws transient try void volatile while true false null""".split()
)

PRIMITIVES = frozenset("boolean byte char short int long float double".split())

MODIFIERS = frozenset(
    "public private protected static final abstract synchronized native "
    "transient volatile strictfp default".split()
)

_OPERATORS = sorted(
    """>>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |= ^=
    << >> ( ) { } [ ] ; , . @ = > < ! ~ ? : + - * / & | ^ %""".split(),
    key=len,
    reverse=True,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\f\r\n]+)
  | (?P<lcomment>//[^\n]*)
  | (?P<bcomment>/\*.*?\*/)
  | (?P<textblock>\"\"\"[ \t\f]*\n(?:[^\\]|\\.)*?\"\"\")
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<number>
        0[xX][0-9a-fA-F_]+[lL]?
      | 0[bB][01_]+[lL]?
      | (?:[0-9][0-9_]*\.?[0-9_]*|\.[0-9][0-9_]*)(?:[eE][+-]?[0-9]+)?[fFdDlL]?
    )
  | (?P<ident>(?:[^\W\d]|\$)[\w$]*)
  | (?P<op>"""
    + "|".join(re.escape(op) for op in _OPERATORS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)

_UNTERMINATED = {
    '"""': "unterminated text block",
    '"': "unterminated string literal",
    "'": "unterminated character literal",
    "/*": "unterminated comment",
}


class JavaSyntaxError(SyntaxError):
    """Source outside the supported Java subset, with 1-based line/column."""

    def __init__(self, message: str, line: int, column: int, path: str = "<unknown>"):
        super().__init__(f"{path}:{line}:{column}: {message}", (path, line, column, None))
        self.message = message
        self.line = line
        self.column = column
        self.path = path


class EncodingError(ValueError):
    """Source bytes are not valid UTF-8."""


class Token:
    __slots__ = (
        "kind", "text", "line", "col", "end_line", "start", "end",
        "annotation", "generic", "paren", "role",
    )

    def __init__(self, kind, text, line, col, end_line, start, end):
        self.kind = kind  # ident | keyword | number | string | char | op
        self.text = text
        self.line = line
        self.col = col
        self.end_line = end_line
        self.start = start
        self.end = end
        self.annotation = False
        self.generic = False
        self.paren = None
        self.role = None  # "type" when the parser consumed it as a type name

    def is_op(self, text: str) -> bool:
        return self.kind == "op" and self.text == text

    def is_kw(self, text: str) -> bool:
        return self.kind == "keyword" and self.text == text

    @property
    def is_word(self) -> bool:
        return self.kind in ("ident", "keyword", "number")

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def decode_source(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        try:
            return bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"invalid UTF-8 at byte {exc.start}") from exc
    return source


def tokenize(text: str, path: str = "<unknown>") -> list[Token]:
    """Split ``text`` into tokens and run the context passes."""
    tokens = _scan(text, path)
    tokens = mark_annotations(tokens)
    tokens = mark_type_arguments(tokens)
    classify_parens(tokens)
    return tokens


def _scan(text: str, path: str) -> list[Token]:
    if text.startswith("﻿"):
        text = " " + text[1:]
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            col = pos - line_start + 1
            for opener, message in _UNTERMINATED.items():
                if text.startswith(opener, pos):
                    raise JavaSyntaxError(message, line, col, path)
            raise JavaSyntaxError(f"unexpected character {text[pos]!r}", line, col, path)
        kind = m.lastgroup
        value = m.group()
        newlines = value.count("\n")
        end_line = line + newlines
        if kind not in ("ws", "lcomment", "bcomment"):
            if kind == "textblock":
                kind = "string"
            elif kind == "ident" and value in KEYWORDS:
                kind = "keyword"
            tokens.append(Token(kind, value, line, pos - line_start + 1, end_line, pos, m.end()))
        if newlines:
            line = end_line
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    return tokens


def code_lines(tokens: list[Token]) -> frozenset[int]:
    """Lines holding at least one token (blank and comment-only lines excluded)."""
    lines: set[int] = set()
    for tok in tokens:
        lines.update(range(tok.line, tok.end_line + 1))
    return frozenset(lines)


def matching_index(tokens: list[Token], i: int) -> int:
    """Index of the bracket closing ``tokens[i]`` (one of ( [ {)."""
    pairs = {"(": ")", "[": "]", "{": "}"}
    open_text = tokens[i].text
    close_text = pairs[open_text]
    depth = 0
    for j in range(i, len(tokens)):
        tok = tokens[j]
        if tok.kind != "op":
            continue
        if tok.text == open_text:
            depth += 1
        elif tok.text == close_text:
            depth -= 1
            if depth == 0:
                return j
    tok = tokens[i]
    raise JavaSyntaxError(f"unbalanced {open_text!r}", tok.line, tok.col)


def mark_annotations(tokens: list[Token]) -> list[Token]:
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.is_op("@") and i + 1 < n and tokens[i + 1].kind == "ident":
            j = i + 1
            while j + 2 < n and tokens[j + 1].is_op(".") and tokens[j + 2].kind == "ident":
                j += 2
            if j + 1 < n and tokens[j + 1].is_op("("):
                j = matching_index(tokens, j + 1)
            for k in range(i, j + 1):
                tokens[k].annotation = True
            i = j + 1
        else:
            i += 1
    return tokens


_GENERIC_OPENER_PREV = MODIFIERS | {"{", "}", ";", "."}
_GENERIC_INNER_KW = PRIMITIVES | {"extends", "super"}


def _opens_type_args(prev: Token | None) -> bool:
    if prev is None:
        return False
    if prev.kind == "ident":
        return prev.text[0].isupper()
    if prev.kind == "keyword":
        return prev.text in MODIFIERS
    return prev.kind == "op" and prev.text in _GENERIC_OPENER_PREV


def _split_closer(tok: Token) -> list[Token]:
    parts = []
    for k in range(len(tok.text)):
        part = Token("op", ">", tok.line, tok.col + k, tok.line, tok.start + k, tok.start + k + 1)
        parts.append(part)
    return parts


def _match_type_args(tokens: list[Token], i: int) -> tuple[int, int] | None:
    """Return (closing index, surplus '>' count) if tokens[i] opens type args."""
    depth = 0
    for j in range(i, len(tokens)):
        tok = tokens[j]
        if tok.annotation:
            continue
        if tok.kind == "op":
            if tok.text == "<":
                depth += 1
                continue
            if tok.text in (">", ">>", ">>>"):
                depth -= len(tok.text)
                if depth <= 0:
                    return j, -depth
                continue
            if tok.text in (".", ",", "?", "&", "[", "]"):
                continue
            return None
        if tok.kind == "ident" or (tok.kind == "keyword" and tok.text in _GENERIC_INNER_KW):
            continue
        return None
    return None


def mark_type_arguments(tokens: list[Token]) -> list[Token]:
    out: list[Token] = []
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.is_op("<") and not tok.annotation and _opens_type_args(out[-1] if out else None):
            found = _match_type_args(tokens, i)
            if found is not None:
                close, surplus = found
                for j in range(i, close + 1):
                    cur = tokens[j]
                    if cur.kind == "op" and cur.text in (">>", ">>>"):
                        parts = _split_closer(cur)
                        keep = len(parts) - (surplus if j == close else 0)
                        for k, part in enumerate(parts):
                            part.generic = k < keep
                            out.append(part)
                    else:
                        cur.generic = True
                        out.append(cur)
                i = close + 1
                continue
        out.append(tok)
        i += 1
    return out


_CONTROL_KW = frozenset("if while for switch catch synchronized try".split())
_OPERAND_START_KW = frozenset("this super new true false null".split())


def _type_span_end(tokens: list[Token], i: int, stop: int) -> int | None:
    """If tokens[i:stop] is exactly a type (primitive or reference), return stop."""
    j = i
    if j >= stop:
        return None
    tok = tokens[j]
    if tok.kind == "keyword" and tok.text in PRIMITIVES:
        j += 1
    elif tok.kind == "ident":
        j += 1
        while j < stop:
            cur = tokens[j]
            if cur.generic:
                j += 1
            elif cur.is_op(".") and j + 1 < stop and tokens[j + 1].kind == "ident":
                j += 2
            elif cur.is_op("&") and j + 1 < stop and tokens[j + 1].kind == "ident":
                j += 2
            else:
                break
    else:
        return None
    while j + 1 < stop and tokens[j].is_op("[") and tokens[j + 1].is_op("]"):
        j += 2
    return stop if j == stop else None


def classify_parens(tokens: list[Token]) -> None:
    n = len(tokens)
    for i, tok in enumerate(tokens):
        if not tok.is_op("(") or tok.annotation:
            continue
        prev = tokens[i - 1] if i else None
        if prev is not None and (
            prev.kind == "ident"
            or (prev.kind == "keyword" and prev.text in ("this", "super"))
            or (prev.generic and prev.text == ">")
        ):
            tok.paren = "call"
            continue
        if prev is not None and prev.kind == "keyword" and prev.text in _CONTROL_KW:
            tok.paren = "control"
            continue
        close = matching_index(tokens, i)
        after = tokens[close + 1] if close + 1 < n else None
        if after is not None and after.is_op("->"):
            tok.paren = "lambda"
            continue
        if after is not None and _type_span_end(tokens, i + 1, close) is not None:
            primitive = tokens[i + 1].kind == "keyword" and tokens[i + 1].text in PRIMITIVES
            if (
                after.kind in ("ident", "number", "string", "char")
                or (after.kind == "keyword" and (after.text in _OPERAND_START_KW or after.text in PRIMITIVES))
                or (after.kind == "op" and after.text in ("(", "!", "~"))
                or (primitive and after.kind == "op" and after.text in ("+", "-", "++", "--"))
            ):
                tok.paren = "cast"
                continue
        tok.paren = "expr"
