"""Second counting script for the fixture corpus.

Works on a flat token stream with its own tokenizer and never builds a
statement tree. It relies on two layout conventions that every fixture in
tests/fixtures/java follows:

* comparison ``<``/``>`` and ternary ``?`` are written with a space on both
  sides, type-argument brackets never are;
* every control-flow body is a braced block.

Run as a script to print the oracle's view of a file:

    python3 tests/oracle/token_oracle.py tests/fixtures/java/Report.java
"""
from __future__ import annotations

import json
import re
import sys
from itertools import combinations

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<char>'(?:\\.|[^'\\])+')
  | (?P<number>\d[\d_]*(?:\.\d+)?[lLfFdD]?)
  | (?P<word>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<op>\.\.\.|>>>=|<<=|>>=|->|::|\+\+|--|&&|\|\||==|!=|<=|>=|\+=|-=|\*=|/=|%=|&=|\|=|\^=|[-+*/%=<>!~?:;,.(){}\[\]@&|^])
    """,
    re.VERBOSE | re.DOTALL,
)

KEYWORDS = set(
    """abstract assert boolean break byte case catch char class continue default
    do double else enum extends final finally float for if implements import
    instanceof int interface long native new package private protected public
    return short static super switch synchronized this throw throws transient
    try void volatile while true false null""".split()
)
PRIMITIVES = {"boolean", "byte", "char", "short", "int", "long", "float", "double"}
MODIFIER_WORDS = {
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "native", "transient", "volatile", "default",
}
ASSIGN = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
MATH = {"+", "-", "*", "/", "%", "++", "--"}
CALL_PREV_KW = {"if", "while", "for", "switch", "catch", "synchronized", "try"}


class Tok:
    def __init__(self, kind, text, line, spaced_before):
        self.kind = kind
        self.text = text
        self.line = line
        self.spaced_before = spaced_before
        self.spaced_after = False

    def __repr__(self):
        return f"{self.text}@{self.line}"


def lex(source: str) -> list[Tok]:
    out: list[Tok] = []
    pos, line, gap = 0, 1, True
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ValueError(f"oracle cannot scan line {line}")
        kind, text = m.lastgroup, m.group()
        if kind in ("ws", "comment"):
            gap = True
        else:
            if kind == "word":
                kind = "kw" if text in KEYWORDS else "ident"
            if out:
                out[-1].spaced_after = gap
            out.append(Tok(kind, text, line, gap))
            gap = False
        line += text.count("\n")
        pos = m.end()
    if out:
        out[-1].spaced_after = True
    return _drop_annotations(out)


def _close(toks, i, open_="(", close=")"):
    depth = 0
    for j in range(i, len(toks)):
        if toks[j].text == open_ and toks[j].kind == "op":
            depth += 1
        elif toks[j].text == close and toks[j].kind == "op":
            depth -= 1
            if depth == 0:
                return j
    raise ValueError("unbalanced")


def _drop_annotations(toks):
    keep = []
    i = 0
    while i < len(toks):
        if toks[i].text == "@" and i + 1 < len(toks) and toks[i + 1].text != "interface":
            j = i + 1
            while j + 2 < len(toks) and toks[j + 1].text == "." and toks[j + 2].kind == "ident":
                j += 2
            if j + 1 < len(toks) and toks[j + 1].text == "(":
                j = _close(toks, j + 1)
            i = j + 1
            continue
        keep.append(toks[i])
        i += 1
    return keep


def is_cmp_angle(tok: Tok) -> bool:
    return tok.spaced_before and tok.spaced_after


# ---------------------------------------------------------------- structure


class Member:
    def __init__(self):
        self.kind = ""
        self.start = 0
        self.end = 0
        self.mods: set[str] = set()
        self.name = ""
        self.params: list[tuple[str, str]] = []
        self.has_body = False
        self.body_open = None
        self.field_names: list[str] = []
        self.constructor = False


class TypeDecl:
    def __init__(self, name, start, open_, close, kind, inner):
        self.name = name
        self.start = start
        self.open = open_
        self.close = close
        self.kind = kind
        self.inner = inner
        self.members: list[Member] = []
        self.nested: list[TypeDecl] = []
        self.initializers: list[tuple[int, int]] = []
        self.field_inits: list[tuple[int, int]] = []
        self.type_params: set[str] = set()


def _split_params(toks, a, b):
    """Parameters between toks[a] == '(' and toks[b] == ')'."""
    params = []
    cur = []
    angle = 0
    for t in toks[a + 1 : b]:
        if t.text == "<":
            angle += 1
        elif t.text == ">":
            angle -= 1
        elif t.text == ">>":
            angle -= 2
        if t.text == "," and angle == 0:
            params.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        params.append(cur)
    out = []
    for p in params:
        p = [t for t in p if t.text != "final"]
        text = re.sub(r" ?([<>,\[\].]) ?", r"\1", " ".join(t.text for t in p[:-1]))
        out.append((text, p[-1].text))
    return out


def parse_types(toks) -> list[TypeDecl]:
    found: list[TypeDecl] = []

    def type_at(i, inner):
        # i points at class/interface/enum keyword
        start = i
        while start > 0 and toks[start - 1].kind == "kw" and toks[start - 1].text in MODIFIER_WORDS:
            start -= 1
        name = toks[i + 1].text
        j = i + 2
        params = set()
        if toks[j].text == "<":
            k = j
            depth = 0
            while True:
                if toks[k].text == "<":
                    depth += 1
                elif toks[k].text == ">":
                    depth -= 1
                if toks[k].kind == "ident" and toks[k - 1].text in ("<", ","):
                    params.add(toks[k].text)
                if depth == 0:
                    break
                k += 1
        while toks[j].text != "{":
            j += 1
        close = _close(toks, j, "{", "}")
        decl = TypeDecl(name, start, j, close, toks[i].text, inner)
        decl.type_params = params
        found.append(decl)
        members_of(decl)
        return decl

    def members_of(decl: TypeDecl):
        i = decl.open + 1
        if decl.kind == "enum":
            while toks[i].text not in (";", "}"):
                i += 1
            if toks[i].text == ";":
                i += 1
        while i < decl.close:
            t = toks[i]
            if t.text == ";":
                i += 1
                continue
            if t.text == "{" or (t.text == "static" and toks[i + 1].text == "{"):
                o = i if t.text == "{" else i + 1
                c = _close(toks, o, "{", "}")
                decl.initializers.append((o, c))
                i = c + 1
                continue
            start = i
            mods = set()
            while toks[i].kind == "kw" and toks[i].text in MODIFIER_WORDS:
                mods.add(toks[i].text)
                i += 1
            if toks[i].text in ("class", "interface", "enum"):
                nested = type_at(i, True)
                decl.nested.append(nested)
                i = nested.close + 1
                continue
            if toks[i].text == "<":
                i = _skip_angle(toks, i)
            # first of '(' '=' ';' at top level decides method vs field
            j = i
            angle = 0
            while True:
                x = toks[j].text
                if x == "<":
                    angle += 1
                elif x == ">":
                    angle -= 1
                elif x == ">>":
                    angle -= 2
                elif angle == 0 and x in ("(", "=", ";", ","):
                    break
                j += 1
            m = Member()
            m.start = start
            m.mods = mods
            if toks[j].text == "(":
                m.kind = "method"
                m.name = toks[j - 1].text
                pc = _close(toks, j)
                m.params = _split_params(toks, j, pc)
                k = pc + 1
                while toks[k].text not in ("{", ";"):
                    k += 1
                if toks[k].text == "{":
                    m.has_body = True
                    m.body_open = k
                    m.end = _close(toks, k, "{", "}")
                else:
                    m.end = k
                m.constructor = m.name == decl.name
            else:
                m.kind = "field"
                k = j
                names = [toks[j - 1].text]
                depth = 0
                while True:
                    x = toks[k].text
                    if x in ("(", "{", "["):
                        depth += 1
                    elif x in (")", "}", "]"):
                        depth -= 1
                    elif depth == 0 and x == ",":
                        names.append(toks[k + 1].text)
                    elif depth == 0 and x == ";":
                        break
                    k += 1
                m.end = k
                m.field_names = names
                eq = j if toks[j].text == "=" else None
                if eq is not None:
                    decl.field_inits.append((eq, k))
            decl.members.append(m)
            i = m.end + 1

    i = 0
    while i < len(toks):
        if toks[i].text in ("class", "interface", "enum") and (i == 0 or toks[i - 1].text != "."):
            top = type_at(i, False)
            i = top.close + 1
        else:
            i += 1
    return found


def _skip_angle(toks, i):
    depth = 0
    while True:
        if toks[i].text == "<":
            depth += 1
        elif toks[i].text == ">":
            depth -= 1
        i += 1
        if depth == 0:
            return i


# ------------------------------------------------------------------ counting


def _do_tails(toks, a, b):
    """Indices of `while` keywords closing a do-while loop."""
    tails = set()
    for i in range(a, b):
        if toks[i].text == "do" and toks[i + 1].text == "{":
            c = _close(toks, i + 1, "{", "}")
            tails.add(c + 1)
    return tails


def _paren_kind(toks, i):
    prev = toks[i - 1]
    if prev.kind == "ident" or prev.text in ("this", "super") or (prev.text == ">" and not is_cmp_angle(prev)):
        return "call"
    if prev.text in CALL_PREV_KW:
        return "control"
    c = _close(toks, i)
    after = toks[c + 1]
    if after.text == "->":
        return "lambda"
    inner = toks[i + 1 : c]
    words = [t for t in inner if t.text not in ("[", "]", ".")]
    if len(words) == 1 and (words[0].kind == "ident" or words[0].text in PRIMITIVES):
        if after.kind in ("ident", "number", "string", "char") or after.text in ("(", "this", "new", "!"):
            return "cast"
    return "expr"


def _anonymous_opens(toks, a, b):
    opens = set()
    for i in range(a, b):
        if toks[i].text == "new":
            j = i + 1
            while toks[j].text != "(" and toks[j].text != "[":
                j += 1
            if toks[j].text == "(":
                c = _close(toks, j)
                if toks[c + 1].text == "{":
                    opens.add(c + 1)
    return opens


def _declared_locals(toks, a, b):
    """Names of local variables declared in toks[a:b] plus how many."""
    names = []
    starts = {a}
    for i in range(a, b):
        if toks[i].text in ("{", ";", "}"):
            starts.add(i + 1)
        if toks[i].text == "(" and toks[i - 1].text in ("for", "try"):
            starts.add(i + 1)
    for s in sorted(starts):
        if s >= b:
            continue
        t = toks[s]
        if t.kind == "kw" and t.text == "final":
            s += 1
            t = toks[s]
        if not (t.kind == "ident" or t.text in PRIMITIVES):
            continue
        # Type: ident(.ident)*(<...>)?([])*
        j = s + 1
        while toks[j].text == "." and toks[j + 1].kind == "ident":
            j += 2
        if toks[j].text == "<" and not is_cmp_angle(toks[j]):
            depth = 0
            while True:
                x = toks[j].text
                depth += {"<": 1, ">": -1, ">>": -2}.get(x, 0)
                j += 1
                if depth <= 0:
                    break
        while toks[j].text == "[" and toks[j + 1].text == "]":
            j += 2
        if toks[j].kind != "ident" or toks[j + 1].text not in ("=", ";", ":", ","):
            continue
        names.append(toks[j].text)
        # further declarators separated by top-level commas
        k = j + 1
        depth = 0
        while k < b:
            x = toks[k].text
            if x in ("(", "{", "["):
                depth += 1
            elif x in (")", "}", "]"):
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and x == ";":
                break
            elif depth == 0 and x == "," and toks[k + 1].kind == "ident" and toks[k + 2].text in ("=", ";", ","):
                names.append(toks[k + 1].text)
            k += 1
    return names


def _call_sites(toks, a, b):
    """(name, receiver tokens) for each invocation in toks[a:b]."""
    calls = []
    for i in range(a, b):
        t = toks[i]
        if t.kind != "ident" or toks[i + 1].text != "(":
            continue
        if toks[i - 1].text == "new":
            continue
        c = _close(toks, i + 1)
        if toks[c + 1].text in ("{", "throws"):
            continue  # declaration inside an anonymous class
        recv = []
        j = i - 1
        if toks[j].text == ".":
            j -= 1
            while toks[j].kind in ("ident", "kw") and toks[j].text not in ("return", "new"):
                recv.insert(0, toks[j])
                if toks[j - 1].text == ".":
                    recv.insert(0, toks[j - 1])
                    j -= 2
                else:
                    break
            else:
                recv = None  # complex receiver expression
        calls.append((t.text, recv))
    return calls


def _type_names(toks, a, b, excluded):
    out = set()
    for i in range(a, b):
        t = toks[i]
        if t.kind != "ident" or not t.text[0].isupper() or t.text.upper() == t.text:
            continue
        if toks[i - 1].text == ".":
            continue
        if t.text in excluded:
            continue
        out.add(t.text)
    return out


def _depth_profile(toks, a, b):
    """Max nesting depth of statements inside the block toks[a] .. toks[b].

    A block lambda body sits two levels below its statement (lambda node,
    then the block), a local class body adds no level of its own.
    """
    best = 0
    stack = []
    depth = 0
    paren = 0
    for i in range(a + 1, b):
        x = toks[i].text
        if x == "(":
            paren += 1
        elif x == ")":
            paren -= 1
        elif x == "{":
            step = 1
            if toks[i - 1].text == "->":
                step = 2
            elif _opens_local_class(toks, i):
                step = 0
            stack.append((step, paren))
            depth += step
            paren = 0
        elif x == "}":
            step, paren = stack.pop()
            depth -= step
        elif x == ";" and paren == 0:
            best = max(best, depth)
        elif x == "->" and toks[i + 1].text != "{":
            best = max(best, depth + 1)
        elif x in ("if", "for", "while", "do", "try", "switch", "return"):
            best = max(best, depth)
    return best


def _opens_local_class(toks, i):
    j = i - 1
    while j > 0 and toks[j].text not in (";", "{", "}", "class", "interface", "enum"):
        j -= 1
    return toks[j].text in ("class", "interface", "enum")


def token_counts(toks, a, b):
    c = dict.fromkeys(
        "assign compare math numbers strings parens lambdas anon decisions returns loops trycatch branches".split(), 0
    )
    tails = _do_tails(toks, a, b)
    anon = _anonymous_opens(toks, a, b)
    for i in range(a, b + 1):
        t = toks[i]
        x = t.text
        if t.kind == "number":
            c["numbers"] += 1
        elif t.kind == "string":
            c["strings"] += 1
        elif x in ASSIGN:
            c["assign"] += 1
        elif x in ("==", "!=", "<=", ">="):
            c["compare"] += 1
        elif x in ("<", ">") and is_cmp_angle(t):
            c["compare"] += 1
        elif x in MATH:
            c["math"] += 1
        elif x in ("&&", "||", "case") or (x == "?" and is_cmp_angle(t)):
            c["decisions"] += 1
        elif x == "(" and _paren_kind(toks, i) == "expr":
            c["parens"] += 1
        elif x == "->":
            c["lambdas"] += 1
        elif x == "{" and i in anon:
            c["anon"] += 1
        elif x == "return":
            c["returns"] += 1
        if t.kind == "kw":
            loop = x in ("for", "do") or (x == "while" and i not in tails)
            if loop:
                c["loops"] += 1
                c["branches"] += 1
            if x in ("try", "catch"):
                c["trycatch"] += 1
            if x in ("if", "catch"):
                c["branches"] += 1
    return c


def lines(toks, ranges):
    seen = set()
    for a, b in ranges:
        for t in toks[a : b + 1]:
            seen.add(t.line)
    return len(seen)


def words(toks, ranges):
    seen = set()
    for a, b in ranges:
        for t in toks[a : b + 1]:
            if t.kind in ("ident", "kw", "number"):
                seen.add(t.text)
    return len(seen)


def _own_ranges(decl: TypeDecl):
    ranges = []
    cur = decl.start
    for n in sorted(decl.nested, key=lambda d: d.start):
        ranges.append((cur, n.start - 1))
        cur = n.close + 1
    ranges.append((cur, decl.close))
    return ranges


def method_metrics(toks, decl: TypeDecl, m: Member, field_names):
    a, b = m.start, m.end
    tc = token_counts(toks, a, b)
    locals_ = _declared_locals(toks, m.body_open + 1, b) if m.has_body else []
    excluded = {decl.name} | decl.type_params
    j = m.start
    while toks[j].text in MODIFIER_WORDS:
        j += 1
    if toks[j].text == "<":
        k = _skip_angle(toks, j)
        excluded |= {t.text for t in toks[j:k] if t.kind == "ident"}
    calls = _call_sites(toks, a, b) if m.has_body else []
    local_classes = sum(
        1 for i in range(a, b) if toks[i].text == "class" and toks[i - 1].text != "."
    )
    depth = 0
    if m.has_body:
        depth = _depth_profile(toks, m.body_open, b)
    return {
        "AnonymousClassesQty": tc["anon"],
        "AssignmentsQty": tc["assign"],
        "Cbo": len(_type_names(toks, a, b + 1, excluded)),
        "ComparisonsQty": tc["compare"],
        "LambdasQty": tc["lambdas"],
        "Loc": lines(toks, [(a, b)]),
        "LoopQty": tc["loops"],
        "MathOperationsQty": tc["math"],
        "MaxNestedBlocks": depth,
        "NumbersQty": tc["numbers"],
        "ParametersQty": len(m.params),
        "ParenthesizedExpsQty": tc["parens"],
        "ReturnQty": tc["returns"],
        "Rfc": len({name for name, _ in calls}),
        "StringLiteralsQty": tc["strings"],
        "SubClassesQty": local_classes,
        "TryCatchQty": tc["trycatch"],
        "UniqueWordsQty": words(toks, [(a, b)]),
        "VariablesQty": len(locals_),
        "Wmc": 1 + tc["branches"] + tc["decisions"],
    }, tc, calls, locals_


def accessed_fields(toks, m: Member, field_names, locals_):
    if not m.has_body:
        return set()
    hidden = set(locals_) | {p[1] for p in m.params}
    out = set()
    for i in range(m.body_open, m.end):
        t = toks[i]
        if t.kind != "ident" or t.text not in field_names or toks[i + 1].text == "(":
            continue
        if toks[i - 1].text == ".":
            if toks[i - 2].text == "this":
                out.add(t.text)
            continue
        if t.text not in hidden:
            out.add(t.text)
    return out


def cohesion(access: list[set[str]]):
    n = len(access)
    if n < 2:
        return 0.0, 0.0, 0
    pairs = list(combinations(range(n), 2))
    direct = {(i, j) for i, j in pairs if access[i] & access[j]}
    reach = {i: {i} for i in range(n)}
    changed = True
    while changed:
        changed = False
        for i, j in direct:
            merged = reach[i] | reach[j]
            for k in merged:
                if reach[k] != merged:
                    reach[k] = set(merged)
                    changed = True
    loose = sum(1 for i, j in pairs if j in reach[i])
    lcom = max(0, (len(pairs) - len(direct)) - len(direct))
    return len(direct) / len(pairs), loose / len(pairs), lcom


def _visibility(mods):
    for v in ("public", "private", "protected"):
        if v in mods:
            return v
    return "default"


def file_metrics(source: str) -> dict:
    toks = lex(source)
    result = {}
    types = parse_types(toks)
    for decl in types:
        own = _own_ranges(decl)
        fields = [m for m in decl.members if m.kind == "field"]
        methods = [m for m in decl.members if m.kind == "method"]
        field_names = {n for f in fields for n in f.field_names}

        totals = dict.fromkeys(
            "assign compare math numbers strings parens lambdas anon decisions".split(), 0
        )
        for a, b in own:
            if a > b:
                continue
            tc = token_counts(toks, a, b)
            for k in totals:
                totals[k] += tc[k]

        method_rows = {}
        callees = set()
        access = []
        var_total = 0
        ret = loops = trycatch = depth = 0
        static_calls = 0
        wmc = 0
        for m in methods:
            mm, tc, calls, locals_ = method_metrics(toks, decl, m, field_names)
            sig = m.name + "(" + ",".join(p[0] for p in m.params) + ")"
            method_rows[sig] = mm
            callees |= {name for name, _ in calls}
            var_total += mm["VariablesQty"]
            ret += mm["ReturnQty"]
            loops += mm["LoopQty"]
            trycatch += mm["TryCatchQty"]
            depth = max(depth, mm["MaxNestedBlocks"])
            wmc += mm["Wmc"]
            known = set(locals_) | {p[1] for p in m.params} | field_names
            for _, recv in calls:
                if recv and recv[0].text[0].isupper() and recv[0].text not in known:
                    static_calls += 1
            if not m.constructor:
                access.append(accessed_fields(toks, m, field_names, locals_))
        for o, c in decl.initializers:
            tc = token_counts(toks, o, c)
            ret += tc["returns"]
            loops += tc["loops"]
            trycatch += tc["trycatch"]
            depth = max(depth, _depth_profile(toks, o, c))
            calls = _call_sites(toks, o, c)
            callees |= {name for name, _ in calls}
            locals_ = _declared_locals(toks, o + 1, c)
            var_total += len(locals_)
            known = set(locals_) | field_names
            for _, recv in calls:
                if recv and recv[0].text[0].isupper() and recv[0].text not in known:
                    static_calls += 1
        for o, c in decl.field_inits:
            calls = _call_sites(toks, o, c)
            callees |= {name for name, _ in calls}
            for _, recv in calls:
                if recv and recv[0].text[0].isupper() and recv[0].text not in field_names:
                    static_calls += 1

        tcc, lcc, lcom = cohesion(access)
        excluded = {decl.name} | decl.type_params
        for m in methods:
            j = m.start
            while toks[j].text in MODIFIER_WORDS:
                j += 1
            if toks[j].text == "<":
                k = _skip_angle(toks, j)
                excluded |= {t.text for t in toks[j:k] if t.kind == "ident"}
        cbo = set()
        for a, b in own:
            cbo |= _type_names(toks, a, b + 1, excluded)

        def nf(pred):
            return sum(1 for f in fields for _ in f.field_names if pred(f))

        def nm(pred):
            return sum(1 for m in methods if pred(m))

        row = {
            "AnonymousClassesQty": totals["anon"],
            "AssignmentsQty": totals["assign"],
            "Cbo": len(cbo),
            "ComparisonsQty": totals["compare"],
            "LambdasQty": totals["lambdas"],
            "Lcom": lcom,
            "Loc": lines(toks, own),
            "LCC": lcc,
            "LoopQty": loops,
            "MathOperationsQty": totals["math"],
            "MaxNestedBlocks": depth,
            "Nosi": static_calls,
            "NumberOfAbstractMethods": nm(lambda m: "abstract" in m.mods or (not m.has_body and "native" not in m.mods)),
            "NumberOfDefaultFields": nf(lambda f: _visibility(f.mods) == "default"),
            "NumberOfDefaultMethods": nm(lambda m: _visibility(m.mods) == "default"),
            "NumberOfFields": nf(lambda f: True),
            "NumberOfFinalFields": nf(lambda f: "final" in f.mods),
            "NumberOfFinalMethods": nm(lambda m: "final" in m.mods),
            "NumberOfMethods": len(methods),
            "NumberOfPrivateFields": nf(lambda f: _visibility(f.mods) == "private"),
            "NumberOfPrivateMethods": nm(lambda m: _visibility(m.mods) == "private"),
            "NumberOfProtectedFields": nf(lambda f: _visibility(f.mods) == "protected"),
            "NumberOfProtectedMethods": nm(lambda m: _visibility(m.mods) == "protected"),
            "NumberOfPublicFields": nf(lambda f: _visibility(f.mods) == "public"),
            "NumberOfPublicMethods": nm(lambda m: _visibility(m.mods) == "public"),
            "NumberOfStaticFields": nf(lambda f: "static" in f.mods),
            "NumberOfStaticMethods": nm(lambda m: "static" in m.mods),
            "NumberOfSynchronizedFields": nf(lambda f: "synchronized" in f.mods),
            "NumberOfSynchronizedMethods": nm(lambda m: "synchronized" in m.mods),
            "NumbersQty": totals["numbers"],
            "ParenthesizedExpsQty": totals["parens"],
            "ReturnQty": ret,
            "Rfc": len(methods) + len(callees),
            "StringLiteralsQty": totals["strings"],
            "SubClassesQty": len(decl.nested),
            "TryCatchQty": trycatch,
            "UniqueWordsQty": words(toks, own),
            "VariablesQty": var_total,
            "Wmc": wmc,
            "TCC": tcc,
            "isInnerClass": int(decl.inner),
        }
        result[decl.name] = {"class": row, "methods": method_rows}
    return result


if __name__ == "__main__":
    for path in sys.argv[1:]:
        with open(path, encoding="utf-8") as fh:
            print(json.dumps(file_metrics(fh.read()), indent=2, sort_keys=True))
