"""Class- and method-level code metrics computed from a parsed CodeModel.

Counting rules (documented divergences from the CK tool are listed in the
README): token-level counts run over the declaration's own tokens with
annotations removed; statement counts come from the statement tree; nested
named classes are measured separately, anonymous classes and lambdas count
toward the enclosing method.
"""
from __future__ import annotations

from collections.abc import Mapping
from itertools import combinations

from .javamodel.lexer import PRIMITIVES
from .javamodel.model import ClassModel, CodeModel, MethodModel, StatementTree
from .javamodel.parser import ASSIGNMENT_OPS

CLASS_FEATURES = (
    "AnonymousClassesQty", "AssignmentsQty", "Cbo", "ComparisonsQty", "LambdasQty",
    "Lcom", "Loc", "LCC", "LoopQty", "MathOperationsQty", "MaxNestedBlocks", "Nosi",
    "NumberOfAbstractMethods", "NumberOfDefaultFields", "NumberOfDefaultMethods",
    "NumberOfFields", "NumberOfFinalFields", "NumberOfFinalMethods", "NumberOfMethods",
    "NumberOfPrivateFields", "NumberOfPrivateMethods", "NumberOfProtectedFields",
    "NumberOfProtectedMethods", "NumberOfPublicFields", "NumberOfPublicMethods",
    "NumberOfStaticFields", "NumberOfStaticMethods", "NumberOfSynchronizedFields",
    "NumberOfSynchronizedMethods", "NumbersQty", "ParenthesizedExpsQty", "ReturnQty",
    "Rfc", "StringLiteralsQty", "SubClassesQty", "TryCatchQty", "UniqueWordsQty",
    "VariablesQty", "Wmc", "TCC", "isInnerClass",
)

METHOD_FEATURES = (
    "AnonymousClassesQty", "AssignmentsQty", "Cbo", "ComparisonsQty", "LambdasQty",
    "Loc", "LoopQty", "MathOperationsQty", "MaxNestedBlocks", "NumbersQty",
    "ParametersQty", "ParenthesizedExpsQty", "ReturnQty", "Rfc", "StringLiteralsQty",
    "SubClassesQty", "TryCatchQty", "UniqueWordsQty", "VariablesQty", "Wmc",
)

FEATURE_NAMES = CLASS_FEATURES + tuple(f"method_{name}" for name in METHOD_FEATURES)
REAL_FEATURES = frozenset({"LCC", "TCC"})

_COMPARISON_OPS = frozenset({"==", "!=", "<=", ">="})
_MATH_OPS = frozenset({"+", "-", "*", "/", "%", "++", "--"})
_BRANCH_NODES = frozenset({"if", "for", "while", "do", "catch"})
_LOOP_NODES = frozenset({"for", "while", "do"})
_NOT_TYPES = PRIMITIVES | {"void", "var"}


class MetricVector(Mapping):
    """Immutable, ordered name -> value mapping with a fixed feature list."""

    names: tuple[str, ...] = ()

    def __init__(self, values: Mapping[str, float]):
        missing = [n for n in self.names if n not in values]
        if missing:
            raise KeyError(f"missing metrics: {missing}")
        self._values = {n: values[n] for n in self.names}

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if isinstance(other, MetricVector):
            return self.names == other.names and self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._values.items()))

    def __repr__(self):
        return f"{type(self).__name__}({self._values})"

    def values_list(self) -> list[float]:
        return [self._values[n] for n in self.names]


class ClassMetricVector(MetricVector):
    names = CLASS_FEATURES


class MethodMetricVector(MetricVector):
    names = METHOD_FEATURES


def _token_counts(tokens) -> dict[str, int]:
    counts = dict.fromkeys(
        ("assign", "compare", "math", "numbers", "strings", "parens", "lambdas", "anon", "decisions"), 0
    )
    for tok in tokens:
        kind = tok.kind
        if kind == "number":
            counts["numbers"] += 1
        elif kind == "string":
            counts["strings"] += 1
        elif kind == "keyword":
            if tok.text == "case":
                counts["decisions"] += 1
        elif kind == "op":
            text = tok.text
            if text in ASSIGNMENT_OPS:
                counts["assign"] += 1
            elif text in _COMPARISON_OPS or (text in ("<", ">") and not tok.generic):
                counts["compare"] += 1
            elif text in _MATH_OPS:
                counts["math"] += 1
            elif text in ("&&", "||") or (text == "?" and not tok.generic):
                counts["decisions"] += 1
            elif text == "(" and tok.paren == "expr":
                counts["parens"] += 1
            elif text == "->" and tok.role == "lambda":
                counts["lambdas"] += 1
            elif text == "{" and tok.role == "anonymous":
                counts["anon"] += 1
    return counts


def unique_words(tokens) -> int:
    return len({tok.text for tok in tokens if tok.kind in ("ident", "keyword", "number")})


def _type_refs(tokens, excluded) -> set[str]:
    return {tok.text for tok in tokens if tok.role == "type" and tok.text not in excluded}


def _tree_counts(trees: list[StatementTree]) -> dict[str, int]:
    counts = {"returns": 0, "loops": 0, "trycatch": 0, "branches": 0, "max_depth": 0}
    for tree in trees:
        for node in tree.nodes():
            kind = node.kind
            if kind == "return":
                counts["returns"] += 1
            if kind in _LOOP_NODES:
                counts["loops"] += 1
            if kind in ("try", "catch"):
                counts["trycatch"] += 1
            if kind in _BRANCH_NODES:
                counts["branches"] += 1
            counts["max_depth"] = max(counts["max_depth"], node.nesting_depth)
    return counts


def lines_of_code(tokens) -> int:
    """Distinct physical lines holding the given tokens.

    Blank and comment-only lines hold no tokens, so they never count.
    """
    lines: set[int] = set()
    for tok in tokens:
        lines.update(range(tok.line, tok.end_line + 1))
    return len(lines)


def cyclomatic_complexity(method: MethodModel) -> int:
    tree = _tree_counts([method.body])
    return 1 + tree["branches"] + _token_counts(method.tokens)["decisions"]


def _cohesion_methods(cls: ClassModel) -> list[MethodModel]:
    return [m for m in cls.methods if not m.is_constructor]


def tight_and_loose_cohesion(cls: ClassModel) -> tuple[float, float]:
    """(TCC, LCC) over non-constructor methods connected through shared fields."""
    methods = _cohesion_methods(cls)
    n = len(methods)
    if n < 2:
        return 0.0, 0.0
    possible = n * (n - 1) // 2
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    direct = 0
    for a, b in combinations(range(n), 2):
        if methods[a].accessed_field_names & methods[b].accessed_field_names:
            direct += 1
            parent[find(a)] = find(b)
    sizes: dict[int, int] = {}
    for x in range(n):
        root = find(x)
        sizes[root] = sizes.get(root, 0) + 1
    connected = sum(s * (s - 1) // 2 for s in sizes.values())
    return direct / possible, connected / possible


def lack_of_cohesion(cls: ClassModel) -> int:
    methods = _cohesion_methods(cls)
    sharing = disjoint = 0
    for a, b in combinations(methods, 2):
        if a.accessed_field_names & b.accessed_field_names:
            sharing += 1
        else:
            disjoint += 1
    return max(0, disjoint - sharing)


def compute_method_metrics(method: MethodModel, enclosing: ClassModel | None = None) -> MethodMetricVector:
    tokens = method.tokens
    counts = _token_counts(tokens)
    tree = _tree_counts([method.body])
    excluded = _NOT_TYPES | set(method.type_params)
    if enclosing is not None:
        excluded |= {enclosing.name} | set(enclosing.type_params)
    return MethodMetricVector(
        {
            "AnonymousClassesQty": counts["anon"],
            "AssignmentsQty": counts["assign"],
            "Cbo": len(_type_refs(tokens, excluded)),
            "ComparisonsQty": counts["compare"],
            "LambdasQty": counts["lambdas"],
            "Loc": lines_of_code(tokens),
            "LoopQty": tree["loops"],
            "MathOperationsQty": counts["math"],
            "MaxNestedBlocks": tree["max_depth"],
            "NumbersQty": counts["numbers"],
            "ParametersQty": len(method.parameters),
            "ParenthesizedExpsQty": counts["parens"],
            "ReturnQty": tree["returns"],
            "Rfc": len({inv.name for inv in method.invocations}),
            "StringLiteralsQty": counts["strings"],
            "SubClassesQty": method.local_class_count,
            "TryCatchQty": tree["trycatch"],
            "UniqueWordsQty": unique_words(tokens),
            "VariablesQty": method.variable_count,
            "Wmc": 1 + tree["branches"] + counts["decisions"],
        }
    )


def compute_class_metrics(cls: ClassModel) -> ClassMetricVector:
    tokens = cls.own_tokens
    counts = _token_counts(tokens)
    trees = [m.body for m in cls.methods] + list(cls.initializers)
    tree = _tree_counts(trees)
    methods = cls.methods
    fields = cls.fields
    tcc, lcc = tight_and_loose_cohesion(cls)
    invocations = [inv for m in methods for inv in m.invocations] + list(cls.initializer_invocations)

    def n_fields(pred):
        return sum(1 for f in fields if pred(f))

    def n_methods(pred):
        return sum(1 for m in methods if pred(m))

    return ClassMetricVector(
        {
            "AnonymousClassesQty": counts["anon"],
            "AssignmentsQty": counts["assign"],
            "Cbo": len(cls.referenced_type_names),
            "ComparisonsQty": counts["compare"],
            "LambdasQty": counts["lambdas"],
            "Lcom": lack_of_cohesion(cls),
            "Loc": lines_of_code(tokens),
            "LCC": lcc,
            "LoopQty": tree["loops"],
            "MathOperationsQty": counts["math"],
            "MaxNestedBlocks": tree["max_depth"],
            "Nosi": sum(1 for inv in invocations if inv.is_static),
            "NumberOfAbstractMethods": n_methods(lambda m: "abstract" in m.modifiers),
            "NumberOfDefaultFields": n_fields(lambda f: f.visibility == "default"),
            "NumberOfDefaultMethods": n_methods(lambda m: m.visibility == "default"),
            "NumberOfFields": len(fields),
            "NumberOfFinalFields": n_fields(lambda f: "final" in f.modifiers),
            "NumberOfFinalMethods": n_methods(lambda m: "final" in m.modifiers),
            "NumberOfMethods": len(methods),
            "NumberOfPrivateFields": n_fields(lambda f: f.visibility == "private"),
            "NumberOfPrivateMethods": n_methods(lambda m: m.visibility == "private"),
            "NumberOfProtectedFields": n_fields(lambda f: f.visibility == "protected"),
            "NumberOfProtectedMethods": n_methods(lambda m: m.visibility == "protected"),
            "NumberOfPublicFields": n_fields(lambda f: f.visibility == "public"),
            "NumberOfPublicMethods": n_methods(lambda m: m.visibility == "public"),
            "NumberOfStaticFields": n_fields(lambda f: "static" in f.modifiers),
            "NumberOfStaticMethods": n_methods(lambda m: "static" in m.modifiers),
            "NumberOfSynchronizedFields": n_fields(lambda f: "synchronized" in f.modifiers),
            "NumberOfSynchronizedMethods": n_methods(lambda m: "synchronized" in m.modifiers),
            "NumbersQty": counts["numbers"],
            "ParenthesizedExpsQty": counts["parens"],
            "ReturnQty": tree["returns"],
            "Rfc": len(methods) + len({inv.name for inv in invocations}),
            "StringLiteralsQty": counts["strings"],
            "SubClassesQty": cls.subclass_count,
            "TryCatchQty": tree["trycatch"],
            "UniqueWordsQty": unique_words(tokens),
            "VariablesQty": sum(m.variable_count for m in methods) + cls.initializer_variable_count,
            "Wmc": sum(cyclomatic_complexity(m) for m in methods),
            "TCC": tcc,
            "isInnerClass": int(cls.is_inner),
        }
    )


def feature_vector(class_metrics: ClassMetricVector, method_metrics: MethodMetricVector) -> list[float]:
    """The 61 features in dataset column order."""
    return class_metrics.values_list() + method_metrics.values_list()


def method_feature_rows(code: CodeModel):
    """Yield ``(class, method, 61-feature list)`` for every method in the unit."""
    for cls in code.classes:
        class_metrics = compute_class_metrics(cls)
        for method in cls.methods:
            yield cls, method, feature_vector(class_metrics, compute_method_metrics(method, cls))
