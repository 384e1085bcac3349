"""Extract Method detection between two versions of one Java file.

Statements are compared as multisets of canonical strings taken from every
node of the method's statement tree, so an extracted fragment that sat inside
a loop still matches its old copy.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

from .javamodel import EncodingError, JavaSyntaxError, parse_compilation_unit
from .javamodel.model import ClassModel, CodeModel, MethodModel

log = logging.getLogger(__name__)

OVERLAP_THRESHOLD = 0.5
MIN_MOVED = 1


@dataclass(frozen=True)
class ExtractMethodInstance:
    parent_class: str
    parent_signature: str
    extracted_class: str
    extracted_signature: str
    overlap_ratio: float
    commit: str | None = None


def statement_bag(method: MethodModel) -> Counter:
    return Counter(method.body.canonical_texts())


def moved_overlap(extracted: Counter, before_parent: Counter, after_parent: Counter) -> tuple[int, float]:
    """(moved statement count, ratio) of ``extracted`` that left the parent."""
    total = sum(extracted.values())
    if total == 0:
        return 0, 0.0
    removed = before_parent - after_parent
    moved = sum((extracted & removed).values())
    return moved, moved / total


def _classes(code: CodeModel) -> dict[str, ClassModel]:
    return {cls.qualified_name: cls for cls in code.classes}


def detect_extract_method(before: CodeModel, after: CodeModel, commit: str | None = None) -> list[ExtractMethodInstance]:
    found: list[ExtractMethodInstance] = []
    before_classes = _classes(before)
    for cls in after.classes:
        old = before_classes.get(cls.qualified_name)
        if old is None:
            continue
        old_sigs = {m.signature for m in old.methods}
        new_methods = [m for m in cls.methods if m.signature not in old_sigs and m.has_body]
        if not new_methods:
            continue
        parents = [(m, old.method(m.signature)) for m in cls.methods if m.signature in old_sigs]
        for extracted in new_methods:
            bag = statement_bag(extracted)
            best = None
            for after_parent, before_parent in parents:
                if not any(inv.name == extracted.name for inv in after_parent.invocations):
                    continue
                moved, ratio = moved_overlap(bag, statement_bag(before_parent), statement_bag(after_parent))
                if moved < MIN_MOVED or ratio < OVERLAP_THRESHOLD:
                    continue
                key = (-ratio, after_parent.signature)
                if best is None or key < best[0]:
                    best = (key, after_parent, ratio)
            if best is not None:
                _, parent, ratio = best
                found.append(
                    ExtractMethodInstance(
                        cls.qualified_name, parent.signature, cls.qualified_name, extracted.signature, ratio, commit
                    )
                )
    return found


def _gained_statements(before: CodeModel, after: CodeModel) -> Counter:
    """Statements present in an after-version method but not in its before version."""
    gained: Counter = Counter()
    before_classes = _classes(before)
    for cls in after.classes:
        old = before_classes.get(cls.qualified_name)
        for method in cls.methods:
            previous = old.method(method.signature) if old is not None else None
            bag = statement_bag(method)
            gained += bag - statement_bag(previous) if previous is not None else bag
    return gained


def refactored_classes(before: CodeModel, after: CodeModel) -> set[str]:
    """Qualified names of classes touched by any detected refactoring.

    Besides Extract Method parents this flags every class that lost a method
    whose statements turn up among the file's newly gained statements
    (renames and in-file moves). Deliberately coarse.
    """
    touched = {inst.parent_class for inst in detect_extract_method(before, after)}
    gained = None
    after_classes = _classes(after)
    for cls in before.classes:
        new = after_classes.get(cls.qualified_name)
        new_sigs = {m.signature for m in new.methods} if new is not None else set()
        for method in cls.methods:
            if method.signature in new_sigs:
                continue
            bag = statement_bag(method)
            if not bag:
                continue
            if gained is None:
                gained = _gained_statements(before, after)
            moved, ratio = moved_overlap(bag, gained, Counter())
            if moved >= MIN_MOVED and ratio >= OVERLAP_THRESHOLD:
                touched.add(cls.qualified_name)
    return touched


def detect_any_refactoring(before: CodeModel, after: CodeModel) -> bool:
    return bool(refactored_classes(before, after))


def parse_or_none(source, path: str) -> CodeModel | None:
    try:
        return parse_compilation_unit(source, path)
    except (JavaSyntaxError, EncodingError) as exc:
        log.warning("skipping unparseable %s: %s", path, exc)
        return None


def detect_in_sources(before_src, after_src, path: str, commit: str | None = None) -> list[ExtractMethodInstance]:
    """Parse both versions and detect; an unparseable version yields []."""
    before = parse_or_none(before_src, path)
    after = parse_or_none(after_src, path)
    if before is None or after is None:
        return []
    return detect_extract_method(before, after, commit)
