"""Dataset assembly: CSV I/O, deduplication, stratified split, scaling, feature filter."""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .metrics import FEATURE_NAMES
from .miner import MinedInstance

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
ID_COLUMNS = ("project", "commit", "class", "method", "label")
LabeledInstance = MinedInstance


class EmptyClass(ValueError):
    """A stratified operation needs both labels present."""


class DatasetFormatError(ValueError):
    pass


@dataclass
class Dataset:
    instances: list[MinedInstance]
    feature_names: tuple[str, ...] = FEATURE_NAMES
    metadata: dict[str, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.instances)

    @property
    def X(self) -> np.ndarray:
        if not self.instances:
            return np.zeros((0, len(self.feature_names)))
        return np.array([inst.features for inst in self.instances], dtype=float)

    @property
    def y(self) -> np.ndarray:
        return np.array([int(inst.label) for inst in self.instances], dtype=np.int64)

    @property
    def projects(self) -> list[str]:
        return sorted({inst.project_id for inst in self.instances})

    def class_counts(self) -> tuple[int, int]:
        pos = sum(1 for inst in self.instances if inst.label)
        return len(self.instances) - pos, pos

    def subset(self, indices) -> Dataset:
        return Dataset([self.instances[i] for i in indices], self.feature_names, dict(self.metadata))

    def where_project(self, project: str, keep: bool = True) -> Dataset:
        idx = [i for i, inst in enumerate(self.instances) if (inst.project_id == project) == keep]
        return self.subset(idx)

    def __add__(self, other: Dataset) -> Dataset:
        return Dataset(self.instances + other.instances, self.feature_names, dict(self.metadata))


def deduplicate(dataset: Dataset) -> Dataset:
    """Collapse exact (vector, label) repeats; drop vectors seen with both labels."""
    labels: dict[tuple, set[bool]] = {}
    for inst in dataset.instances:
        labels.setdefault(inst.features, set()).add(bool(inst.label))
    conflicts = {vec for vec, seen in labels.items() if len(seen) > 1}
    if conflicts:
        log.warning("dropping %d feature vectors that carry both labels", len(conflicts))
    kept = []
    seen_keys = set()
    for inst in dataset.instances:
        if inst.features in conflicts:
            continue
        key = (inst.features, bool(inst.label))
        if key in seen_keys:
            continue
        seen_keys.add(key)
        kept.append(inst)
    return Dataset(kept, dataset.feature_names, dict(dataset.metadata))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(dataset: Dataset, test_fraction: float = 0.2, seed: int = 42) -> tuple[Dataset, Dataset]:
    y = dataset.y
    test_idx: list[int] = []
    for label in (0, 1):
        members = np.flatnonzero(y == label)
        if members.size == 0:
            raise EmptyClass(f"no instances with label {label}")
        n_test = max(1, _round_half_up(members.size * test_fraction))
        rng = np.random.default_rng([seed, label])
        test_idx += rng.permutation(members)[:n_test].tolist()
    chosen = set(test_idx)
    train = [i for i in range(len(dataset)) if i not in chosen]
    return dataset.subset(train), dataset.subset(sorted(chosen))


@dataclass(frozen=True)
class Scaler:
    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        lo = np.array(self.mins)
        span = np.array(self.maxs) - lo
        out = np.zeros_like(X, dtype=float)
        live = span > 0
        out[..., live] = (X[..., live] - lo[live]) / span[live]
        return out


def fit_minmax(X) -> Scaler:
    X = X.X if isinstance(X, Dataset) else np.asarray(X, dtype=float)
    if X.shape[0] == 0:
        raise ValueError("cannot fit a scaler on an empty training set")
    return Scaler(tuple(X.min(axis=0).tolist()), tuple(X.max(axis=0).tolist()))


def apply_scaler(scaler: Scaler, X) -> np.ndarray:
    X = X.X if isinstance(X, Dataset) else X
    return scaler.transform(X)


@dataclass(frozen=True)
class FeatureMask:
    selected: tuple[bool, ...]

    def __post_init__(self):
        if not any(self.selected):
            raise ValueError("a feature mask must keep at least one feature")

    @property
    def k(self) -> int:
        return sum(self.selected)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(np.array(self.selected))

    def apply(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float)[..., self.indices]

    @classmethod
    def all(cls, n: int) -> FeatureMask:
        return cls((True,) * n)


def separation_scores(X, y) -> np.ndarray:
    """(mean1 - mean0)^2 / pooled variance per feature.

    Zero pooled variance scores 0 when the class means agree and +inf when
    they differ (the feature separates the classes perfectly).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    a, b = X[y == 0], X[y == 1]
    if len(a) == 0 or len(b) == 0:
        raise EmptyClass("feature selection needs both labels")
    diff = (b.mean(axis=0) - a.mean(axis=0)) ** 2
    pooled = (len(a) * a.var(axis=0) + len(b) * b.var(axis=0)) / (len(a) + len(b))
    scores = np.zeros(X.shape[1])
    flat = pooled == 0
    scores[~flat] = diff[~flat] / pooled[~flat]
    scores[flat & (diff > 0)] = np.inf
    return scores


def select_features(X, y=None, k: int = 30) -> FeatureMask:
    if isinstance(X, Dataset):
        X, y = X.X, X.y
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = separation_scores(X, y)
    order = sorted(range(len(scores)), key=lambda j: (-scores[j], j))
    keep = set(order[:k])
    return FeatureMask(tuple(j in keep for j in range(len(scores))))


# ----------------------------------------------------------------------- CSV


def format_number(value: float) -> str:
    value = float(value)
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


def dumps_dataset(dataset: Dataset) -> str:
    buf = io.StringIO()
    buf.write(f"# dataset-format: {FORMAT_VERSION}\n")
    for key in sorted(dataset.metadata):
        buf.write(f"# {key}: {dataset.metadata[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ID_COLUMNS + tuple(dataset.feature_names))
    for inst in dataset.instances:
        writer.writerow(
            [inst.project_id, inst.commit, inst.class_name, inst.method, "1" if inst.label else "0"]
            + [format_number(v) for v in inst.features]
        )
    return buf.getvalue()


def write_dataset(path, dataset: Dataset) -> None:
    Path(path).write_text(dumps_dataset(dataset), encoding="utf-8", newline="\n")


def loads_dataset(text: str, source: str = "<string>") -> Dataset:
    lines = text.split("\n")
    if not lines or lines[0].strip() != f"# dataset-format: {FORMAT_VERSION}":
        raise DatasetFormatError(f"{source}: missing '# dataset-format: {FORMAT_VERSION}' first line")
    metadata = {}
    i = 1
    while i < len(lines) and lines[i].startswith("#"):
        key, _, value = lines[i][1:].partition(":")
        metadata[key.strip()] = value.strip()
        i += 1
    reader = csv.reader(lines[i:])
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetFormatError(f"{source}: no header row") from None
    if tuple(header[:5]) != ID_COLUMNS or tuple(header[5:]) != FEATURE_NAMES:
        raise DatasetFormatError(f"{source}: unexpected header")
    instances = []
    for lineno, row in enumerate(reader, start=i + 2):
        if not row:
            continue
        if len(row) != len(header):
            raise DatasetFormatError(f"{source}:{lineno}: expected {len(header)} fields, got {len(row)}")
        if row[4] not in ("0", "1"):
            raise DatasetFormatError(f"{source}:{lineno}: label must be 0 or 1")
        try:
            feats = tuple(float(v) for v in row[5:])
        except ValueError as exc:
            raise DatasetFormatError(f"{source}:{lineno}: {exc}") from None
        instances.append(MinedInstance(row[0], row[1], "", row[2], row[3], row[4] == "1", feats))
    return Dataset(instances, FEATURE_NAMES, metadata)


def read_dataset(path) -> Dataset:
    path = Path(path)
    return loads_dataset(path.read_text(encoding="utf-8"), str(path))
