"""Portable on-disk model bundle: model parameters, scaler, feature mask and metadata.

The file is UTF-8 JSON with a fixed key order. Floats are written with 17
significant digits so that every value reloads bit-for-bit. See
docs/model-bundle.md for the layout.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import Dataset, FeatureMask, Scaler, dumps_dataset
from .learners import AlgorithmSpec, TrainedModel
from .metrics import FEATURE_NAMES

FORMAT_VERSION = 1
_TOP_KEYS = ("format_version", "algorithm", "hyperparameters", "parameters", "scaler", "feature_mask", "feature_names", "metadata")


class IoError(OSError):
    pass


class FormatError(ValueError):
    pass


class VersionError(ValueError):
    pass


@dataclass(frozen=True)
class ModelBundle:
    model: TrainedModel
    scaler: Scaler
    feature_names: tuple[str, ...] = FEATURE_NAMES
    dataset_hash: str = ""
    tag: str = ""
    timestamp: str | None = None
    extra: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if len(self.feature_names) != len(FEATURE_NAMES):
            raise ValueError(f"a bundle carries {len(FEATURE_NAMES)} feature names, got {len(self.feature_names)}")
        if len(self.scaler.mins) != len(self.feature_names):
            raise ValueError("scaler width does not match feature names")

    @property
    def kind(self) -> str:
        return self.model.spec.kind

    @property
    def mask(self) -> FeatureMask:
        if self.model.mask is None:
            return FeatureMask.all(len(self.feature_names))
        return FeatureMask(tuple(self.model.mask))

    def predict_many(self, X_raw):
        return self.model.predict_many(self.scaler.transform(np.asarray(X_raw, dtype=float)))


def dataset_hash(dataset: Dataset) -> str:
    return "sha256:" + hashlib.sha256(dumps_dataset(dataset).encode("utf-8")).hexdigest()


# ------------------------------------------------------------------ writing


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v} cannot be stored")
        text = "%.17g" % v
        # keep the value a JSON number that reads back as a float
        return text if any(c in text for c in ".e") else text + ".0"
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _emit(value, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_emit(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_scalar(v) for v in value) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent + 1) for v in value) + "\n" + "  " * indent + "]"
    return _scalar(value)


def bundle_document(bundle: ModelBundle) -> dict:
    meta = {"seed": bundle.model.seed, "dataset_hash": bundle.dataset_hash, "tag": bundle.tag}
    if bundle.timestamp is not None and bundle.tag != "test":
        meta["timestamp"] = bundle.timestamp
    meta.update(bundle.extra)
    return {
        "format_version": bundle.format_version,
        "algorithm": bundle.kind,
        "hyperparameters": bundle.model.spec.params,
        "parameters": bundle.model.params,
        "scaler": {"min": list(bundle.scaler.mins), "max": list(bundle.scaler.maxs)},
        "feature_mask": list(bundle.mask.selected),
        "feature_names": list(bundle.feature_names),
        "metadata": meta,
    }


def dumps_bundle(bundle: ModelBundle) -> str:
    return _emit(bundle_document(bundle), 0) + "\n"


def save_bundle(bundle: ModelBundle, path) -> None:
    """Write ``bundle`` atomically: a temp file in the target directory, then a rename."""
    text = dumps_bundle(bundle)
    path = Path(path)
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise IoError(f"cannot write bundle to {path}: {exc}") from exc


# ------------------------------------------------------------------ reading


def _require(doc: dict, key: str, kind):
    if key not in doc:
        raise FormatError(f"bundle is missing {key!r}")
    if not isinstance(doc[key], kind):
        raise FormatError(f"bundle field {key!r} has the wrong type")
    return doc[key]


def _check_tree(tree: dict, width: int) -> None:
    cols = [list(tree[k]) for k in ("feature", "threshold", "left", "right", "value")]
    n = len(cols[0])
    if n == 0 or any(len(c) != n for c in cols):
        raise ValueError("tree arrays must be non-empty and of equal length")
    feature, _, left, right, _ = cols
    for f, lo, hi in zip(feature, left, right):
        if f >= width or (f >= 0 and not (0 < lo < n and 0 < hi < n)):
            raise ValueError("tree node points outside the table")


def _check_parameters(kind: str, params: dict, width: int, mask: tuple[bool, ...]) -> None:
    if len(mask) != width:
        raise ValueError(f"feature_mask has {len(mask)} entries, expected {width}")
    if kind == "DT":
        _check_tree(params["tree"], width)
    elif kind == "RF":
        for tree in params["trees"]:
            _check_tree(tree, width)
    elif kind in ("LR", "SVM"):
        expected = sum(mask) if kind == "LR" else width
        if len(params["weights"]) != expected:
            raise ValueError(f"{kind} has {len(params['weights'])} weights, expected {expected}")
        float(params["bias"])
    else:
        if len(params["priors"]) != 2 or any(
            len(params[k]) != 2 or any(len(row) != width for row in params[k]) for k in ("means", "variances")
        ):
            raise ValueError(f"NB parameters must be 2 x {width}")


def loads_bundle(text: str) -> ModelBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bundle is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("bundle root must be an object")
    version = _require(doc, "format_version", int)
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported bundle format_version {version}; this reader handles {FORMAT_VERSION}")
    for key in _TOP_KEYS:
        _require(doc, key, object)
    meta = _require(doc, "metadata", dict)
    scaler_doc = _require(doc, "scaler", dict)
    names = tuple(_require(doc, "feature_names", list))
    mask = tuple(bool(v) for v in _require(doc, "feature_mask", list))
    try:
        spec = AlgorithmSpec(doc["algorithm"], dict(_require(doc, "hyperparameters", dict)))
        scaler = Scaler(tuple(float(v) for v in scaler_doc["min"]), tuple(float(v) for v in scaler_doc["max"]))
        _check_parameters(spec.kind, _require(doc, "parameters", dict), len(names), mask)
        model = TrainedModel(
            spec,
            _require(doc, "parameters", dict),
            int(meta["seed"]),
            len(names),
            names,
            None if all(mask) and spec.kind != "LR" else mask,
            str(meta.get("tag", "")),
        )
        extra = {k: v for k, v in meta.items() if k not in ("seed", "dataset_hash", "tag", "timestamp")}
        return ModelBundle(model, scaler, names, str(meta.get("dataset_hash", "")), str(meta.get("tag", "")),
                           meta.get("timestamp"), extra, version)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bundle content is inconsistent: {exc}") from exc


def load_bundle(path) -> ModelBundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read bundle {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise FormatError(f"bundle {path} is not UTF-8") from exc
    return loads_bundle(text)
