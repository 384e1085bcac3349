"""Algorithm specs, the trained-model container, cross-validation and grid search."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..dataset import select_features
from ..scoring import f1_score
from .bayes import fit_gaussian_nb, nb_posteriors
from .linear import fit_logistic, fit_svm, sigmoid
from .tree import forest_scores, grow_forest_tree, grow_tree, tree_scores

log = logging.getLogger(__name__)

KINDS = ("RF", "DT", "LR", "SVM", "NB")

DEFAULTS: dict[str, dict[str, Any]] = {
    "DT": {"max_depth": None, "min_samples_split": 2, "min_samples_leaf": 1},
    "RF": {
        "ntrees": 100, "max_depth": None, "max_features": "sqrt", "bootstrap": True,
        "min_samples_split": 2, "min_samples_leaf": 1,
    },
    "LR": {"lambda": 0.01, "learning_rate": 0.1, "epochs": 500, "tol": 1e-7, "k_features": 30},
    "SVM": {"lambda": 0.001, "epochs": 200},
    "NB": {"var_smoothing": 1e-9},
}

DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "DT": {"max_depth": [3, 6, 12, None], "min_samples_split": [2, 10], "min_samples_leaf": [1, 5]},
    "RF": {"ntrees": [50, 100], "max_depth": [6, 12, None], "max_features": ["sqrt", "all"]},
    "LR": {"lambda": [0.001, 0.01, 0.1, 1.0]},
    "SVM": {"lambda": [0.0001, 0.001, 0.01]},
    "NB": {},
}


class SingleClassData(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class TooFewInstances(ValueError):
    pass


def normalize_kind(kind: str) -> str:
    k = str(kind).upper()
    if k not in KINDS:
        raise ValueError(f"unknown algorithm {kind!r}; expected one of {', '.join(KINDS)}")
    return k


@dataclass(frozen=True)
class AlgorithmSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = normalize_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        unknown = sorted(set(self.hyperparameters) - set(DEFAULTS[kind]))
        if unknown:
            raise ValueError(f"unknown hyperparameters for {kind}: {', '.join(unknown)}")
        object.__setattr__(self, "hyperparameters", dict(self.hyperparameters))

    @property
    def params(self) -> dict:
        merged = dict(DEFAULTS[self.kind])
        merged.update(self.hyperparameters)
        return merged


@dataclass(frozen=True)
class TrainedModel:
    spec: AlgorithmSpec
    params: dict
    seed: int
    n_features: int
    feature_names: tuple[str, ...] = ()
    mask: tuple[bool, ...] | None = None
    tag: str = ""

    def scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"model expects {self.n_features} features, got {X.shape[-1]}")
        if self.mask is not None:
            X = X[:, np.flatnonzero(self.mask)]
        kind = self.spec.kind
        p = self.params
        if kind == "DT":
            return tree_scores(p["tree"], X)
        if kind == "RF":
            return forest_scores(p["trees"], X)
        if kind in ("LR", "SVM"):
            return sigmoid(X @ np.asarray(p["weights"]) + p["bias"])
        return nb_posteriors(np.asarray(p["means"]), np.asarray(p["variances"]), np.asarray(p["priors"]), X)[:, 1]

    def predict_many(self, X) -> tuple[np.ndarray, np.ndarray]:
        s = self.scores(X)
        return (s >= 0.5).astype(np.int64), s

    def posteriors(self, X) -> np.ndarray:
        if self.spec.kind != "NB":
            raise TypeError("posteriors are defined for NB models only")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        p = self.params
        return nb_posteriors(np.asarray(p["means"]), np.asarray(p["variances"]), np.asarray(p["priors"]), X)


def predict(model: TrainedModel, features) -> tuple[bool, float]:
    """Label and score for one feature vector."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 1:
        raise DimensionMismatch("predict takes a single feature vector; use predict_many for batches")
    labels, scores = model.predict_many(features)
    return bool(labels[0]), float(scores[0])


def predict_many(model: TrainedModel, X) -> tuple[np.ndarray, np.ndarray]:
    return model.predict_many(X)


def train(
    spec: AlgorithmSpec,
    X,
    y,
    seed: int = 42,
    feature_names=(),
    tag: str = "",
    jobs: int = 1,
) -> TrainedModel:
    """Fit ``spec`` on already scaled data.

    LR picks its feature mask here, from exactly the rows it is trained on.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
        raise DimensionMismatch("X must be a non-empty 2-D array with one label per row")
    if len(np.unique(y)) < 2:
        raise SingleClassData("training data must contain both labels")
    p = spec.params
    kind = spec.kind
    mask = None
    learned: dict[str, Any]
    if kind == "DT":
        learned = {
            "tree": grow_tree(X, y, p["max_depth"], p["min_samples_split"], p["min_samples_leaf"])
        }
    elif kind == "RF":
        if int(p["ntrees"]) < 1:
            raise ValueError("ntrees must be >= 1")
        tasks = range(int(p["ntrees"]))
        if jobs != 1 and len(tasks) > 1:
            from joblib import Parallel, delayed

            trees = Parallel(n_jobs=jobs)(delayed(grow_forest_tree)(X, y, seed, t, p) for t in tasks)
        else:
            trees = [grow_forest_tree(X, y, seed, t, p) for t in tasks]
        learned = {"trees": trees, "tree_seeds": [[int(seed), t] for t in tasks]}
    elif kind == "LR":
        fmask = select_features(X, y, k=int(p["k_features"]))
        mask = fmask.selected
        w, b = fit_logistic(fmask.apply(X), y, p["lambda"], p["learning_rate"], p["epochs"], p["tol"])
        learned = {"weights": w.tolist(), "bias": float(b)}
    elif kind == "SVM":
        w, b = fit_svm(X, y, p["lambda"], p["epochs"], seed)
        learned = {"weights": w.tolist(), "bias": float(b)}
    else:
        means, variances, priors = fit_gaussian_nb(X, y, p["var_smoothing"])
        learned = {"means": means.tolist(), "variances": variances.tolist(), "priors": priors.tolist()}
    return TrainedModel(spec, learned, int(seed), X.shape[1], tuple(feature_names), mask, tag)


# --------------------------------------------------------- cross-validation


def stratified_kfold(y, k: int = 10, seed: int = 42) -> list[tuple[np.ndarray, np.ndarray]]:
    """(train indices, validation indices) per fold."""
    y = np.asarray(y).astype(np.int64)
    if k < 2:
        raise ValueError("k must be >= 2")
    fold_of = np.empty(len(y), dtype=np.int64)
    offset = 0
    for label in (0, 1):
        members = np.flatnonzero(y == label)
        if members.size < k:
            raise TooFewInstances(f"label {label} has {members.size} instances, fewer than k={k}")
        rng = np.random.default_rng([seed, label, k])
        shuffled = rng.permutation(members)
        fold_of[shuffled] = (np.arange(members.size) + offset) % k
        offset = (offset + members.size) % k
    folds = []
    for f in range(k):
        val = np.flatnonzero(fold_of == f)
        folds.append((np.flatnonzero(fold_of != f), val))
    return folds


def expand_grid(space: dict[str, list]) -> list[dict]:
    keys = list(space)
    return [dict(zip(keys, values)) for values in itertools.product(*(space[k] for k in keys))]


@dataclass(frozen=True)
class GridSearchResult:
    kind: str
    best_params: dict
    best_score: float
    combinations: tuple[dict, ...]
    scores: tuple[float, ...]


def _fold_f1(kind, params, X, y, train_idx, val_idx, seed) -> float:
    try:
        model = train(AlgorithmSpec(kind, params), X[train_idx], y[train_idx], seed)
        labels, _ = model.predict_many(X[val_idx])
        return f1_score(y[val_idx], labels)
    except (SingleClassData, DimensionMismatch, ValueError, FloatingPointError) as exc:
        log.warning("%s %s failed on a fold: %s; scoring 0", kind, params, exc)
        return 0.0


def grid_search(kind: str, space: dict | None, X, y, k: int = 10, seed: int = 42, jobs: int = 1) -> GridSearchResult:
    """Mean validation F1 over stratified k folds for every grid combination.

    The best combination is the first one, in enumeration order, that reaches
    the maximum mean F1.
    """
    kind = normalize_kind(kind)
    space = DEFAULT_GRIDS[kind] if space is None else space
    combos = expand_grid(space)
    if not combos:
        raise ValueError("empty hyperparameter space")
    for combo in combos:
        AlgorithmSpec(kind, combo)  # reject unknown keys before any work
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(np.int64)
    folds = stratified_kfold(y, k, seed)
    tasks = [(c, f) for c in range(len(combos)) for f in range(k)]
    if jobs != 1 and len(tasks) > 1:
        from joblib import Parallel, delayed

        f1s = Parallel(n_jobs=jobs)(
            delayed(_fold_f1)(kind, combos[c], X, y, folds[f][0], folds[f][1], seed) for c, f in tasks
        )
    else:
        f1s = [_fold_f1(kind, combos[c], X, y, folds[f][0], folds[f][1], seed) for c, f in tasks]
    per_combo = np.array(f1s, dtype=float).reshape(len(combos), k)
    means = tuple(float(np.mean(row)) for row in per_combo)
    best = int(np.argmax(means))  # argmax returns the first maximum
    return GridSearchResult(kind, combos[best], means[best], tuple(combos), means)


def train_production(kind: str, best_params: dict, X_all, y_all, seed: int = 42, feature_names=(), jobs: int = 1) -> TrainedModel:
    return train(AlgorithmSpec(kind, best_params), X_all, y_all, seed, feature_names, tag="production", jobs=jobs)
