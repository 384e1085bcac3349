"""CART decision tree (Gini) and a bagged random forest built on it."""
from __future__ import annotations

import math

import numpy as np

from .._kernels import best_split, tree_apply


def _node_score(n: int, p: float) -> float:
    # n times Gini impurity, in the same arithmetic as the split kernels
    return n - (p * p + (n - p) * (n - p)) / n


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    min_samples_leaf: int = 1,
    max_features: int | None = None,
    rng: np.random.Generator | None = None,
) -> dict[str, list]:
    """Grow one tree; returns flat node arrays in depth-first order.

    ``feature[i] == -1`` marks a leaf whose ``value[i]`` is the fraction of
    positive training rows that reached it. Rows with ``x <= threshold`` go
    left. Splits with zero gain are accepted, so XOR-like targets can still
    be separated below the root.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    d = X.shape[1]
    all_features = np.arange(d, dtype=np.intp)
    nodes = {"feature": [], "threshold": [], "left": [], "right": [], "value": []}

    def new_node() -> int:
        for key in nodes:
            nodes[key].append(-1 if key in ("feature", "left", "right") else 0.0)
        return len(nodes["feature"]) - 1

    stack = [(np.arange(X.shape[0], dtype=np.intp), 0, new_node())]
    while stack:
        idx, depth, node = stack.pop()
        n = idx.shape[0]
        pos = float(y[idx].sum())
        nodes["value"][node] = pos / n
        if pos == 0 or pos == n or n < min_samples_split or (max_depth is not None and depth >= max_depth):
            continue
        if max_features is None or max_features >= d:
            features = all_features
        else:
            features = np.sort(rng.permutation(d)[:max_features]).astype(np.intp)
        f, thr, score = best_split(X, y, idx, features, min_samples_leaf)
        if f < 0 or score > _node_score(n, pos):
            continue
        go_left = X[idx, f] <= thr
        left, right = new_node(), new_node()
        nodes["feature"][node] = int(f)
        nodes["threshold"][node] = float(thr)
        nodes["left"][node] = left
        nodes["right"][node] = right
        # right pushed first so the left subtree is expanded first
        stack.append((idx[~go_left], depth + 1, right))
        stack.append((idx[go_left], depth + 1, left))
    return nodes


def tree_arrays(tree: dict) -> tuple[np.ndarray, ...]:
    return (
        np.asarray(tree["feature"], dtype=np.int64),
        np.asarray(tree["threshold"], dtype=np.float64),
        np.asarray(tree["left"], dtype=np.int64),
        np.asarray(tree["right"], dtype=np.int64),
        np.asarray(tree["value"], dtype=np.float64),
    )


def tree_scores(tree: dict, X: np.ndarray) -> np.ndarray:
    feature, threshold, left, right, value = tree_arrays(tree)
    X = np.ascontiguousarray(X, dtype=np.float64)
    return value[tree_apply(X, feature, threshold, left, right)]


def resolve_max_features(setting, d: int) -> int | None:
    if setting in (None, "all"):
        return None
    if setting == "sqrt":
        return max(1, int(math.sqrt(d)))
    if isinstance(setting, (int, np.integer)) and setting >= 1:
        return int(setting)
    raise ValueError(f"max_features must be 'sqrt', 'all' or a positive int, got {setting!r}")


def grow_forest_tree(X, y, seed: int, tree_index: int, params: dict) -> dict:
    rng = np.random.default_rng([seed, tree_index])
    n = X.shape[0]
    rows = rng.integers(0, n, n) if params["bootstrap"] else np.arange(n)
    return grow_tree(
        X[rows],
        y[rows],
        max_depth=params["max_depth"],
        min_samples_split=params["min_samples_split"],
        min_samples_leaf=params["min_samples_leaf"],
        max_features=resolve_max_features(params["max_features"], X.shape[1]),
        rng=rng,
    )


def forest_scores(trees: list[dict], X: np.ndarray) -> np.ndarray:
    """Fraction of trees voting positive."""
    votes = np.zeros(X.shape[0])
    for tree in trees:
        votes += tree_scores(tree, X) >= 0.5
    return votes / len(trees)
