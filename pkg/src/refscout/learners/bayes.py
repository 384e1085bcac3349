"""Gaussian naive Bayes."""
from __future__ import annotations

import numpy as np

# used only when every training feature is constant, so that variances stay positive
_VARIANCE_FLOOR = 1e-12


def fit_gaussian_nb(X, y, var_smoothing: float = 1e-9):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    eps = var_smoothing * float(X.var(axis=0).max()) if X.size else 0.0
    if eps <= 0.0:
        eps = _VARIANCE_FLOOR
    means, variances, priors = [], [], []
    for label in (0, 1):
        rows = X[y == label]
        means.append(rows.mean(axis=0))
        variances.append(rows.var(axis=0) + eps)
        priors.append(len(rows) / len(y))
    return np.array(means), np.array(variances), np.array(priors)


def nb_posteriors(means, variances, priors, X) -> np.ndarray:
    """Rows of [P(label 0 | x), P(label 1 | x)]."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    joint = np.empty((X.shape[0], 2))
    for c in (0, 1):
        ll = -0.5 * (np.log(2.0 * np.pi * variances[c]) + (X - means[c]) ** 2 / variances[c])
        joint[:, c] = np.log(priors[c]) + ll.sum(axis=1)
    joint -= joint.max(axis=1, keepdims=True)
    p = np.exp(joint)
    return p / p.sum(axis=1, keepdims=True)
