"""L2-regularised logistic regression and a Pegasos-style linear SVM."""
from __future__ import annotations

import numpy as np

from .._kernels import pegasos_epoch


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_and_grad(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, lam: float):
    """Mean log-loss plus lam/2 * |w|^2, with its gradient (dw, db)."""
    z = X @ w + b
    # log(1 + e^z) - y z, computed stably
    loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * lam * float(w @ w)
    r = sigmoid(z) - y
    return loss, X.T @ r / len(y) + lam * w, float(np.mean(r))


def fit_logistic(X, y, lam: float, learning_rate: float = 0.1, epochs: int = 500, tol: float = 1e-7):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.zeros(X.shape[1])
    b = 0.0
    prev = None
    for _ in range(int(epochs)):
        loss, gw, gb = logistic_loss_and_grad(w, b, X, y, lam)
        if prev is not None and abs(prev - loss) < tol:
            break
        prev = loss
        w = w - learning_rate * gw
        b = b - learning_rate * gb
    return w, b


def svm_objective(w: np.ndarray, b: float, X: np.ndarray, y_pm: np.ndarray, lam: float) -> float:
    """lam/2 * (|w|^2 + b^2) + mean hinge loss; labels in {-1, +1}."""
    margins = y_pm * (X @ w + b)
    return 0.5 * lam * (float(w @ w) + b * b) + float(np.mean(np.maximum(0.0, 1.0 - margins)))


def fit_svm(X, y, lam: float, epochs: int = 200, seed: int = 0, trace: list | None = None):
    """Per-sample Pegasos steps with step size 1/(lam * t), t counting steps.

    The bias rides along as a constant input feature, so it is regularised
    like the weights. Each epoch visits the rows in a fresh seeded order. The
    solution is the running average of all iterates; when ``trace`` is a list
    the objective of that average is appended after every epoch.
    """
    X = np.asarray(X, dtype=float)
    y_pm = np.where(np.asarray(y) > 0, 1.0, -1.0)
    Xa = np.ascontiguousarray(np.hstack([X, np.ones((X.shape[0], 1))]))
    w = np.zeros(Xa.shape[1])
    avg = np.zeros_like(w)
    rng = np.random.default_rng([seed, 0x5F3])
    t = 0
    for _ in range(int(epochs)):
        order = rng.permutation(len(y_pm)).astype(np.intp)
        t = pegasos_epoch(Xa, y_pm, float(lam), order, w, avg, t)
        if trace is not None:
            trace.append(svm_objective(avg[:-1], avg[-1], X, y_pm, lam))
    return avg[:-1].copy(), float(avg[-1])
