# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Gini split search, tree traversal, Pegasos epochs."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def best_split(const double[:, ::1] X, const long long[::1] y, cnp.intp_t[::1] idx,
               cnp.intp_t[::1] features, Py_ssize_t min_leaf):
    """Best Gini split over ``features`` for the rows ``idx``.

    Returns (feature, threshold, score) where score is n times the weighted
    child impurity; feature is -1 when no admissible split exists.
    """
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t nf = features.shape[0]
    cdef Py_ssize_t fi, i, f, nl, nr
    cdef double pl, pr, ptot, score, best_score = 0.0, best_thr = 0.0, a, b, thr
    cdef Py_ssize_t best_f = -1
    cdef double[::1] vals = np.empty(n, dtype=np.float64)
    cdef double[::1] sv = np.empty(n, dtype=np.float64)
    cdef double[::1] sy = np.empty(n, dtype=np.float64)
    cdef cnp.intp_t[::1] order
    ptot = 0.0
    for i in range(n):
        ptot += y[idx[i]]
    for fi in range(nf):
        f = features[fi]
        for i in range(n):
            vals[i] = X[idx[i], f]
        order = np.argsort(vals, kind="stable")
        for i in range(n):
            sv[i] = vals[order[i]]
            sy[i] = y[idx[order[i]]]
        pl = 0.0
        for i in range(n - 1):
            pl += sy[i]
            if sv[i] == sv[i + 1]:
                continue
            nl = i + 1
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            pr = ptot - pl
            a = pl * pl + (nl - pl) * (nl - pl)
            b = pr * pr + (nr - pr) * (nr - pr)
            score = nl - a / nl + nr - b / nr
            if best_f < 0 or score < best_score:
                thr = (sv[i] + sv[i + 1]) / 2.0
                if thr >= sv[i + 1]:
                    thr = sv[i]
                best_f = f
                best_score = score
                best_thr = thr
    return best_f, best_thr, best_score


def tree_apply(const double[:, ::1] X, const long long[::1] feature, const double[::1] threshold,
               const long long[::1] left, const long long[::1] right):
    """Leaf node index reached by every row of X."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i
    cdef long long node
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] res = out
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        res[i] = node
    return out


def pegasos_epoch(const double[:, ::1] X, const double[::1] y, double lam,
                  cnp.intp_t[::1] order, double[::1] w, double[::1] avg, long long t):
    """One pass of per-sample Pegasos steps over ``order``; updates w and avg in place.

    Returns the step counter after the pass.
    """
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k, j, i
    cdef double margin, eta, c
    for k in range(order.shape[0]):
        i = order[k]
        t += 1
        eta = 1.0 / (lam * t)
        margin = 0.0
        for j in range(d):
            margin = margin + X[i, j] * w[j]
        c = y[i] if y[i] * margin < 1.0 else 0.0
        for j in range(d):
            w[j] = w[j] - eta * (lam * w[j] - c * X[i, j])
            avg[j] = avg[j] + (w[j] - avg[j]) / t
    return t
