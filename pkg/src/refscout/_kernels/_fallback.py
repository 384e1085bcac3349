"""Pure NumPy/Python versions of the compiled kernels, used when the extension is absent."""
import numpy as np


def best_split(X, y, idx, features, min_leaf):
    n = idx.shape[0]
    best_f, best_thr, best_score = -1, 0.0, 0.0
    if n < 2:
        return best_f, best_thr, best_score
    rows = X[idx]
    labels = y[idx].astype(np.float64)
    ptot = float(labels.sum())
    nl = np.arange(1, n, dtype=np.float64)
    nr = n - nl
    for f in features:
        vals = rows[:, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        pl = np.cumsum(labels[order])[:-1]
        ok = (sv[:-1] != sv[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
        if not ok.any():
            continue
        pr = ptot - pl
        a = pl * pl + (nl - pl) * (nl - pl)
        b = pr * pr + (nr - pr) * (nr - pr)
        score = nl - a / nl + nr - b / nr
        cand = np.flatnonzero(ok)
        i = cand[np.argmin(score[cand])]
        if best_f < 0 or score[i] < best_score:
            thr = (sv[i] + sv[i + 1]) / 2.0
            if thr >= sv[i + 1]:
                thr = sv[i]
            best_f, best_thr, best_score = int(f), float(thr), float(score[i])
    return best_f, best_thr, best_score


def tree_apply(X, feature, threshold, left, right):
    node = np.zeros(X.shape[0], dtype=np.int64)
    rows = np.arange(X.shape[0])
    active = feature[node] >= 0
    while active.any():
        r = rows[active]
        cur = node[r]
        go_left = X[r, feature[cur]] <= threshold[cur]
        node[r] = np.where(go_left, left[cur], right[cur])
        active = feature[node] >= 0
    return node


def pegasos_epoch(X, y, lam, order, w, avg, t):
    # plain float arithmetic in the same order as the compiled loop, so both
    # backends produce bit-identical weights
    d = X.shape[1]
    rows = X.tolist()
    ys = y.tolist()
    wl = w.tolist()
    al = avg.tolist()
    for i in order.tolist():
        t += 1
        eta = 1.0 / (lam * t)
        x = rows[i]
        margin = 0.0
        for j in range(d):
            margin = margin + x[j] * wl[j]
        c = ys[i] if ys[i] * margin < 1.0 else 0.0
        for j in range(d):
            wl[j] = wl[j] - eta * (lam * wl[j] - c * x[j])
            al[j] = al[j] + (wl[j] - al[j]) / t
    w[:] = wl
    avg[:] = al
    return t
