"""Time the compiled kernels against the pure fallback.

    python3 benchmarks/bench_kernels.py [--rows 2000] [--repeat 5]

Also checks that both backends return identical results on the timed inputs.
"""
import argparse
import time

import numpy as np

from refscout._kernels import _fallback

try:
    from refscout._kernels import _core
except ImportError:
    _core = None


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--features", type=int, default=61)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _core is None:
        raise SystemExit("compiled core not built; run: pip install -e . --no-build-isolation")

    rng = np.random.default_rng(0)
    X = np.ascontiguousarray(rng.random((args.rows, args.features)))
    y = (X[:, 0] + X[:, 1] > 1).astype(np.int64)
    idx = np.arange(args.rows, dtype=np.intp)
    feats = np.arange(args.features, dtype=np.intp)

    # a small complete tree for the traversal kernel
    depth = 8
    n_inner = 2**depth - 1
    feature = np.concatenate([rng.integers(0, args.features, n_inner), -np.ones(n_inner + 1, dtype=np.int64)])
    threshold = np.concatenate([rng.random(n_inner), np.zeros(n_inner + 1)])
    left = np.concatenate([2 * np.arange(n_inner) + 1, -np.ones(n_inner + 1, dtype=np.int64)]).astype(np.int64)
    right = np.concatenate([2 * np.arange(n_inner) + 2, -np.ones(n_inner + 1, dtype=np.int64)]).astype(np.int64)

    y_pm = np.where(y > 0, 1.0, -1.0)
    order = rng.permutation(args.rows).astype(np.intp)

    def pegasos(mod):
        def run():
            w = np.zeros(args.features)
            avg = np.zeros(args.features)
            mod.pegasos_epoch(X, y_pm, 1e-3, order, w, avg, 0)
            return avg
        return run

    cases = {
        "best_split": lambda mod: (lambda: mod.best_split(X, y, idx, feats, 1)),
        "tree_apply": lambda mod: (lambda: mod.tree_apply(X, feature, threshold, left, right)),
        "pegasos_epoch": pegasos,
    }
    print(f"{args.rows} rows x {args.features} features, best of {args.repeat}")
    print(f"{'kernel':<15}{'cython s':>12}{'python s':>12}{'speedup':>10}  identical")
    for name, make in cases.items():
        tc, oc = _best(make(_core), args.repeat)
        tp, op = _best(make(_fallback), args.repeat)
        same = np.array_equal(np.asarray(oc), np.asarray(op))
        print(f"{name:<15}{tc:>12.5f}{tp:>12.5f}{tp / tc:>9.1f}x  {same}")


if __name__ == "__main__":
    main()
