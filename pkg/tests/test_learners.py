import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refscout.dataset import fit_minmax
from refscout.learners import (
    DEFAULT_GRIDS,
    KINDS,
    AlgorithmSpec,
    DimensionMismatch,
    SingleClassData,
    TooFewInstances,
    TrainedModel,
    grid_search,
    predict,
    predict_many,
    stratified_kfold,
    train,
    train_production,
)
from refscout.learners.linear import fit_svm, logistic_loss_and_grad
from refscout.learners.tree import tree_arrays
from refscout.scoring import f1_score

from synthetic import separable_xy, xor_xy


def scaled_split(X, y, seed=0):
    idx = np.random.default_rng(seed).permutation(len(y))
    cut = int(0.8 * len(y))
    tr, te = idx[:cut], idx[cut:]
    sc = fit_minmax(X[tr])
    return sc.transform(X[tr]), y[tr], sc.transform(X[te]), y[te]


class TestSpec:
    def test_unknown_hyperparameter(self):
        with pytest.raises(ValueError, match="unknown hyperparameters"):
            AlgorithmSpec("DT", {"depth": 3})

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            AlgorithmSpec("KNN")

    def test_defaults_and_case(self):
        spec = AlgorithmSpec("rf", {"ntrees": 10})
        assert spec.kind == "RF"
        assert spec.params["ntrees"] == 10 and spec.params["max_features"] == "sqrt"

    def test_grids_use_known_keys(self):
        for kind, grid in DEFAULT_GRIDS.items():
            AlgorithmSpec(kind, {k: v[0] for k, v in grid.items()})


class TestTrainPredict:
    def test_dt_stump(self):
        X = np.array([[0.0], [1.0]])
        y = np.array([0, 1])
        model = train(AlgorithmSpec("DT"), X, y, seed=0)
        tree = model.params["tree"]
        assert tree["feature"][0] == 0 and tree["threshold"][0] == 0.5
        assert tree["feature"][1:] == [-1, -1]
        assert model.predict_many(X)[0].tolist() == [0, 1]

    def test_lr_zero_epochs(self):
        X = np.random.default_rng(1).random((20, 5))
        y = np.arange(20) % 2
        model = train(AlgorithmSpec("LR", {"epochs": 0}), X, y)
        assert model.params["weights"] == [0.0] * 5 and model.params["bias"] == 0.0
        assert (model.predict_many(X)[1] == 0.5).all()

    def test_nb_hand_computed(self):
        X = np.array([[0.0], [0.2], [1.0], [1.2]])
        y = np.array([0, 0, 1, 1])
        model = train(AlgorithmSpec("NB"), X, y)
        eps = 1e-9 * 0.26  # variance of all four values is 0.26
        var = 0.01 + eps  # each class: values 0.1 +- 0.1

        def lik(x, mu):
            return math.exp(-((x - mu) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var)

        pa, pb = 0.5 * lik(0.1, 0.1), 0.5 * lik(0.1, 1.1)
        label, score = predict(model, [0.1])
        assert label is False
        assert score == pytest.approx(pb / (pa + pb), rel=1e-9, abs=1e-300)

    def test_svm_zero_weights(self):
        spec = AlgorithmSpec("SVM")
        model = TrainedModel(spec, {"weights": [0.0, 0.0], "bias": 0.0}, 0, 2)
        assert predict(model, [3.0, -1.0]) == (True, 0.5)

    @pytest.mark.parametrize("kind", KINDS)
    def test_predict_is_pure(self, kind):
        X, y = separable_xy(100, seed=2)
        model = train(AlgorithmSpec(kind, {"ntrees": 5} if kind == "RF" else {}), X, y, seed=3)
        x = X[7]
        assert predict(model, x) == predict(model, x)
        a, b = predict_many(model, X), predict_many(model, X)
        assert np.array_equal(a[1], b[1])
        assert ((a[1] >= 0) & (a[1] <= 1)).all()

    def test_dimension_mismatch(self):
        X, y = separable_xy(50)
        model = train(AlgorithmSpec("NB"), X, y)
        with pytest.raises(DimensionMismatch):
            predict(model, X[0, :10])
        with pytest.raises(DimensionMismatch):
            model.predict_many(X[:, :60])

    def test_single_class(self):
        with pytest.raises(SingleClassData):
            train(AlgorithmSpec("DT"), np.zeros((4, 2)), np.ones(4, dtype=int))

    @pytest.mark.parametrize("kind", KINDS)
    def test_training_is_deterministic(self, kind):
        X, y = separable_xy(120, seed=4)
        spec = AlgorithmSpec(kind, {"ntrees": 8} if kind == "RF" else {})
        assert train(spec, X, y, seed=9).params == train(spec, X, y, seed=9).params

    def test_rf_parallel_matches_serial(self):
        X, y = separable_xy(120, seed=5)
        spec = AlgorithmSpec("RF", {"ntrees": 6})
        assert train(spec, X, y, seed=1, jobs=2).params == train(spec, X, y, seed=1, jobs=1).params

    def test_lr_mask_comes_from_training_rows(self):
        X, y = separable_xy(200, seed=6)
        model = train(AlgorithmSpec("LR", {"k_features": 5}), X, y)
        assert sum(model.mask) == 5
        assert model.mask[0] and model.mask[1]
        assert len(model.params["weights"]) == 5


@pytest.mark.parametrize("kind", KINDS)
def test_separable_data_f1(kind):
    X, y = separable_xy(500, seed=0)
    Xtr, ytr, Xte, yte = scaled_split(X, y)
    model = train(AlgorithmSpec(kind), Xtr, ytr, seed=42)
    assert f1_score(yte, model.predict_many(Xte)[0]) >= 0.95


def test_lr_gradient_matches_central_differences():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(40, 6))
    y = (rng.random(40) > 0.5).astype(float)
    h = 1e-6
    for _ in range(20):
        w = rng.normal(size=6)
        b = float(rng.normal())
        lam = float(rng.choice([0.001, 0.01, 0.1, 1.0]))
        _, gw, gb = logistic_loss_and_grad(w, b, X, y, lam)
        num = np.empty(7)
        for j in range(7):
            wp, wm, bp, bm = w.copy(), w.copy(), b, b
            if j < 6:
                wp[j] += h
                wm[j] -= h
            else:
                bp, bm = b + h, b - h
            num[j] = (logistic_loss_and_grad(wp, bp, X, y, lam)[0] - logistic_loss_and_grad(wm, bm, X, y, lam)[0]) / (2 * h)
        ana = np.append(gw, gb)
        rel = np.abs(ana - num) / np.maximum(np.abs(num), 1e-8)
        assert rel.max() < 1e-5


@pytest.mark.parametrize("lam", DEFAULT_GRIDS["SVM"]["lambda"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_svm_objective_non_increasing(lam, seed):
    X, y = separable_xy(500, seed=seed)
    X = fit_minmax(X).transform(X)
    trace = []
    fit_svm(X, y, lam, epochs=50, seed=seed, trace=trace)
    assert len(trace) == 50
    assert np.diff(trace).max() <= 1e-8


def _gini(y):
    if len(y) == 0:
        return 0.0
    p = y.mean()
    return 1 - p * p - (1 - p) * (1 - p)


@pytest.mark.parametrize("seed", range(10))
def test_dt_children_never_increase_impurity(seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 4, size=(60, 3)).astype(float)
    y = rng.integers(0, 2, 60)
    model = train(AlgorithmSpec("DT"), X, y)
    feature, threshold, left, right, _ = tree_arrays(model.params["tree"])
    stack = [(0, np.arange(60))]
    while stack:
        node, rows = stack.pop()
        if feature[node] < 0:
            continue
        go = X[rows, feature[node]] <= threshold[node]
        lrows, rrows = rows[go], rows[~go]
        weighted = (len(lrows) * _gini(y[lrows]) + len(rrows) * _gini(y[rrows])) / len(rows)
        assert weighted <= _gini(y[rows]) + 1e-12
        stack += [(left[node], lrows), (right[node], rrows)]


def test_rf_single_tree_equals_dt():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(8, 40))
        d = int(rng.integers(1, 6))
        X = rng.normal(size=(n, d)).round(1)
        y = rng.integers(0, 2, n)
        y[0], y[1] = 0, 1
        dt = train(AlgorithmSpec("DT"), X, y, seed=7)
        rf = train(AlgorithmSpec("RF", {"ntrees": 1, "bootstrap": False, "max_features": "all"}), X, y, seed=7)
        probe = rng.normal(size=(30, d)).round(1)
        assert np.array_equal(dt.predict_many(probe)[0], rf.predict_many(probe)[0])
        assert np.array_equal(dt.predict_many(X)[0], rf.predict_many(X)[0])


@settings(max_examples=50, derandomize=True, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=4, max_size=4), st.integers(0, 1000))
def test_nb_posteriors_sum_to_one(point, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(30, 4))
    y = np.arange(30) % 2
    model = train(AlgorithmSpec("NB"), X, y)
    post = model.posteriors([point])
    assert abs(post.sum() - 1.0) <= 1e-9


class TestKFold:
    def test_balanced_ten(self):
        y = np.array([1] * 10 + [0] * 10)
        for _, val in stratified_kfold(y, 10, seed=1):
            assert sorted(y[val].tolist()) == [0, 1]

    def test_twenty_ten(self):
        y = np.array([1] * 20 + [0] * 10)
        for _, val in stratified_kfold(y, 10, seed=1):
            assert sorted(y[val].tolist()) == [0, 1, 1]

    @settings(max_examples=60, derandomize=True)
    @given(st.integers(10, 40), st.integers(10, 40), st.integers(2, 10), st.integers(0, 99))
    def test_partition_property(self, pos, neg, k, seed):
        y = np.array([1] * pos + [0] * neg)
        folds = stratified_kfold(y, k, seed)
        vals = np.concatenate([v for _, v in folds])
        assert sorted(vals.tolist()) == list(range(len(y)))
        for label in (0, 1):
            counts = [int((y[v] == label).sum()) for _, v in folds]
            assert max(counts) - min(counts) <= 1
        for tr, val in folds:
            assert not set(tr) & set(val) and len(tr) + len(val) == len(y)
        assert [v.tolist() for _, v in folds] == [v.tolist() for _, v in stratified_kfold(y, k, seed)]

    def test_too_few(self):
        with pytest.raises(TooFewInstances):
            stratified_kfold(np.array([1] * 9 + [0] * 20), 10, seed=0)


class TestGridSearch:
    def test_singleton_space(self):
        X, y = separable_xy(60)
        res = grid_search("DT", {"max_depth": [4]}, X, y, k=3, seed=0)
        assert res.best_params == {"max_depth": 4}
        assert res.combinations == ({"max_depth": 4},)

    def test_depth_three_beats_stump_on_xor(self):
        X, y = xor_xy(10)
        # best F1 of any stump, by enumerating feature, threshold and leaf labels
        best_stump = 0.0
        for f in (0, 1):
            go_left = X[:, f] <= 0.5
            for lab_left in (0, 1):
                for lab_right in (0, 1):
                    pred = np.where(go_left, lab_left, lab_right)
                    best_stump = max(best_stump, f1_score(y, pred))
        assert best_stump == pytest.approx(2 / 3)
        res = grid_search("DT", {"max_depth": [1, 3]}, X, y, k=5, seed=0)
        assert res.scores[0] <= best_stump + 1e-12
        assert res.scores[1] == 1.0
        assert res.best_params == {"max_depth": 3}

    def test_ties_go_to_first_combination(self):
        X, y = separable_xy(100)
        res = grid_search("DT", {"max_depth": [6, 12, None]}, X, y, k=5, seed=0)
        assert res.scores[0] == max(res.scores)
        assert res.best_params == {"max_depth": 6}

    def test_failing_combination_scores_zero(self, caplog):
        X, y = separable_xy(60)
        res = grid_search("RF", {"ntrees": [0, 3]}, X, y, k=3, seed=0)
        assert res.scores[0] == 0.0
        assert res.best_params == {"ntrees": 3}
        assert "failed" in caplog.text

    def test_deterministic_and_parallel_safe(self):
        X, y = separable_xy(80, seed=3)
        a = grid_search("LR", None, X, y, k=4, seed=5)
        b = grid_search("LR", None, X, y, k=4, seed=5)
        c = grid_search("LR", None, X, y, k=4, seed=5, jobs=2)
        assert a == b == c

    def test_unknown_key_rejected_early(self):
        X, y = separable_xy(60)
        with pytest.raises(ValueError):
            grid_search("NB", {"alpha": [1.0]}, X, y, k=3)


def test_train_production():
    from refscout.model_store import ModelBundle, dumps_bundle

    X, y = separable_xy(100)
    sc = fit_minmax(X)
    m1 = train_production("DT", {"max_depth": 3}, sc.transform(X), y, seed=1)
    m2 = train_production("DT", {"max_depth": 3}, sc.transform(X), y, seed=1)
    assert m1.tag == "production"
    assert predict(m1, sc.transform(X[:1])[0]) is not None
    assert dumps_bundle(ModelBundle(m1, sc, tag="production")) == dumps_bundle(ModelBundle(m2, sc, tag="production"))
