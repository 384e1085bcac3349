"""Model evaluation: test-set reports, permutation importance, cross-project runs, summaries."""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Scaler, fit_minmax
from .learners import AlgorithmSpec, GridSearchResult, TrainedModel, grid_search, normalize_kind, train
from .metrics import FEATURE_NAMES
from .scoring import ConfusionMatrix, EvaluationReport, f1_score

log = logging.getLogger(__name__)

__all__ = [
    "ConfusionMatrix", "EvaluationReport", "ImportanceReport", "DistributionSummary", "FittedPipeline",
    "LooResult", "TooFewProjects", "EmptyGroup", "evaluate", "permutation_importance", "fit_pipeline",
    "leave_one_project_out", "cross_corpus_evaluate", "distribution_summary", "METRIC_SHORTLIST",
]

REPORT_COLUMNS = ("tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1")
GROUPS = ("refactored", "not-refactored")
METRIC_SHORTLIST = {
    "loc": "Loc", "rfc": "Rfc", "wmc": "Wmc", "uw": "UniqueWordsQty",
    "cbo": "Cbo", "tcc": "TCC", "lcc": "LCC",
}


class TooFewProjects(ValueError):
    pass


class EmptyGroup(ValueError):
    pass


@dataclass(frozen=True)
class FittedPipeline:
    """A scaler plus the model trained on its output; predicts from raw vectors."""

    scaler: Scaler
    model: TrainedModel
    grid: GridSearchResult | None = None

    def predict_many(self, X_raw):
        return self.model.predict_many(self.scaler.transform(np.asarray(X_raw, dtype=float)))


def evaluate(model, X, y) -> EvaluationReport:
    """``model`` is anything with ``predict_many`` (a TrainedModel, pipeline or bundle)."""
    y = np.asarray(y)
    if len(y) == 0:
        raise ValueError("test set is empty")
    labels, _ = model.predict_many(X)
    return EvaluationReport.from_confusion(ConfusionMatrix.from_labels(y, labels))


# ------------------------------------------------------------- importance


@dataclass(frozen=True)
class ImportanceReport:
    feature_names: tuple[str, ...]
    baseline_f1: float
    mean_drop: tuple[float, ...]
    std_drop: tuple[float, ...]
    repeats: int

    def ranking(self) -> list[int]:
        """Feature indices by mean drop, largest first; ties keep index order."""
        return sorted(range(len(self.mean_drop)), key=lambda j: (-self.mean_drop[j], j))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "feature", "mean_drop", "std_drop", "repeats"])
        for rank, j in enumerate(self.ranking(), 1):
            w.writerow([rank, self.feature_names[j], repr(self.mean_drop[j]), repr(self.std_drop[j]), self.repeats])
        return buf.getvalue()


def _feature_drops(model, X, y, j, baseline, repeats, seed) -> np.ndarray:
    rng = np.random.default_rng([seed, j])
    drops = np.empty(repeats)
    Xp = X.copy()
    for r in range(repeats):
        Xp[:, j] = rng.permutation(X[:, j])
        labels, _ = model.predict_many(Xp)
        drops[r] = baseline - f1_score(y, labels)
    return drops


def permutation_importance(model, X, y, repeats: int = 50, seed: int = 42, feature_names=None, jobs: int = 1) -> ImportanceReport:
    """F1 drop when each column is shuffled, ``repeats`` times per column.

    Column j draws its permutations from ``default_rng([seed, j])``, so the
    report does not depend on how columns are spread over workers.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if len(y) == 0:
        raise ValueError("validation set is empty")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    names = tuple(feature_names) if feature_names is not None else tuple(f"f{j}" for j in range(X.shape[1]))
    baseline = f1_score(y, model.predict_many(X)[0])
    cols = range(X.shape[1])
    if jobs != 1 and X.shape[1] > 1:
        from joblib import Parallel, delayed

        per = Parallel(n_jobs=jobs)(delayed(_feature_drops)(model, X, y, j, baseline, repeats, seed) for j in cols)
    else:
        per = [_feature_drops(model, X, y, j, baseline, repeats, seed) for j in cols]
    means = tuple(float(d.mean()) for d in per)
    stds = tuple(float(d.std(ddof=1)) if repeats > 1 else 0.0 for d in per)
    return ImportanceReport(names, float(baseline), means, stds, int(repeats))


# ------------------------------------------------------- training recipes


def fit_pipeline(kind: str, train_set: Dataset, seed: int = 42, k: int = 10, space=None, jobs: int = 1) -> FittedPipeline:
    """Scaler fit, grid search and a final fit, all on ``train_set`` alone."""
    kind = normalize_kind(kind)
    X, y = train_set.X, train_set.y
    scaler = fit_minmax(X)
    Xs = scaler.transform(X)
    grid = grid_search(kind, space, Xs, y, k=k, seed=seed, jobs=jobs)
    model = train(AlgorithmSpec(kind, grid.best_params), Xs, y, seed, train_set.feature_names, jobs=jobs)
    return FittedPipeline(scaler, model, grid)


@dataclass(frozen=True)
class LooResult:
    projects: tuple[str, ...]
    reports: tuple[EvaluationReport, ...]
    pipelines: tuple[FittedPipeline, ...]

    def mean(self) -> dict[str, float]:
        rows = [r.as_row() for r in self.reports]
        return {c: float(np.mean([row[c] for row in rows])) for c in REPORT_COLUMNS}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("project", *REPORT_COLUMNS))
        for project, report in zip(self.projects, self.reports):
            row = report.as_row()
            w.writerow((project, *(_fmt(row[c]) for c in REPORT_COLUMNS)))
        mean = self.mean()
        w.writerow(("mean", *(_fmt(mean[c]) for c in REPORT_COLUMNS)))
        return buf.getvalue()


def _fmt(v) -> str:
    return str(v) if isinstance(v, (int, np.integer)) else repr(float(v))


def leave_one_project_out(dataset: Dataset, kind: str, k: int = 10, seed: int = 42, space=None, jobs: int = 1) -> LooResult:
    projects = dataset.projects
    if len(projects) < 2:
        raise TooFewProjects(f"need at least 2 projects, found {len(projects)}")
    reports, pipelines = [], []
    for project in projects:
        held_out = dataset.where_project(project)
        rest = dataset.where_project(project, keep=False)
        pipe = fit_pipeline(kind, rest, seed=seed, k=k, space=space, jobs=jobs)
        reports.append(evaluate(pipe, held_out.X, held_out.y))
        pipelines.append(pipe)
        log.info("held out %s: f1 %.4f", project, reports[-1].f1)
    return LooResult(tuple(projects), tuple(reports), tuple(pipelines))


def cross_corpus_evaluate(train_corpus: Dataset, test_corpus: Dataset, kind: str, seed: int = 42, k: int = 10, space=None, jobs: int = 1):
    """Fit on one corpus, score every row of the other. Returns (report, pipeline)."""
    if len(test_corpus) == 0:
        raise ValueError("test corpus is empty")
    pipe = fit_pipeline(kind, train_corpus, seed=seed, k=k, space=space, jobs=jobs)
    return evaluate(pipe, test_corpus.X, test_corpus.y), pipe


def reports_to_csv(rows: list[tuple[str, EvaluationReport]], key: str = "algorithm") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((key, *REPORT_COLUMNS))
    for name, report in rows:
        row = report.as_row()
        w.writerow((name, *(_fmt(row[c]) for c in REPORT_COLUMNS)))
    return buf.getvalue()


def format_table(header, rows) -> str:
    """Fixed-width text table for terminals."""
    cells = [list(map(str, header))] + [[f"{v:.4f}" if isinstance(v, float) else str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# ----------------------------------------------------------- distributions


@dataclass(frozen=True)
class DistributionSummary:
    metric: str
    group: str
    n: int
    median: float
    q1: float
    q3: float


def resolve_metric(name: str) -> str:
    if name in FEATURE_NAMES:
        return name
    short = name.lower()
    if short in METRIC_SHORTLIST:
        return METRIC_SHORTLIST[short]
    raise KeyError(f"unknown metric {name!r}")


def distribution_summary(values, metric: str, group: str) -> DistributionSummary:
    """Median and quartiles with linear interpolation between closest ranks."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise EmptyGroup(f"no values for {metric} in group {group}")
    q1, med, q3 = np.percentile(v, [25, 50, 75], method="linear")
    return DistributionSummary(metric, group, int(v.size), float(med), float(q1), float(q3))


def dataset_distributions(dataset: Dataset, metrics) -> list[DistributionSummary]:
    X, y = dataset.X, dataset.y
    out = []
    for name in metrics:
        feature = resolve_metric(name)
        col = X[:, dataset.feature_names.index(feature)]
        for group, label in zip(GROUPS, (1, 0)):
            out.append(distribution_summary(col[y == label], feature, group))
    return out


def distributions_to_csv(summaries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("metric", "group", "n", "median", "q1", "q3"))
    for s in summaries:
        w.writerow((s.metric, s.group, s.n, _fmt(s.median), _fmt(s.q1), _fmt(s.q3)))
    return buf.getvalue()
