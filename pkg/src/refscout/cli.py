"""Command-line entry point: ``refscout <subcommand> ...``.

Exit status is 0 on success, 1 when the run fails on bad data or paths and
2 on usage errors. Diagnostics go to stderr; results go to files or stdout.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .dataset import (
    Dataset, deduplicate, fit_minmax, format_number, read_dataset, stratified_split, write_dataset,
)
from .evaluation import (
    METRIC_SHORTLIST,
    REPORT_COLUMNS,
    cross_corpus_evaluate,
    dataset_distributions,
    distributions_to_csv,
    evaluate,
    fit_pipeline,
    format_table,
    leave_one_project_out,
    permutation_importance,
    reports_to_csv,
)
from .javamodel import parse_compilation_unit
from .learners import KINDS, normalize_kind, train_production
from .metrics import FEATURE_NAMES, compute_class_metrics, compute_method_metrics, feature_vector, method_feature_rows
from .miner import BranchNotFound, GitError, MiningConfig, RepoNotFound, mine_repositories
from .model_store import ModelBundle, dataset_hash, load_bundle, save_bundle

log = logging.getLogger("refscout")

LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
ALGO_CHOICES = [k.lower() for k in KINDS] + ["all"]
OPERATIONAL_ERRORS = (OSError, ValueError, SyntaxError, KeyError, RepoNotFound, BranchNotFound, GitError)


class CliError(Exception):
    """An operational failure with a message meant for the user."""


# ----------------------------------------------------------------- helpers


def _setup_logging(verbose: bool) -> None:
    env = os.environ.get("REFSCOUT_LOG", "").strip().lower()
    level = LOG_LEVELS.get(env, logging.WARNING)
    if verbose and level > logging.INFO:
        level = logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)
    if env and env not in LOG_LEVELS:
        log.warning("ignoring REFSCOUT_LOG=%s; expected one of %s", env, ",".join(LOG_LEVELS))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _load_dataset(path: str) -> Dataset:
    return read_dataset(path)


def _timestamp(args) -> str | None:
    if args.reproducible:
        return None
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _algorithms(choice: str) -> list[str]:
    return list(KINDS) if choice == "all" else [normalize_kind(choice)]


def _read_project_map(path: str) -> dict[str, str]:
    mapping = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise CliError(f"{path}: expected 'repository,project' rows, got {row!r}")
            mapping[str(Path(row[0]).resolve())] = row[1].strip()
    return mapping


# ------------------------------------------------------------- subcommands


def cmd_mine(args) -> int:
    mapping = _read_project_map(args.project_map) if args.project_map else {}
    jobs_spec = []
    for repo in args.repos:
        project = mapping.get(str(Path(repo).resolve()), "")
        jobs_spec.append((repo, MiningConfig(args.s, args.branch, project)))
    rows = mine_repositories(jobs_spec, jobs=args.jobs)
    ds = Dataset(rows, FEATURE_NAMES, {"s_threshold": str(args.s), "branch": args.branch})
    write_dataset(args.out, ds)
    neg, pos = ds.class_counts()
    print(f"mined {len(ds)} instances ({pos} positive, {neg} negative) into {args.out}", file=sys.stderr)
    return 0


def _number(v):
    return int(v) if float(v).is_integer() else float(v)


def cmd_metrics_dump(args) -> int:
    code = parse_compilation_unit(Path(args.file).read_bytes(), args.file)
    if args.json:
        doc = {}
        for cls in code.classes:
            methods = {m.signature: {k: _number(v) for k, v in compute_method_metrics(m, cls).items()}
                       for m in cls.methods}
            doc[cls.qualified_name] = {
                "class": {k: _number(v) for k, v in compute_class_metrics(cls).items()}, "methods": methods,
            }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
        return 0
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(("class", "method", *FEATURE_NAMES))
    for cls, method, vec in method_feature_rows(code):
        out.writerow((cls.qualified_name, method.signature, *(format_number(v) for v in vec)))
    return 0


def cmd_train(args) -> int:
    data = deduplicate(_load_dataset(args.dataset))
    train_set, test_set = stratified_split(data, args.test_fraction, args.seed)
    log.info("train %d rows, test %d rows", len(train_set), len(test_set))
    if args.train_out:
        write_dataset(args.train_out, Dataset(train_set.instances, FEATURE_NAMES, {**data.metadata, "split": "train"}))
    if args.test_out:
        write_dataset(args.test_out, Dataset(test_set.instances, FEATURE_NAMES, {**data.metadata, "split": "test"}))

    results = []
    for kind in _algorithms(args.algo):
        pipe = fit_pipeline(kind, train_set, seed=args.seed, k=args.k, jobs=args.jobs)
        report = evaluate(pipe, test_set.X, test_set.y)
        log.info("%s: cv f1 %.4f, held-out f1 %.4f", kind, pipe.grid.best_score, report.f1)
        results.append((kind, pipe, report))
    # first algorithm (in RF, DT, LR, SVM, NB order) with the best held-out F1
    top = max(r[2].f1 for r in results)
    best_kind, best_pipe, best_report = next(r for r in results if r[2].f1 == top)

    scaler = fit_minmax(data.X)
    model = train_production(
        best_kind, best_pipe.grid.best_params, scaler.transform(data.X), data.y, args.seed, FEATURE_NAMES, jobs=args.jobs
    )
    bundle = ModelBundle(
        model, scaler, FEATURE_NAMES, dataset_hash(data), "production", _timestamp(args),
        {"held_out_f1": best_report.f1, "cv_f1": best_pipe.grid.best_score},
    )
    save_bundle(bundle, args.out)

    header = ("algorithm", "cv_f1", *REPORT_COLUMNS, "hyperparameters", "selected")
    rows = []
    for kind, pipe, report in results:
        r = report.as_row()
        rows.append((kind, pipe.grid.best_score, *(r[c] for c in REPORT_COLUMNS),
                     json.dumps(pipe.grid.best_params, sort_keys=True), "yes" if kind == best_kind else "no"))
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    print(format_table(header[:-2] + ("selected",), [row[:-2] + (row[-1],) for row in rows]))
    print(f"saved {best_kind} production model to {args.out}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    bundle = load_bundle(args.model)
    data = _load_dataset(args.dataset)
    report = evaluate(bundle, data.X, data.y)
    _emit(reports_to_csv([(bundle.kind, report)]), args.out)
    if args.out:
        r = report.as_row()
        print(format_table(("algorithm", *REPORT_COLUMNS), [(bundle.kind, *(r[c] for c in REPORT_COLUMNS))]))
    return 0


def cmd_cross(args) -> int:
    train_set = deduplicate(_load_dataset(args.train))
    test_set = _load_dataset(args.test)
    rows = []
    for kind in _algorithms(args.algo):
        report, _ = cross_corpus_evaluate(train_set, test_set, kind, seed=args.seed, k=args.k, jobs=args.jobs)
        rows.append((kind, report))
    _emit(reports_to_csv(rows), args.out)
    if args.out:
        print(format_table(("algorithm", *REPORT_COLUMNS),
                           [(k, *(r.as_row()[c] for c in REPORT_COLUMNS)) for k, r in rows]))
    return 0


def cmd_loo(args) -> int:
    data = deduplicate(_load_dataset(args.dataset))
    kinds = _algorithms(args.algo)
    chunks = []
    for kind in kinds:
        result = leave_one_project_out(data, kind, k=args.k, seed=args.seed, jobs=args.jobs)
        text = result.to_csv()
        if len(kinds) > 1:
            lines = text.splitlines()
            text = "\n".join(["algorithm," + lines[0]] + [f"{kind},{ln}" for ln in lines[1:]]) + "\n"
            if chunks:
                text = text.split("\n", 1)[1]
        chunks.append(text)
        if args.out:
            mean = result.mean()
            table = [(p, *(r.as_row()[c] for c in REPORT_COLUMNS)) for p, r in zip(result.projects, result.reports)]
            table.append(("mean", *(mean[c] for c in REPORT_COLUMNS)))
            print(f"{kind}\n" + format_table(("project", *REPORT_COLUMNS), table))
    _emit("".join(chunks), args.out)
    return 0


def cmd_importance(args) -> int:
    bundle = load_bundle(args.model)
    data = _load_dataset(args.dataset)
    report = permutation_importance(bundle, data.X, data.y, args.repeats, args.seed, bundle.feature_names, args.jobs)
    _emit(report.to_csv(), args.out)
    if args.out:
        top = report.ranking()[: args.top]
        print(format_table(("rank", "feature", "mean_drop", "std_drop"),
                           [(i + 1, report.feature_names[j], report.mean_drop[j], report.std_drop[j])
                            for i, j in enumerate(top)]))
    return 0


def cmd_predict(args) -> int:
    bundle = load_bundle(args.model)
    code = parse_compilation_unit(Path(args.file).read_bytes(), args.file)
    rows, names = [], []
    for cls in code.classes:
        cm = compute_class_metrics(cls)
        for method in cls.methods:
            if args.method and method.signature != args.method and method.name != args.method:
                continue
            rows.append(feature_vector(cm, compute_method_metrics(method, cls)))
            names.append((cls.qualified_name, method.signature))
    if not rows:
        what = f"method {args.method!r}" if args.method else "methods"
        raise CliError(f"{args.file}: no {what} found")
    labels, scores = bundle.predict_many(rows)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(("class", "method", "extract_method", "score"))
    for (cls_name, sig), label, score in zip(names, labels, scores):
        out.writerow((cls_name, sig, "yes" if label else "no", f"{score:.6f}"))
    return 0


def cmd_report_distributions(args) -> int:
    data = _load_dataset(args.dataset)
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    _emit(distributions_to_csv(dataset_distributions(data, metrics)), args.out)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed (default 42)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (default: all cores)")
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--reproducible", action="store_true", default=argparse.SUPPRESS,
                        help="omit timestamps so repeated runs write identical files")

    parser = argparse.ArgumentParser(prog="refscout", description="Extract Method recommendation pipeline.")
    parser.add_argument("--version", action="version", version=f"refscout {__version__}")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--verbose", "-v", action="store_true")
    parser.add_argument("--reproducible", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("mine", parents=[common], help="mine git repositories into a dataset CSV")
    p.add_argument("repos", nargs="+", metavar="repo")
    p.add_argument("--out", required=True)
    p.add_argument("--s", type=int, default=20, help="stability threshold in commits (default 20)")
    p.add_argument("--branch", default="HEAD")
    p.add_argument("--project-map", help="CSV of repository,project rows")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("metrics", help="metric utilities")
    msub = p.add_subparsers(dest="metrics_command", metavar="action")
    msub.required = True
    d = msub.add_parser("dump", parents=[common], help="print the 61 features of every method in a Java file")
    d.add_argument("file")
    d.add_argument("--json", action="store_true", help="nested class/method JSON instead of CSV rows")
    d.set_defaults(func=cmd_metrics_dump)

    p = sub.add_parser("train", parents=[common], help="grid-search, evaluate and save a production model")
    p.add_argument("--dataset", required=True)
    p.add_argument("--algo", choices=ALGO_CHOICES, default="all", type=str.lower)
    p.add_argument("--out", required=True, help="bundle path")
    p.add_argument("--report", help="CSV with one row per algorithm")
    p.add_argument("--k", type=int, default=10, help="cross-validation folds")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--train-out", help="write the training split here")
    p.add_argument("--test-out", help="write the held-out split here")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="score a bundle on a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("cross", parents=[common], help="train on one corpus, test on another")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--algo", choices=ALGO_CHOICES, default="rf", type=str.lower)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cross)

    p = sub.add_parser("loo", parents=[common], help="leave-one-project-out evaluation")
    p.add_argument("--dataset", required=True)
    p.add_argument("--algo", choices=ALGO_CHOICES, default="rf", type=str.lower)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_loo)

    p = sub.add_parser("importance", parents=[common], help="permutation feature importance")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--repeats", type=int, default=50)
    p.add_argument("--top", type=int, default=15, help="rows shown in the table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("predict", parents=[common], help="recommend Extract Method per method of a Java file")
    p.add_argument("--model", required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--method", help="signature or bare name to restrict output")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", help="dataset reports")
    rsub = p.add_subparsers(dest="report_command", metavar="report")
    rsub.required = True
    d = rsub.add_parser("distributions", parents=[common], help="median and quartiles per metric and label")
    d.add_argument("--dataset", required=True)
    d.add_argument("--metrics", default=",".join(METRIC_SHORTLIST))
    d.add_argument("--out")
    d.set_defaults(func=cmd_report_distributions)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _setup_logging(args.verbose)
    if args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("refscout: error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (CliError, *OPERATIONAL_ERRORS) as exc:
        log.debug("failure detail", exc_info=True)
        msg = str(exc) or type(exc).__name__
        if isinstance(exc, KeyError) and exc.args:
            msg = str(exc.args[0])
        print(f"refscout: error: {msg}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
