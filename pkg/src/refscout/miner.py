"""Mine positive and negative instances from a repository's first-parent history."""
from __future__ import annotations

import logging
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from .detect import detect_extract_method, parse_or_none, refactored_classes
from .metrics import compute_class_metrics, compute_method_metrics, feature_vector

log = logging.getLogger(__name__)

DEFAULT_S = 20


class RepoNotFound(Exception):
    pass


class BranchNotFound(Exception):
    pass


class GitError(Exception):
    pass


@dataclass(frozen=True)
class MiningConfig:
    s_threshold: int = DEFAULT_S
    branch: str = "HEAD"
    project_id: str = ""

    def __post_init__(self):
        if int(self.s_threshold) < 1:
            raise ValueError(f"s_threshold must be >= 1, got {self.s_threshold}")


@dataclass(frozen=True)
class MinedInstance:
    project_id: str
    commit: str
    path: str
    class_name: str
    method: str
    label: bool
    features: tuple[float, ...] = field(repr=False)


# Counter keys are (file path, qualified class name).
ClassKey = tuple[str, str]


def advance_stability(
    counter: dict[ClassKey, int], class_changes: set, refactored_classes: set, s: int
) -> tuple[dict[ClassKey, int], set]:
    """One commit step of the stability heuristic; the input dict is not mutated."""
    updated = dict(counter)
    due = set()
    for key in refactored_classes:
        updated[key] = 0
    for key in class_changes:
        if key in refactored_classes:
            continue
        count = updated.get(key, 0) + 1
        if count >= s:
            due.add(key)
            count = 0
        updated[key] = count
    return updated, due


class _Git:
    def __init__(self, repo: Path):
        self.repo = repo

    def run(self, *args: str, check: bool = True) -> subprocess.CompletedProcess:
        proc = subprocess.run(
            ["git", "-C", str(self.repo), *args],
            capture_output=True,
        )
        if check and proc.returncode != 0:
            raise GitError(f"git {' '.join(args)}: {proc.stderr.decode(errors='replace').strip()}")
        return proc

    def text(self, *args: str) -> str:
        return self.run(*args).stdout.decode("utf-8", errors="replace")

    def show(self, rev: str, path: str) -> bytes | None:
        proc = self.run("show", f"{rev}:{path}", check=False)
        if proc.returncode != 0:
            log.warning("cannot read %s at %s", path, rev[:12])
            return None
        return proc.stdout


def _open_repo(repo_path, branch: str) -> tuple[_Git, list[str]]:
    repo = Path(repo_path)
    if not repo.is_dir():
        raise RepoNotFound(f"not a directory: {repo}")
    git = _Git(repo)
    if git.run("rev-parse", "--git-dir", check=False).returncode != 0:
        raise RepoNotFound(f"not a git repository: {repo}")
    if git.run("rev-parse", "--verify", "--quiet", f"{branch}^{{commit}}", check=False).returncode != 0:
        raise BranchNotFound(f"branch {branch!r} not found in {repo}")
    commits = git.text("rev-list", "--first-parent", "--reverse", branch).split()
    return git, commits


def _changed_files(git: _Git, parent: str, child: str) -> list[tuple[str, str | None, str]]:
    """(status letter, old path, new path) for .java files changed between the commits."""
    out = git.text("diff", "--name-status", "-M50%", "--no-color", parent, child, "--", "*.java")
    changes = []
    for line in out.splitlines():
        parts = line.split("\t")
        status = parts[0]
        kind = status[0]
        if kind == "R":
            changes.append(("R" if status != "R100" else "R100", parts[1], parts[2]))
        elif kind in ("M", "T"):
            changes.append(("M", parts[1], parts[1]))
        elif kind == "A":
            changes.append(("A", None, parts[1]))
        elif kind == "D":
            changes.append(("D", parts[1], parts[1]))
    return changes


def _rows(code, project_id, commit, path, wanted, label):
    """MinedInstances for methods selected by ``wanted(class, method)``."""
    out = []
    for cls in code.classes:
        class_metrics = None
        for method in cls.methods:
            if not wanted(cls, method):
                continue
            if class_metrics is None:
                class_metrics = compute_class_metrics(cls)
            vec = feature_vector(class_metrics, compute_method_metrics(method, cls))
            out.append(
                MinedInstance(project_id, commit, path, cls.qualified_name, method.signature, label, tuple(vec))
            )
    return out


def mine_repository(repo_path, config: MiningConfig | None = None) -> list[MinedInstance]:
    config = config or MiningConfig()
    git, commits = _open_repo(repo_path, config.branch)
    project = config.project_id or Path(repo_path).resolve().name
    s = int(config.s_threshold)
    counter: dict[ClassKey, int] = {}
    instances: list[MinedInstance] = []
    for parent, child in zip(commits, commits[1:]):
        commit_rows: list[MinedInstance] = []
        changed: set[ClassKey] = set()
        refactored: set[ClassKey] = set()
        due_models = {}
        for status, old_path, new_path in _changed_files(git, parent, child):
            if status == "D":
                counter = {k: v for k, v in counter.items() if k[0] != old_path}
                continue
            if status in ("R", "R100"):
                counter = {((new_path if k[0] == old_path else k[0]), k[1]): v for k, v in counter.items()}
            if status in ("A", "R100"):
                continue
            before_src = git.show(parent, old_path)
            after_src = git.show(child, new_path)
            if before_src is None or after_src is None:
                continue
            before = parse_or_none(before_src, old_path)
            after = parse_or_none(after_src, new_path)
            if before is None or after is None:
                continue
            for inst in detect_extract_method(before, after, child):
                wanted = {(inst.parent_class, inst.parent_signature)}
                commit_rows += _rows(
                    before, project, child, old_path,
                    lambda c, m, w=wanted: (c.qualified_name, m.signature) in w, True,
                )
            refactored |= {(new_path, name) for name in refactored_classes(before, after)}
            changed |= {(new_path, cls.qualified_name) for cls in after.classes}
            due_models[new_path] = after
            present = {cls.qualified_name for cls in after.classes}
            counter = {k: v for k, v in counter.items() if k[0] != new_path or k[1] in present}
        counter, due = advance_stability(counter, changed, refactored, s)
        for path, class_name in sorted(due):
            commit_rows += _rows(
                due_models[path], project, child, path,
                lambda c, m, n=class_name: c.qualified_name == n, False,
            )
        commit_rows.sort(key=lambda r: (r.path, r.class_name, r.method, not r.label))
        instances += _dedupe_positives(commit_rows)
    return instances


def _dedupe_positives(rows: list[MinedInstance]) -> list[MinedInstance]:
    """One positive per parent method per commit even if it lost code to two new methods."""
    seen = set()
    out = []
    for row in rows:
        key = (row.path, row.class_name, row.method, row.label)
        if key in seen:
            continue
        seen.add(key)
        out.append(row)
    return out


def mine_repositories(jobs_spec: list[tuple[str, MiningConfig]], jobs: int = 1) -> list[MinedInstance]:
    """Mine several repositories, merged in project_id order."""
    if jobs != 1 and len(jobs_spec) > 1:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=jobs)(delayed(mine_repository)(path, cfg) for path, cfg in jobs_spec)
    else:
        results = [mine_repository(path, cfg) for path, cfg in jobs_spec]
    merged = []
    for _, rows in sorted(
        zip([cfg.project_id or Path(p).resolve().name for p, cfg in jobs_spec], results), key=lambda pr: pr[0]
    ):
        merged += rows
    return merged
