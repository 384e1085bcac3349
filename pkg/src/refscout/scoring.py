"""Confusion-matrix arithmetic shared by grid search and evaluation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @classmethod
    def from_labels(cls, y_true, y_pred) -> ConfusionMatrix:
        t = np.asarray(y_true).astype(bool)
        p = np.asarray(y_pred).astype(bool)
        return cls(int(np.sum(t & p)), int(np.sum(~t & p)), int(np.sum(t & ~p)), int(np.sum(~t & ~p)))


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class EvaluationReport:
    confusion: ConfusionMatrix
    accuracy: float
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix) -> EvaluationReport:
        precision = _ratio(cm.tp, cm.tp + cm.fp)
        recall = _ratio(cm.tp, cm.tp + cm.fn)
        f1 = _ratio(2 * precision * recall, precision + recall)
        return cls(cm, _ratio(cm.tp + cm.tn, cm.total), precision, recall, f1)

    def as_row(self) -> dict[str, float]:
        c = self.confusion
        return {
            "tp": c.tp, "fp": c.fp, "fn": c.fn, "tn": c.tn,
            "accuracy": self.accuracy, "precision": self.precision, "recall": self.recall, "f1": self.f1,
        }


def f1_score(y_true, y_pred) -> float:
    return EvaluationReport.from_confusion(ConfusionMatrix.from_labels(y_true, y_pred)).f1
