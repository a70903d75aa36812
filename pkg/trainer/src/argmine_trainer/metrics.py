"""Dev-selection metrics.

Only what early stopping and checkpoint selection need: target-class F1
for detection tasks and macro F1 otherwise, as recorded in the manifest
grid's selection_metric.  Final scoring belongs to the planning toolkit.
"""

from __future__ import annotations

from typing import Sequence


def f1(gold: Sequence[str], pred: Sequence[str], positive: str) -> float:
    tp = sum(1 for g, p in zip(gold, pred) if g == positive and p == positive)
    fp = sum(1 for g, p in zip(gold, pred) if g != positive and p == positive)
    fn = sum(1 for g, p in zip(gold, pred) if g == positive and p != positive)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return 2 * precision * recall / (precision + recall) if precision + recall else 0.0


def macro_f1(gold: Sequence[str], pred: Sequence[str], labels: Sequence[str]) -> float:
    return sum(f1(gold, pred, label) for label in labels) / len(labels)


def target_label(task: str) -> str:
    if task == "argumentative":
        return "argumentative"
    return "IN"


def selection_score(
    metric: str, task: str, gold: Sequence[str], pred: Sequence[str], labels: Sequence[str]
) -> float:
    if metric == "target_f1":
        return f1(gold, pred, target_label(task))
    if metric == "macro_f1":
        return macro_f1(gold, pred, labels)
    raise ValueError(f"unknown selection metric {metric!r}")
