"""Evaluation metrics: token/sequence precision-recall-F1 and run aggregation.

Span tasks are scored on per-word membership labels with the marked class
as target; type tasks report the macro average over fact/value/policy plus
per-class F1.  Experiments run on several randomized partitions, so cells
aggregate to mean and population standard deviation of the F1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence, Union

from .corpus_io import category_span
from .model import AnnotationLayer, Corpus, PropositionType, span_to_token_mask, tokenize

MACRO = "macro"
PER_CLASS = "per_class"


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "PRF":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(precision, recall, f1)


@dataclass(frozen=True)
class RunAggregate:
    """Mean and population std of F1 over runs; P and R as means."""

    mean_f1: float
    std_f1: float
    mean_precision: float
    mean_recall: float
    runs: tuple[PRF, ...]

    def cell(self) -> str:
        return f"{self.mean_f1:.2f}±{self.std_f1:.2f}"


def token_prf(gold_mask: Sequence[bool], pred_mask: Sequence[bool]) -> PRF:
    """Score a predicted membership mask against gold, marked = positive."""
    if len(gold_mask) != len(pred_mask):
        raise ValueError(f"mask lengths differ: {len(gold_mask)} vs {len(pred_mask)}")
    tp = sum(1 for g, p in zip(gold_mask, pred_mask) if g and p)
    fp = sum(1 for g, p in zip(gold_mask, pred_mask) if not g and p)
    fn = sum(1 for g, p in zip(gold_mask, pred_mask) if g and not p)
    return PRF.from_counts(tp, fp, fn)


def sequence_prf(
    gold_labels: Sequence[Hashable],
    pred_labels: Sequence[Hashable],
    domain: Iterable[Hashable],
    scheme: Union[str, tuple[str, Hashable]],
):
    """One-vs-rest scores over a label sequence.

    scheme selects the result: ("target", c) scores class c; MACRO averages
    per-class scores uniformly over the whole domain, so a class absent from
    both gold and predictions contributes zeros instead of inflating the
    mean; PER_CLASS returns the class-to-PRF map.
    """
    if len(gold_labels) != len(pred_labels):
        raise ValueError(
            f"label sequences differ in length: {len(gold_labels)} vs {len(pred_labels)}"
        )
    classes = tuple(domain)
    known = set(classes)
    for label in list(gold_labels) + list(pred_labels):
        if label not in known:
            raise ValueError(f"label outside domain: {label!r}")

    def one_vs_rest(cls: Hashable) -> PRF:
        tp = sum(1 for g, p in zip(gold_labels, pred_labels) if g == cls and p == cls)
        fp = sum(1 for g, p in zip(gold_labels, pred_labels) if g != cls and p == cls)
        fn = sum(1 for g, p in zip(gold_labels, pred_labels) if g == cls and p != cls)
        return PRF.from_counts(tp, fp, fn)

    if isinstance(scheme, tuple) and scheme[0] == "target":
        if scheme[1] not in known:
            raise ValueError(f"target class outside domain: {scheme[1]!r}")
        return one_vs_rest(scheme[1])
    per_class = {cls: one_vs_rest(cls) for cls in classes}
    if scheme == PER_CLASS:
        return per_class
    if scheme == MACRO:
        n = len(classes)
        return PRF(
            precision=sum(s.precision for s in per_class.values()) / n,
            recall=sum(s.recall for s in per_class.values()) / n,
            f1=sum(s.f1 for s in per_class.values()) / n,
        )
    raise ValueError(f"unknown scheme {scheme!r}")


def aggregate_runs(runs: Sequence[PRF]) -> RunAggregate:
    if not runs:
        raise ValueError("need at least one run")
    n = len(runs)
    mean_f1 = sum(r.f1 for r in runs) / n
    variance = sum((r.f1 - mean_f1) ** 2 for r in runs) / n
    return RunAggregate(
        mean_f1=mean_f1,
        std_f1=variance ** 0.5,
        mean_precision=sum(r.precision for r in runs) / n,
        mean_recall=sum(r.recall for r in runs) / n,
        runs=tuple(runs),
    )


def human_baseline_f1(
    corpus: Corpus, layer_a: AnnotationLayer, layer_b: AnnotationLayer, category: str
) -> PRF:
    """Score one annotator against the other as if they were a model.

    layer_a plays gold, layer_b plays prediction.  Span categories pool raw
    token masks over the shared tweets with no 50% harmonization: this is
    the same F1 regime the models are scored under, not the kappa regime.
    """
    shared = [
        t for t in corpus.tweets if layer_a.get(t.id) is not None and layer_b.get(t.id) is not None
    ]
    if not shared:
        raise ValueError("layers share no tweets")

    if category == "argumentative":
        gold = [layer_a.get(t.id).argumentative for t in shared]
        pred = [layer_b.get(t.id).argumentative for t in shared]
        return sequence_prf(gold, pred, (False, True), ("target", True))

    if category in ("type_of_justification", "type_of_conclusion"):
        fld = "justification" if category == "type_of_justification" else "conclusion"
        gold, pred = [], []
        for t in shared:
            prem_a = getattr(layer_a.get(t.id), fld)
            prem_b = getattr(layer_b.get(t.id), fld)
            if prem_a is not None and prem_b is not None:
                gold.append(prem_a.type)
                pred.append(prem_b.type)
        if not gold:
            raise ValueError(f"no shared tweets where both layers typed the {fld}")
        return sequence_prf(gold, pred, tuple(PropositionType), MACRO)

    pooled_gold: list[bool] = []
    pooled_pred: list[bool] = []
    for t in shared:
        tokens = tokenize(t.text)
        for layer, pool in ((layer_a, pooled_gold), (layer_b, pooled_pred)):
            span = category_span(layer.get(t.id), category)
            if span is None:
                pool.extend([False] * len(tokens))
            else:
                pool.extend(span_to_token_mask(span, tokens, len(t.text)))
    return token_prf(pooled_gold, pooled_pred)


# -- report assembly --

@dataclass(frozen=True)
class ReportEntry:
    """One scored cell: a task under one model setting and train fraction."""

    task: str
    setting: str
    fraction: float
    aggregate: RunAggregate
    per_class_f1: Optional[dict[str, float]] = None

    def to_payload(self) -> dict:
        payload = {
            "task": self.task,
            "setting": self.setting,
            "fraction": self.fraction,
            "mean_f1": self.aggregate.mean_f1,
            "std_f1": self.aggregate.std_f1,
            "mean_precision": self.aggregate.mean_precision,
            "mean_recall": self.aggregate.mean_recall,
            "runs": [
                {"precision": r.precision, "recall": r.recall, "f1": r.f1}
                for r in self.aggregate.runs
            ],
        }
        if self.per_class_f1 is not None:
            payload["per_class_f1"] = self.per_class_f1
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "ReportEntry":
        runs = tuple(PRF(r["precision"], r["recall"], r["f1"]) for r in payload["runs"])
        return cls(
            task=payload["task"],
            setting=payload["setting"],
            fraction=payload.get("fraction", 1.0),
            aggregate=RunAggregate(
                mean_f1=payload["mean_f1"],
                std_f1=payload["std_f1"],
                mean_precision=payload["mean_precision"],
                mean_recall=payload["mean_recall"],
                runs=runs,
            ),
            per_class_f1=payload.get("per_class_f1"),
        )


@dataclass(frozen=True)
class MetricsReport:
    entries: tuple[ReportEntry, ...] = field(default_factory=tuple)

    def to_json(self) -> str:
        return json.dumps([e.to_payload() for e in self.entries], indent=2)

    @classmethod
    def from_json(cls, content: str) -> "MetricsReport":
        return cls(entries=tuple(ReportEntry.from_payload(p) for p in json.loads(content)))

    def settings(self) -> list[str]:
        seen: list[str] = []
        for e in self.entries:
            if e.setting not in seen:
                seen.append(e.setting)
        return seen


def render_detection_table(report: MetricsReport) -> str:
    """Task rows, one F1/P/R column group per setting (full-fraction cells)."""
    entries = [e for e in report.entries if e.fraction == 1.0 and e.per_class_f1 is None]
    return _render(entries, lambda e: [e.aggregate.cell(),
                                       f"{e.aggregate.mean_precision:.2f}",
                                       f"{e.aggregate.mean_recall:.2f}"],
                   ["F1", "Pr", "Rec"])


def render_type_table(report: MetricsReport) -> str:
    """Type-task rows: macro F1 plus fact/value/policy per-class F1."""
    entries = [e for e in report.entries if e.fraction == 1.0 and e.per_class_f1 is not None]
    def cells(e: ReportEntry) -> list[str]:
        per = e.per_class_f1 or {}
        return [e.aggregate.cell()] + [
            f"{per.get(cls.value, 0.0):.2f}" for cls in PropositionType
        ]
    return _render(entries, cells, ["Macro", "F", "V", "P"])


def _render(entries, cells, sub_headers) -> str:
    tasks: list[str] = []
    settings: list[str] = []
    for e in entries:
        if e.task not in tasks:
            tasks.append(e.task)
        if e.setting not in settings:
            settings.append(e.setting)
    by_key = {(e.task, e.setting): e for e in entries}
    header = [""] + [f"{s}:{h}" for s in settings for h in sub_headers]
    rows = [header]
    for task in tasks:
        row = [task]
        for setting in settings:
            entry = by_key.get((task, setting))
            row.extend(cells(entry) if entry else ["-"] * len(sub_headers))
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)
