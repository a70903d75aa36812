"""Deterministic experiment planning and prediction scoring.

A manifest freezes everything one experiment needs: the language scheme's
train/dev/test tweet ids (drawn without replacement from a seeded shuffle),
the task, the training fraction, and the hyperparameter grid.  Instance
files and prediction files exchange data with the trainer; scoring replays
the gold side from the corpus and applies the task's metric.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .corpus_io import export_token_classification
from .metrics import (
    MACRO,
    PER_CLASS,
    PRF,
    ReportEntry,
    aggregate_runs,
    sequence_prf,
)
from .model import AnnotationLayer, Corpus, Language, PropositionType
from .normalize import normalize, project_span

SCHEMES = ("mono-en", "mix", "cross-lingual")
SPAN_TASKS = ("collective", "property", "pivot", "justification", "conclusion")
JOINT_TASKS = {
    "joint-collective-property": ("collective", "property"),
    "joint-justification-conclusion": ("justification", "conclusion"),
}
TYPE_TASKS = ("type-of-justification", "type-of-conclusion", "type-of-both")
TASKS = ("argumentative",) + SPAN_TASKS + tuple(JOINT_TASKS) + TYPE_TASKS

FRACTIONS = (0.25, 0.5, 0.75, 1.0)

ARG_POSITIVE = "argumentative"
ARG_NEGATIVE = "non-argumentative"

# Split sizes per scheme: (train, dev, test) as (en, es) pairs.
_SCHEME_SIZES = {
    "mono-en": ((770, 0), (100, 0), (100, 0)),
    "mix": ((770, 120), (100, 26), (100, 50)),
    "cross-lingual": ((850, 0), (120, 0), (0, None)),  # None: all Spanish tweets
}


def hyper_grid(task: str) -> dict:
    """The fixed fine-tuning grid; only the selection metric is per-task."""
    if task in TYPE_TASKS or task in JOINT_TASKS:
        selection = "macro_f1"
    else:
        selection = "target_f1"
    return {
        "learning_rates": [1e-05, 2e-05, 5e-05, 5e-04, 5e-06],
        "batch_size": 16,
        "max_epochs": 10,
        "dropout": 0.1,
        "weight_decay": 0.01,
        "adam_epsilon": 1e-06,
        "adam_beta1": 0.9,
        "adam_beta2": 0.99,
        "early_stopping_patience": 2,
        "selection_metric": selection,
    }


@dataclass(frozen=True)
class ExperimentManifest:
    scheme: str
    task: str
    seed: int
    fraction: float
    train: tuple[str, ...]
    dev: tuple[str, ...]
    test: tuple[str, ...]
    grid: dict

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.fraction not in FRACTIONS:
            raise ValueError(f"fraction must be one of {FRACTIONS}")
        splits = (set(self.train), set(self.dev), set(self.test))
        if (
            len(splits[0]) != len(self.train)
            or len(splits[1]) != len(self.dev)
            or len(splits[2]) != len(self.test)
        ):
            raise ValueError("duplicate ids within a split")
        if splits[0] & splits[1] or splits[0] & splits[2] or splits[1] & splits[2]:
            raise ValueError("train/dev/test must be disjoint")

    def to_json(self) -> str:
        return json.dumps(
            {
                "scheme": self.scheme,
                "task": self.task,
                "seed": self.seed,
                "fraction": self.fraction,
                "train": list(self.train),
                "dev": list(self.dev),
                "test": list(self.test),
                "grid": self.grid,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, content: str) -> "ExperimentManifest":
        payload = json.loads(content)
        return cls(
            scheme=payload["scheme"],
            task=payload["task"],
            seed=int(payload["seed"]),
            fraction=float(payload["fraction"]),
            train=tuple(payload["train"]),
            dev=tuple(payload["dev"]),
            test=tuple(payload["test"]),
            grid=payload["grid"],
        )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def make_partitions(
    corpus: Corpus, scheme: str, task: str, seed: int
) -> ExperimentManifest:
    """Draw the scheme's fixed-size splits from a seeded shuffle.

    English ids are shuffled once and sliced into train/dev/test; for mixed
    training the Spanish ids are shuffled and sliced the same way, while the
    cross-lingual scheme tests on every Spanish tweet.
    """
    if scheme not in _SCHEME_SIZES:
        raise ValueError(f"unknown scheme {scheme!r}")
    en_ids = sorted(t.id for t in corpus.by_language(Language.EN))
    es_ids = sorted(t.id for t in corpus.by_language(Language.ES))
    sizes = _SCHEME_SIZES[scheme]

    en_needed = sum(s[0] for s in sizes)
    es_needed = sum(s[1] or 0 for s in sizes)
    if len(en_ids) < en_needed:
        raise ValueError(f"scheme {scheme} needs {en_needed} English tweets, have {len(en_ids)}")
    if sizes[2][1] is None:
        if not es_ids:
            raise ValueError(f"scheme {scheme} needs Spanish tweets for testing")
    elif len(es_ids) < es_needed:
        raise ValueError(f"scheme {scheme} needs {es_needed} Spanish tweets, have {len(es_ids)}")

    rng = random.Random(seed)
    rng.shuffle(en_ids)
    rng.shuffle(es_ids)

    splits = []
    en_at = es_at = 0
    for en_count, es_count in sizes:
        part = list(en_ids[en_at : en_at + en_count])
        en_at += en_count
        if es_count is None:
            part.extend(sorted(es_ids))
        else:
            part.extend(es_ids[es_at : es_at + es_count])
            es_at += es_count
        splits.append(tuple(part))

    return ExperimentManifest(
        scheme=scheme,
        task=task,
        seed=seed,
        fraction=1.0,
        train=splits[0],
        dev=splits[1],
        test=splits[2],
        grid=hyper_grid(task),
    )


def subsample_train(
    manifest: ExperimentManifest, fraction: float, seed: Optional[int] = None
) -> ExperimentManifest:
    """Shrink the training list to round(fraction * n) ids.

    Subsets are nested for a fixed seed (the kept ids are a prefix of one
    seeded permutation), so growing the fraction only adds examples; dev and
    test are untouched.  Sizes round half up.
    """
    if fraction not in FRACTIONS:
        raise ValueError(f"fraction must be one of {FRACTIONS}, got {fraction}")
    if fraction == 1.0:
        return manifest
    if seed is None:
        seed = manifest.seed
    order = list(manifest.train)
    random.Random(seed).shuffle(order)
    keep = _round_half_up(fraction * len(manifest.train))
    return replace(manifest, fraction=fraction, train=tuple(order[:keep]))


# -- task instances --

def _sub_corpus(corpus: Corpus, layer: AnnotationLayer, ids: Sequence[str]) -> tuple[Corpus, AnnotationLayer]:
    tweets = []
    annotations = {}
    for tweet_id in ids:
        tweet = corpus.tweet(tweet_id)
        ann = layer.get(tweet_id)
        if ann is None:
            raise ValueError(f"layer {layer.annotator_id!r} has no annotation for {tweet_id}")
        tweets.append(tweet)
        annotations[tweet_id] = ann
    sub_layer = AnnotationLayer(annotator_id=layer.annotator_id, annotations=annotations)
    return Corpus(tweets=tuple(tweets), layers=(sub_layer,)), sub_layer


def _argumentative_instances(corpus: Corpus, layer: AnnotationLayer, ids: Sequence[str]) -> str:
    lines = []
    for tweet_id in ids:
        tweet = corpus.tweet(tweet_id)
        ann = layer.get(tweet_id)
        if ann is None:
            raise ValueError(f"layer {layer.annotator_id!r} has no annotation for {tweet_id}")
        label = ARG_POSITIVE if ann.argumentative else ARG_NEGATIVE
        lines.append(
            json.dumps(
                {"id": tweet_id, "text": normalize(tweet).text, "label": label},
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def _premise_instances(
    corpus: Corpus, layer: AnnotationLayer, ids: Sequence[str], kinds: Sequence[str]
) -> str:
    """One instance per requested premise: the premise text cut out of the
    normalized tweet, labeled with its proposition type."""
    lines = []
    for tweet_id in ids:
        tweet = corpus.tweet(tweet_id)
        ann = layer.get(tweet_id)
        if ann is None:
            raise ValueError(f"layer {layer.annotator_id!r} has no annotation for {tweet_id}")
        if not ann.argumentative:
            continue
        nm = normalize(tweet)
        for kind in kinds:
            premise = getattr(ann, kind)
            if premise is None:
                continue
            projected = project_span(premise.span, nm)
            lines.append(
                json.dumps(
                    {
                        "id": f"{tweet_id}:{kind}",
                        "text": projected.slice(nm.text),
                        "label": premise.type.value,
                    },
                    ensure_ascii=False,
                )
            )
    return "\n".join(lines) + ("\n" if lines else "")


def task_instances(
    corpus: Corpus, layer: AnnotationLayer, manifest: ExperimentManifest
) -> dict[str, str]:
    """Instance file contents per split.

    Sequence tasks emit JSONL {"id","text","label"}; span tasks emit the
    CoNLL-style blocks.  The joint type task trains on both premise kinds
    and is tested three ways (justifications, conclusions, both), one file
    per test variant.
    """
    task = manifest.task
    splits = {"train": manifest.train, "dev": manifest.dev, "test": manifest.test}

    if task == "argumentative":
        return {
            name: _argumentative_instances(corpus, layer, ids) for name, ids in splits.items()
        }

    if task in SPAN_TASKS or task in JOINT_TASKS:
        out = {}
        for name, ids in splits.items():
            sub_corpus, sub_layer = _sub_corpus(corpus, layer, ids)
            if task in JOINT_TASKS:
                out[name] = export_token_classification(
                    sub_corpus, sub_layer, joint=JOINT_TASKS[task], normalized=True
                )
            else:
                out[name] = export_token_classification(
                    sub_corpus, sub_layer, category=task, normalized=True
                )
        return out

    if task == "type-of-justification":
        kinds = ("justification",)
    elif task == "type-of-conclusion":
        kinds = ("conclusion",)
    elif task == "type-of-both":
        both = ("justification", "conclusion")
        return {
            "train": _premise_instances(corpus, layer, manifest.train, both),
            "dev": _premise_instances(corpus, layer, manifest.dev, both),
            "test_justification": _premise_instances(
                corpus, layer, manifest.test, ("justification",)
            ),
            "test_conclusion": _premise_instances(corpus, layer, manifest.test, ("conclusion",)),
            "test_both": _premise_instances(corpus, layer, manifest.test, both),
        }
    else:
        raise ValueError(f"unknown task {task!r}")
    return {name: _premise_instances(corpus, layer, ids, kinds) for name, ids in splits.items()}


# -- scoring --

@dataclass(frozen=True)
class ScoredRun:
    """Metrics of one prediction file against one manifest."""

    task: str
    prf: PRF
    per_class: Optional[dict[str, PRF]] = None


def _parse_conll(content: str) -> dict[str, list[str]]:
    """Block id to label sequence."""
    blocks: dict[str, list[str]] = {}
    current: Optional[str] = None
    for line in content.splitlines():
        if not line.strip():
            current = None
            continue
        if line.startswith("# id="):
            current = line[len("# id=") :]
            if current in blocks:
                raise ValueError(f"duplicate block id {current}")
            blocks[current] = []
            continue
        if current is None:
            raise ValueError(f"token line outside a block: {line!r}")
        try:
            _, label = line.split("\t")
        except ValueError:
            raise ValueError(f"bad token line: {line!r}") from None
        blocks[current].append(label)
    return blocks


def _parse_prediction_jsonl(content: str) -> dict[str, object]:
    out: dict[str, object] = {}
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"prediction line {lineno}: {exc}") from None
        if "id" not in payload:
            raise ValueError(f"prediction line {lineno}: missing 'id'")
        if payload["id"] in out:
            raise ValueError(f"prediction line {lineno}: duplicate id {payload['id']!r}")
        if "labels" in payload:
            out[payload["id"]] = list(payload["labels"])
        elif "label" in payload:
            out[payload["id"]] = payload["label"]
        else:
            raise ValueError(f"prediction line {lineno}: needs 'label' or 'labels'")
    return out


def _check_coverage(gold_ids, pred_ids) -> None:
    gold_set, pred_set = set(gold_ids), set(pred_ids)
    if gold_set != pred_set:
        missing = sorted(gold_set - pred_set)[:5]
        extra = sorted(pred_set - gold_set)[:5]
        raise ValueError(f"prediction coverage mismatch: missing {missing}, extra {extra}")


def score_predictions(
    corpus: Corpus,
    layer: AnnotationLayer,
    manifest: ExperimentManifest,
    prediction_content: str,
    test_variant: str = "test",
) -> ScoredRun:
    """Score one prediction file against the manifest's test instances.

    Detection tasks report target-class PRF over pooled tokens (span tasks)
    or tweets (argumentative); joint and type tasks report the macro average
    with per-class scores alongside.
    """
    instances = task_instances(corpus, layer, manifest)
    if test_variant not in instances:
        raise ValueError(f"manifest has no test variant {test_variant!r}")
    gold_content = instances[test_variant]
    predictions = _parse_prediction_jsonl(prediction_content)
    task = manifest.task

    if task in SPAN_TASKS or task in JOINT_TASKS:
        gold_blocks = _parse_conll(gold_content)
        _check_coverage(gold_blocks, predictions)
        pooled_gold: list[str] = []
        pooled_pred: list[str] = []
        for block_id, gold_labels in gold_blocks.items():
            pred_labels = predictions[block_id]
            if not isinstance(pred_labels, list) or len(pred_labels) != len(gold_labels):
                raise ValueError(
                    f"block {block_id}: expected {len(gold_labels)} labels, "
                    f"got {pred_labels if not isinstance(pred_labels, list) else len(pred_labels)}"
                )
            pooled_gold.extend(gold_labels)
            pooled_pred.extend(pred_labels)
        if task in SPAN_TASKS:
            domain = ("IN", "OUT")
            prf = sequence_prf(pooled_gold, pooled_pred, domain, ("target", "IN"))
            return ScoredRun(task=task, prf=prf)
        pair = JOINT_TASKS[task]
        domain = (pair[0].capitalize(), pair[1].capitalize(), "OUT")
        per_class = sequence_prf(pooled_gold, pooled_pred, domain, PER_CLASS)
        macro = sequence_prf(pooled_gold, pooled_pred, domain, MACRO)
        return ScoredRun(task=task, prf=macro, per_class={k: v for k, v in per_class.items()})

    gold_rows = [json.loads(line) for line in gold_content.splitlines() if line.strip()]
    gold_labels_by_id = {row["id"]: row["label"] for row in gold_rows}
    _check_coverage(gold_labels_by_id, predictions)
    gold = [gold_labels_by_id[i] for i in gold_labels_by_id]
    pred = [predictions[i] for i in gold_labels_by_id]
    for label in pred:
        if isinstance(label, list):
            raise ValueError("sequence task predictions must use 'label', not 'labels'")

    if task == "argumentative":
        prf = sequence_prf(gold, pred, (ARG_POSITIVE, ARG_NEGATIVE), ("target", ARG_POSITIVE))
        return ScoredRun(task=task, prf=prf)

    domain = tuple(p.value for p in PropositionType)
    per_class = sequence_prf(gold, pred, domain, PER_CLASS)
    macro = sequence_prf(gold, pred, domain, MACRO)
    return ScoredRun(task=task, prf=macro, per_class={k: v for k, v in per_class.items()})


def score_group(
    corpus: Corpus,
    layer: AnnotationLayer,
    runs: Sequence[tuple[ExperimentManifest, str]],
    setting: str,
    test_variant: str = "test",
) -> ReportEntry:
    """Aggregate scored runs of one (task, fraction) group into a report cell."""
    if not runs:
        raise ValueError("need at least one run")
    tasks = {m.task for m, _ in runs}
    fractions = {m.fraction for m, _ in runs}
    if len(tasks) != 1 or len(fractions) != 1:
        raise ValueError(f"runs mix tasks {tasks} or fractions {fractions}")
    scored = [
        score_predictions(corpus, layer, manifest, content, test_variant)
        for manifest, content in runs
    ]
    aggregate = aggregate_runs([s.prf for s in scored])
    per_class_f1 = None
    if scored[0].per_class is not None:
        per_class_f1 = {
            cls: sum(s.per_class[cls].f1 for s in scored) / len(scored)
            for cls in scored[0].per_class
        }
    return ReportEntry(
        task=tasks.pop(),
        setting=setting,
        fraction=fractions.pop(),
        aggregate=aggregate,
        per_class_f1=per_class_f1,
    )
