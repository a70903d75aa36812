"""Exchange-format parsing and tensorization.

The trainer talks to the planning toolkit only through files: manifest JSON
({scheme, task, seed, fraction, train[], dev[], test[], grid{}}), instance
files (CoNLL-style `token<TAB>label` blocks headed by `# id=<id>`, or JSONL
{"id","text","label"}), and prediction JSONL ({"id","labels":[...]} per
block or {"id","label"} per sequence).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

SPAN_TASKS = ("collective", "property", "pivot", "justification", "conclusion")
JOINT_TASKS = ("joint-collective-property", "joint-justification-conclusion")


@dataclass(frozen=True)
class Manifest:
    scheme: str
    task: str
    seed: int
    fraction: float
    train: tuple[str, ...]
    dev: tuple[str, ...]
    test: tuple[str, ...]
    grid: dict

    @property
    def token_level(self) -> bool:
        return self.task in SPAN_TASKS or self.task in JOINT_TASKS


def load_manifest(path: Path | str) -> Manifest:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return Manifest(
        scheme=payload["scheme"],
        task=payload["task"],
        seed=int(payload["seed"]),
        fraction=float(payload["fraction"]),
        train=tuple(payload["train"]),
        dev=tuple(payload["dev"]),
        test=tuple(payload["test"]),
        grid=payload["grid"],
    )


@dataclass(frozen=True)
class TokenInstance:
    id: str
    tokens: tuple[str, ...]
    labels: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class SequenceInstance:
    id: str
    text: str
    label: Optional[str] = None


def parse_conll(content: str) -> list[TokenInstance]:
    instances: list[TokenInstance] = []
    block_id: Optional[str] = None
    tokens: list[str] = []
    labels: list[str] = []

    def flush() -> None:
        nonlocal block_id, tokens, labels
        if block_id is not None:
            instances.append(TokenInstance(block_id, tuple(tokens), tuple(labels)))
        block_id, tokens, labels = None, [], []

    for line in content.splitlines():
        if not line.strip():
            flush()
            continue
        if line.startswith("# id="):
            flush()
            block_id = line[len("# id=") :]
            continue
        if block_id is None:
            raise ValueError(f"token line before any block header: {line!r}")
        try:
            token, label = line.split("\t")
        except ValueError:
            raise ValueError(f"expected token<TAB>label, got {line!r}") from None
        tokens.append(token)
        labels.append(label)
    flush()
    return instances


def parse_sequence_jsonl(content: str) -> list[SequenceInstance]:
    instances = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line.strip():
            continue
        payload = json.loads(line)
        try:
            instances.append(
                SequenceInstance(payload["id"], payload["text"], payload.get("label"))
            )
        except KeyError as exc:
            raise ValueError(f"line {lineno}: missing {exc}") from None
    return instances


def write_token_predictions(instances: Sequence[TokenInstance], labels_per_instance) -> str:
    lines = []
    for instance, labels in zip(instances, labels_per_instance):
        # one label per input token, always
        assert len(labels) == len(instance.tokens), instance.id
        lines.append(json.dumps({"id": instance.id, "labels": list(labels)}))
    return "\n".join(lines) + ("\n" if lines else "")


def write_sequence_predictions(instances: Sequence[SequenceInstance], labels) -> str:
    lines = [
        json.dumps({"id": instance.id, "label": label})
        for instance, label in zip(instances, labels)
    ]
    return "\n".join(lines) + ("\n" if lines else "")


PAD, UNK = "<pad>", "<unk>"


@dataclass
class Vocab:
    stoi: dict[str, int] = field(default_factory=dict)

    @classmethod
    def build(cls, token_lists) -> "Vocab":
        stoi = {PAD: 0, UNK: 1}
        for tokens in token_lists:
            for token in tokens:
                if token not in stoi:
                    stoi[token] = len(stoi)
        return cls(stoi=stoi)

    def encode(self, tokens) -> list[int]:
        unk = self.stoi[UNK]
        return [self.stoi.get(t, unk) for t in tokens]

    def __len__(self) -> int:
        return len(self.stoi)


def label_set(task: str, instances) -> list[str]:
    """Stable label inventory for a task, fixed by the task where the
    format pins it, otherwise collected from the training data."""
    if task in SPAN_TASKS:
        return ["IN", "OUT"]
    if task == "joint-collective-property":
        return ["Collective", "Property", "OUT"]
    if task == "joint-justification-conclusion":
        return ["Justification", "Conclusion", "OUT"]
    if task == "argumentative":
        return ["argumentative", "non-argumentative"]
    if task.startswith("type-of"):
        return ["fact", "value", "policy"]
    seen: list[str] = []
    for instance in instances:
        labels = instance.labels if hasattr(instance, "labels") else [instance.label]
        for label in labels or []:
            if label is not None and label not in seen:
                seen.append(label)
    return seen
