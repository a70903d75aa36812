"""Training and prediction.

One call to :func:`train` runs the whole manifest grid: every learning
rate, up to the epoch cap, early-stopped on the dev split with the recorded
patience, keeping the checkpoint of the (rate, epoch) pair that maximizes
the manifest's selection metric.  Seeding is derived from the manifest
seed: model init with `seed` before each rate's run, epoch shuffling with
`seed * 1000 + epoch`, so two runs on one machine produce identical curves.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import torch
from torch import nn

from .data import (
    Manifest,
    TokenInstance,
    Vocab,
    label_set,
    load_manifest,
    parse_conll,
    parse_sequence_jsonl,
    write_sequence_predictions,
    write_token_predictions,
)
from .encoder import TINY, build_encoder
from .metrics import selection_score

IGNORE = -100


@dataclass
class TrainerConfig:
    manifest_path: Path
    instances_dir: Path
    out_dir: Path
    encoder: str = TINY
    device: str = "cpu"


@dataclass
class TrainResult:
    checkpoint_path: Path
    dev_log_path: Path
    best_lr: float
    best_epoch: int
    best_dev: float


def _instance_path(instances_dir: Path, manifest: Manifest, split: str) -> Path:
    suffix = ".conll" if manifest.token_level else ".jsonl"
    return instances_dir / f"{split}{suffix}"


def _load_split(instances_dir: Path, manifest: Manifest, split: str):
    content = _instance_path(instances_dir, manifest, split).read_text(encoding="utf-8")
    if manifest.token_level:
        return parse_conll(content)
    return parse_sequence_jsonl(content)


def _tokens_of(instance) -> tuple[str, ...]:
    if isinstance(instance, TokenInstance):
        return instance.tokens
    return tuple(instance.text.split())


def _gold_of(instance):
    if isinstance(instance, TokenInstance):
        return list(instance.labels)
    return instance.label


def _batches(count: int, batch_size: int, order: Sequence[int]):
    for at in range(0, count, batch_size):
        yield list(order[at : at + batch_size])


def _collate(instances, vocab: Vocab, label_to_id, token_level: bool, device: str):
    token_lists = [_tokens_of(i) for i in instances]
    width = max((len(t) for t in token_lists), default=1) or 1
    ids = torch.zeros(len(instances), width, dtype=torch.long)
    mask = torch.zeros(len(instances), width, dtype=torch.bool)
    for row, tokens in enumerate(token_lists):
        encoded = vocab.encode(tokens)
        ids[row, : len(encoded)] = torch.tensor(encoded, dtype=torch.long)
        mask[row, : len(encoded)] = True
    if token_level:
        labels = torch.full((len(instances), width), IGNORE, dtype=torch.long)
        for row, instance in enumerate(instances):
            if instance.labels is not None:
                for col, label in enumerate(instance.labels):
                    labels[row, col] = label_to_id[label]
    else:
        labels = torch.tensor(
            [
                label_to_id[i.label] if i.label is not None else IGNORE
                for i in instances
            ],
            dtype=torch.long,
        )
    return ids.to(device), mask.to(device), labels.to(device)


def _predict_labels(model, instances, vocab, labels, token_level, device, batch_size=64):
    model.eval()
    out = []
    with torch.no_grad():
        for chosen in _batches(len(instances), batch_size, range(len(instances))):
            batch = [instances[i] for i in chosen]
            ids, mask, _ = _collate(batch, vocab, {l: i for i, l in enumerate(labels)},
                                    token_level, device)
            logits = model(ids, mask)
            if token_level:
                picks = logits.argmax(dim=-1)
                for row, instance in enumerate(batch):
                    n = len(instance.tokens)
                    out.append([labels[picks[row, col].item()] for col in range(n)])
            else:
                picks = logits.argmax(dim=-1)
                out.extend(labels[p.item()] for p in picks)
    return out


def _dev_score(model, instances, vocab, labels, manifest, device) -> float:
    predicted = _predict_labels(model, instances, vocab, labels, manifest.token_level, device)
    if manifest.token_level:
        gold = [l for i in instances for l in i.labels]
        flat = [l for ls in predicted for l in ls]
    else:
        gold = [i.label for i in instances]
        flat = list(predicted)
    return selection_score(
        manifest.grid["selection_metric"], manifest.task, gold, flat, labels
    )


def train(config: TrainerConfig) -> TrainResult:
    manifest = load_manifest(config.manifest_path)
    grid = manifest.grid
    train_instances = _load_split(config.instances_dir, manifest, "train")
    dev_instances = _load_split(config.instances_dir, manifest, "dev")
    if not train_instances:
        raise ValueError("no training instances")

    labels = label_set(manifest.task, train_instances)
    label_to_id = {label: idx for idx, label in enumerate(labels)}
    vocab = Vocab.build(_tokens_of(i) for i in list(train_instances) + list(dev_instances))

    device = config.device
    batch_size = int(grid["batch_size"])
    max_epochs = int(grid["max_epochs"])
    patience = int(grid.get("early_stopping_patience", 2))
    dropout = float(grid.get("dropout", 0.1))

    loss_fn = nn.CrossEntropyLoss(ignore_index=IGNORE)
    dev_log: dict[str, list[dict]] = {}
    best: Optional[dict] = None

    for lr in grid["learning_rates"]:
        torch.manual_seed(manifest.seed)
        model = build_encoder(
            config.encoder, len(vocab), len(labels), manifest.token_level, dropout
        ).to(device)
        optimizer = torch.optim.AdamW(
            model.parameters(),
            lr=lr,
            betas=(float(grid.get("adam_beta1", 0.9)), float(grid.get("adam_beta2", 0.99))),
            eps=float(grid.get("adam_epsilon", 1e-6)),
            weight_decay=float(grid.get("weight_decay", 0.01)),
        )
        curve = []
        best_for_lr = None
        since_best = 0
        try:
            for epoch in range(1, max_epochs + 1):
                model.train()
                order = list(range(len(train_instances)))
                random.Random(manifest.seed * 1000 + epoch).shuffle(order)
                for chosen in _batches(len(train_instances), batch_size, order):
                    batch = [train_instances[i] for i in chosen]
                    ids, mask, gold = _collate(batch, vocab, label_to_id,
                                               manifest.token_level, device)
                    logits = model(ids, mask)
                    loss = loss_fn(logits.reshape(-1, len(labels)), gold.reshape(-1))
                    optimizer.zero_grad()
                    loss.backward()
                    optimizer.step()
                score = _dev_score(model, dev_instances, vocab, labels, manifest, device)
                curve.append({"epoch": epoch, "dev": score})
                if best_for_lr is None or score > best_for_lr["dev"]:
                    best_for_lr = {
                        "lr": lr,
                        "epoch": epoch,
                        "dev": score,
                        "state": {k: v.clone() for k, v in model.state_dict().items()},
                    }
                    since_best = 0
                else:
                    since_best += 1
                    if since_best > patience:
                        break
        except RuntimeError as exc:
            if "out of memory" in str(exc).lower():
                raise RuntimeError(
                    "out of memory: lower batch_size in the manifest grid, shorten "
                    "inputs, or use the tiny encoder"
                ) from exc
            raise
        dev_log[f"{lr:g}"] = curve
        if best is None or best_for_lr["dev"] > best["dev"]:
            best = best_for_lr

    config.out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = config.out_dir / "checkpoint.pt"
    torch.save(
        {
            "model_state": best["state"],
            "vocab": vocab.stoi,
            "labels": labels,
            "task": manifest.task,
            "token_level": manifest.token_level,
            "encoder": config.encoder,
            "dropout": dropout,
            "best": {"lr": best["lr"], "epoch": best["epoch"], "dev": best["dev"]},
        },
        checkpoint_path,
    )
    dev_log_path = config.out_dir / "dev_log.json"
    dev_log_path.write_text(
        json.dumps(
            {
                "task": manifest.task,
                "seed": manifest.seed,
                "selection_metric": grid["selection_metric"],
                "curves": dev_log,
                "best": {"lr": best["lr"], "epoch": best["epoch"], "dev": best["dev"]},
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return TrainResult(
        checkpoint_path=checkpoint_path,
        dev_log_path=dev_log_path,
        best_lr=best["lr"],
        best_epoch=best["epoch"],
        best_dev=best["dev"],
    )


def predict(checkpoint_path: Path | str, instances_content: str, token_level_hint=None) -> str:
    """Label an instance file with a trained checkpoint; returns prediction
    JSONL with exactly one entry per instance id."""
    payload = torch.load(checkpoint_path, weights_only=False)
    token_level = payload["token_level"]
    vocab = Vocab(stoi=payload["vocab"])
    labels = payload["labels"]
    model = build_encoder(
        payload["encoder"], len(vocab), len(labels), token_level, payload["dropout"]
    )
    model.load_state_dict(payload["model_state"])

    if token_level:
        instances = parse_conll(instances_content)
    else:
        instances = parse_sequence_jsonl(instances_content)
    if not instances:
        return ""
    predicted = _predict_labels(model, instances, vocab, labels, token_level, "cpu")
    if token_level:
        return write_token_predictions(instances, predicted)
    return write_sequence_predictions(instances, predicted)
