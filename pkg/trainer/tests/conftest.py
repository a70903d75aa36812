import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus.jsonl"

FULL_GRID = {
    "learning_rates": [1e-05, 2e-05, 5e-05, 5e-04, 5e-06],
    "batch_size": 16,
    "max_epochs": 10,
    "dropout": 0.1,
    "weight_decay": 0.01,
    "adam_epsilon": 1e-06,
    "adam_beta1": 0.9,
    "adam_beta2": 0.99,
    "early_stopping_patience": 2,
    "selection_metric": "target_f1",
}


def grid_for(task: str, **overrides) -> dict:
    grid = dict(FULL_GRID)
    if task.startswith("type-of") or task.startswith("joint"):
        grid["selection_metric"] = "macro_f1"
    grid.update(overrides)
    return grid


def corpus_ids() -> tuple[list[str], list[str]]:
    """(argumentative ids, all ids) from the fixture corpus file."""
    argumentative, everything = [], []
    for line in CORPUS.read_text(encoding="utf-8").splitlines():
        record = json.loads(line)
        everything.append(record["id"])
        if record["layers"]["ann1"]["argumentative"]:
            argumentative.append(record["id"])
    return argumentative, everything


def make_manifest(path: Path, task: str, seed: int, train, dev, test,
                  fraction: float = 1.0, **grid_overrides) -> Path:
    payload = {
        "scheme": "mono-en",
        "task": task,
        "seed": seed,
        "fraction": fraction,
        "train": list(train),
        "dev": list(dev),
        "test": list(test),
        "grid": grid_for(task, **grid_overrides),
    }
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


def split_ids(seed: int, n_train=32, n_dev=8, n_test=8) -> tuple[list, list, list]:
    _, everything = corpus_ids()
    order = sorted(everything)
    random.Random(seed).shuffle(order)
    return order[:n_train], order[n_train:n_train + n_dev], order[n_train + n_dev:n_train + n_dev + n_test]


def planner(*args) -> subprocess.CompletedProcess:
    """Invoke the planning toolkit CLI; the only interface to the primary."""
    cmd = [sys.executable, "-m", "argmine.cli", *map(str, args)]
    return subprocess.run(cmd, capture_output=True, text=True, check=True)


def export_instances(manifest: Path, out_dir: Path, layer: str = "ann1") -> Path:
    planner(
        "export", "--corpus", CORPUS, "--layer", layer,
        "--manifest", manifest, "--out-dir", out_dir,
    )
    return out_dir


@pytest.fixture(scope="session")
def corpus_file() -> Path:
    assert CORPUS.is_file()
    return CORPUS
