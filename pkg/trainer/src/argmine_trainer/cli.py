"""Trainer command line: train on a manifest's instance files, then emit
prediction files for the planner to score."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .encoder import TINY
from .run import TrainerConfig, predict, train


def cmd_train(args) -> int:
    result = train(
        TrainerConfig(
            manifest_path=Path(args.manifest),
            instances_dir=Path(args.instances_dir),
            out_dir=Path(args.out_dir),
            encoder=args.encoder,
            device=args.device,
        )
    )
    print(
        f"best lr={result.best_lr:g} epoch={result.best_epoch} "
        f"dev={result.best_dev:.4f} -> {result.checkpoint_path}"
    )
    return 0


def cmd_predict(args) -> int:
    content = Path(args.instances).read_text(encoding="utf-8")
    output = predict(Path(args.checkpoint), content)
    Path(args.out).write_text(output, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="argmine-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fine-tune an encoder per the manifest grid")
    p.add_argument("--manifest", required=True)
    p.add_argument("--instances-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--encoder", default=TINY, help="'tiny' or a pretrained model name")
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="label an instance file with a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--instances", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
