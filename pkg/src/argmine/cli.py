"""Command-line entry point.

Subcommands are thin adapters over the library: ingest (standoff tree to
JSONL), validate, normalize, stats, agreement, export (task instances),
plan (manifests), score (predictions to report), plot (ablation SVG).
Exit codes: 0 success, 1 validation/data errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import agreement as agreement_mod
from . import experiments, metrics, plot, stats as stats_mod
from .corpus_io import read_jsonl, write_jsonl
from .model import Corpus, Language, ValidationMode, validate
from .normalize import normalize
from .standoff import StandoffError, parse_standoff


def _load_corpus(path: str) -> Corpus:
    with open(path, encoding="utf-8") as handle:
        return read_jsonl(handle)


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return 1


def cmd_ingest(args) -> int:
    root = Path(args.standoff_dir)
    if not root.is_dir():
        return _fail(f"{root}: not a directory")
    jobs = []
    for annotator_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for lang_dir in sorted(p for p in annotator_dir.iterdir() if p.is_dir()):
            try:
                language = Language(lang_dir.name)
            except ValueError:
                return _fail(f"{lang_dir}: directory name must be a language code (en/es)")
            for txt_path in sorted(lang_dir.glob("*.txt")):
                ann_path = txt_path.with_suffix(".ann")
                if not ann_path.is_file():
                    return _fail(f"{ann_path}: missing annotation file")
                jobs.append((annotator_dir.name, language, txt_path, ann_path))

    def parse_one(job):
        annotator, language, txt_path, ann_path = job
        tweet, ann = parse_standoff(
            ann_path.read_text(encoding="utf-8"),
            txt_path.read_text(encoding="utf-8"),
            tweet_id=txt_path.stem,
            language=language,
        )
        return annotator, tweet, ann

    try:
        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                parsed = list(pool.map(parse_one, jobs))
        else:
            parsed = [parse_one(job) for job in jobs]
    except StandoffError as exc:
        return _fail(str(exc))

    tweets = {}
    layers: dict[str, dict] = {}
    for annotator, tweet, ann in parsed:
        seen = tweets.get(tweet.id)
        if seen is None:
            tweets[tweet.id] = tweet
        elif seen.text != tweet.text or seen.language != tweet.language:
            return _fail(f"tweet {tweet.id}: text differs between annotator directories")
        layers.setdefault(annotator, {})[tweet.id] = ann

    from .model import AnnotationLayer

    corpus = Corpus(
        tweets=tuple(sorted(tweets.values(), key=lambda t: (t.language.value, t.id))),
        layers=tuple(
            AnnotationLayer(annotator_id=name, annotations=anns)
            for name, anns in sorted(layers.items())
        ),
    )
    Path(args.out).write_text(write_jsonl(corpus), encoding="utf-8")
    print(f"wrote {len(corpus.tweets)} tweets, {len(corpus.layers)} layers to {args.out}")
    return 0


def cmd_validate(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
    except ValueError as exc:
        return _fail(f"{args.corpus}: {exc}")
    mode = ValidationMode.STRICT if args.strict else ValidationMode.LENIENT
    layers = corpus.layers
    if args.layer:
        layers = tuple(l for l in layers if l.annotator_id == args.layer)
        if not layers:
            return _fail(f"no layer named {args.layer!r}")
    had_errors = False
    for layer in layers:
        for tweet in corpus.tweets:
            ann = layer.get(tweet.id)
            if ann is None:
                continue
            report = validate(tweet, ann, mode)
            for issue in report.issues:
                print(
                    f"{layer.annotator_id}\t{tweet.id}\t{issue.severity.value}"
                    f"\t{issue.code}\t{issue.message}"
                )
                if issue.severity.value == "error":
                    had_errors = True
    return 1 if had_errors else 0


def cmd_normalize(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
    except ValueError as exc:
        return _fail(f"{args.corpus}: {exc}")
    lines = []
    for tweet in corpus.tweets:
        nm = normalize(tweet)
        lines.append(
            json.dumps(
                {"id": tweet.id, "language": tweet.language.value, "text": nm.text},
                ensure_ascii=False,
            )
        )
    content = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(content, encoding="utf-8")
    else:
        sys.stdout.write(content)
    return 0


def cmd_stats(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
        layer = corpus.layer(args.layer)
        result = stats_mod.corpus_stats(corpus, layer)
    except (KeyError, ValueError) as exc:
        return _fail(str(exc))
    print(result.to_json() if args.json else stats_mod.render_tables(result))
    return 0


def cmd_agreement(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
        report = agreement_mod.agreement_report(
            corpus, corpus.layer(args.a), corpus.layer(args.b)
        )
    except (KeyError, ValueError) as exc:
        return _fail(str(exc))
    print(report.to_json() if args.json else agreement_mod.render_table(report))
    return 0


def cmd_plan(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
        manifest = experiments.make_partitions(corpus, args.scheme, args.task, args.seed)
        if args.fraction != 1.0:
            manifest = experiments.subsample_train(manifest, args.fraction)
    except ValueError as exc:
        return _fail(str(exc))
    Path(args.out).write_text(manifest.to_json() + "\n", encoding="utf-8")
    print(
        f"wrote manifest: scheme={manifest.scheme} task={manifest.task} "
        f"seed={manifest.seed} fraction={manifest.fraction} "
        f"sizes={len(manifest.train)}/{len(manifest.dev)}/{len(manifest.test)}"
    )
    return 0


def cmd_export(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
        layer = corpus.layer(args.layer)
        manifest = experiments.ExperimentManifest.from_json(
            Path(args.manifest).read_text(encoding="utf-8")
        )
        files = experiments.task_instances(corpus, layer, manifest)
    except (KeyError, ValueError) as exc:
        return _fail(str(exc))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = (
        ".conll"
        if manifest.task in experiments.SPAN_TASKS or manifest.task in experiments.JOINT_TASKS
        else ".jsonl"
    )
    for name, content in files.items():
        (out_dir / f"{name}{suffix}").write_text(content, encoding="utf-8")
    print(f"wrote {len(files)} instance files to {out_dir}")
    return 0


def cmd_score(args) -> int:
    if len(args.manifest) != len(args.predictions):
        return _fail("need one --predictions per --manifest")
    try:
        corpus = _load_corpus(args.corpus)
        layer = corpus.layer(args.layer)
        runs = []
        for manifest_path, prediction_path in zip(args.manifest, args.predictions):
            manifest = experiments.ExperimentManifest.from_json(
                Path(manifest_path).read_text(encoding="utf-8")
            )
            runs.append((manifest, Path(prediction_path).read_text(encoding="utf-8")))
        entry = experiments.score_group(
            corpus, layer, runs, setting=args.setting, test_variant=args.test_variant
        )
    except (KeyError, ValueError) as exc:
        return _fail(str(exc))

    entries = []
    out_path = Path(args.out) if args.out else None
    if out_path and args.append and out_path.is_file():
        entries = list(
            metrics.MetricsReport.from_json(out_path.read_text(encoding="utf-8")).entries
        )
    entries.append(entry)
    report = metrics.MetricsReport(entries=tuple(entries))
    if out_path:
        out_path.write_text(report.to_json() + "\n", encoding="utf-8")
    print(
        f"{entry.task} [{entry.setting}] fraction={entry.fraction}: "
        f"F1 {entry.aggregate.cell()} P {entry.aggregate.mean_precision:.2f} "
        f"R {entry.aggregate.mean_recall:.2f}"
    )
    return 0


def cmd_plot(args) -> int:
    try:
        report = metrics.MetricsReport.from_json(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"{args.report}: {exc}")
    Path(args.out).write_text(plot.render_ablation_svg(report), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="argmine", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="standoff directory tree to corpus JSONL")
    p.add_argument("--standoff-dir", required=True, help="layout: <annotator>/<lang>/<id>.{txt,ann}")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check annotations against the protocol")
    p.add_argument("--corpus", required=True)
    p.add_argument("--layer", default=None)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", default=True)
    mode.add_argument("--lenient", dest="strict", action="store_false")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("normalize", help="emit normalized tweet text")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("stats", help="corpus composition tables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--layer", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("agreement", help="inter-annotator kappa per category")
    p.add_argument("--corpus", required=True)
    p.add_argument("--a", required=True, help="first annotator id")
    p.add_argument("--b", required=True, help="second annotator id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("plan", help="emit an experiment manifest")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scheme", required=True, choices=experiments.SCHEMES)
    p.add_argument("--task", required=True, choices=experiments.TASKS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--fraction", type=float, default=1.0,
                   choices=experiments.FRACTIONS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("export", help="emit task instance files for a manifest")
    p.add_argument("--corpus", required=True)
    p.add_argument("--layer", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("score", help="score prediction files against a manifest group")
    p.add_argument("--corpus", required=True)
    p.add_argument("--layer", required=True)
    p.add_argument("--manifest", action="append", required=True)
    p.add_argument("--predictions", action="append", required=True)
    p.add_argument("--setting", default="default", help="model setting label for the report")
    p.add_argument("--test-variant", default="test")
    p.add_argument("--out", default=None, help="report JSON path")
    p.add_argument("--append", action="store_true", help="append to an existing report")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("plot", help="render ablation curves from a report JSON")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
