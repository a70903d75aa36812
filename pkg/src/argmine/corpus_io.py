"""Canonical JSONL corpus format, source-corpus filtering, and the
CoNLL-style token-classification export.

The JSONL file is the single source of truth for a corpus; standoff files
are an import/export codec around it.  One tweet per line:

    {"id": ..., "language": "en", "text": ..., "source_flags": {...}|null,
     "layers": {"<annotator>": {"argumentative": bool,
                                "justification": {"fragments": [[s,e],...], "type": "fact"},
                                "conclusion": {...}, "collective": {...}|null,
                                "property": {...}|null,
                                "pivot": {"just_side": {...}, "conc_side": {...}}|null}}}
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence, Union

from .model import (
    AnnotationLayer,
    ArgumentAnnotation,
    Corpus,
    Fragment,
    Language,
    PivotPair,
    Premise,
    PropositionType,
    SourceFlags,
    Span,
    Token,
    Tweet,
    span_to_token_mask,
    tokenize,
)
from .normalize import NormalizedText, normalize, project_span

SPAN_CATEGORIES = ("justification", "conclusion", "collective", "property", "pivot")
JOINT_PAIRS = (("collective", "property"), ("justification", "conclusion"))


class JsonlError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class OverlapWarning(UserWarning):
    """A token fell inside both categories of a joint export."""


@dataclass(frozen=True)
class HatevalRecord:
    id: str
    text: str
    hate_speech: bool
    targeted_individual: bool
    aggressive: bool
    language: Language

    def __post_init__(self) -> None:
        for name in ("hate_speech", "targeted_individual", "aggressive"):
            if not isinstance(getattr(self, name), bool):
                raise ValueError(f"record {self.id}: {name} must be a boolean")
        if not self.text:
            raise ValueError(f"record {self.id}: text must be non-empty")


def filter_hateval(records: Sequence[HatevalRecord]) -> list[Tweet]:
    """Keep hateful, non-aggressive, non-individually-targeted records.

    Aggressive tweets are mostly abusive rather than argumentative, and
    tweets aimed at specific individuals likewise, so both are dropped.
    Input order is preserved and the source labels stay on the tweet.
    """
    kept = []
    for rec in records:
        if rec.hate_speech and not rec.aggressive and not rec.targeted_individual:
            kept.append(
                Tweet(
                    id=rec.id,
                    language=rec.language,
                    text=rec.text,
                    source_flags=SourceFlags(
                        hate_speech=rec.hate_speech,
                        targeted_individual=rec.targeted_individual,
                        aggressive=rec.aggressive,
                    ),
                )
            )
    return kept


# -- JSONL --

def _span_to_json(span: Optional[Span]) -> Optional[dict]:
    if span is None:
        return None
    return {"fragments": [[f.start, f.end] for f in span.fragments]}


def _premise_to_json(premise: Optional[Premise]) -> Optional[dict]:
    if premise is None:
        return None
    payload = _span_to_json(premise.span)
    payload["type"] = premise.type.value
    return payload


def _annotation_to_json(ann: ArgumentAnnotation) -> dict:
    return {
        "argumentative": ann.argumentative,
        "justification": _premise_to_json(ann.justification),
        "conclusion": _premise_to_json(ann.conclusion),
        "collective": _span_to_json(ann.collective),
        "property": _span_to_json(ann.property),
        "pivot": None
        if ann.pivot is None
        else {
            "just_side": _span_to_json(ann.pivot.just_side),
            "conc_side": _span_to_json(ann.pivot.conc_side),
        },
    }


def write_jsonl(corpus: Corpus) -> str:
    """Serialize a corpus, one tweet per line, with stable field order."""
    lines = []
    for tweet in corpus.tweets:
        layers = {}
        for layer in corpus.layers:
            ann = layer.get(tweet.id)
            if ann is not None:
                layers[layer.annotator_id] = _annotation_to_json(ann)
        record = {
            "id": tweet.id,
            "language": tweet.language.value,
            "text": tweet.text,
            "source_flags": None
            if tweet.source_flags is None
            else {
                "hate_speech": tweet.source_flags.hate_speech,
                "targeted_individual": tweet.source_flags.targeted_individual,
                "aggressive": tweet.source_flags.aggressive,
            },
            "layers": layers,
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def _span_from_json(payload, lineno: int, what: str) -> Span:
    try:
        fragments = payload["fragments"]
        return Span.of((int(s), int(e)) for s, e in fragments)
    except (KeyError, TypeError, ValueError) as exc:
        raise JsonlError(lineno, f"bad {what} span: {exc}") from None


def _premise_from_json(payload, lineno: int, what: str) -> Premise:
    span = _span_from_json(payload, lineno, what)
    try:
        ptype = PropositionType(payload["type"])
    except (KeyError, ValueError):
        raise JsonlError(lineno, f"bad {what} type: {payload.get('type')!r}") from None
    return Premise(span=span, type=ptype)


def _annotation_from_json(payload: dict, lineno: int) -> ArgumentAnnotation:
    if "argumentative" not in payload:
        raise JsonlError(lineno, "layer entry missing 'argumentative'")
    just = payload.get("justification")
    conc = payload.get("conclusion")
    coll = payload.get("collective")
    prop = payload.get("property")
    pivot = payload.get("pivot")
    return ArgumentAnnotation(
        argumentative=bool(payload["argumentative"]),
        justification=None if just is None else _premise_from_json(just, lineno, "justification"),
        conclusion=None if conc is None else _premise_from_json(conc, lineno, "conclusion"),
        collective=None if coll is None else _span_from_json(coll, lineno, "collective"),
        property=None if prop is None else _span_from_json(prop, lineno, "property"),
        pivot=None
        if pivot is None
        else PivotPair(
            just_side=_span_from_json(pivot.get("just_side"), lineno, "pivot just_side"),
            conc_side=_span_from_json(pivot.get("conc_side"), lineno, "pivot conc_side"),
        ),
    )


def read_jsonl(source: Union[str, IO[str], Iterable[str]]) -> Corpus:
    """Parse the canonical JSONL format; schema problems name the line."""
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    else:
        lines = source

    tweets: list[Tweet] = []
    layer_anns: dict[str, dict[str, ArgumentAnnotation]] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise JsonlError(lineno, f"invalid JSON: {exc}") from None
        if not isinstance(record, dict):
            raise JsonlError(lineno, "expected a JSON object")
        for field in ("id", "language", "text"):
            if field not in record:
                raise JsonlError(lineno, f"missing {field!r}")
        try:
            language = Language(record["language"])
        except ValueError:
            raise JsonlError(lineno, f"unknown language {record['language']!r}") from None
        flags = record.get("source_flags")
        try:
            tweet = Tweet(
                id=str(record["id"]),
                language=language,
                text=record["text"],
                source_flags=None
                if flags is None
                else SourceFlags(
                    hate_speech=bool(flags["hate_speech"]),
                    targeted_individual=bool(flags["targeted_individual"]),
                    aggressive=bool(flags["aggressive"]),
                ),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise JsonlError(lineno, str(exc)) from None
        tweets.append(tweet)

        layers = record.get("layers", {})
        if not isinstance(layers, dict):
            raise JsonlError(lineno, "'layers' must be an object")
        for annotator, payload in layers.items():
            ann = _annotation_from_json(payload, lineno)
            layer_anns.setdefault(annotator, {})[tweet.id] = ann

    layers = tuple(
        AnnotationLayer(annotator_id=name, annotations=anns)
        for name, anns in layer_anns.items()
    )
    try:
        return Corpus(tweets=tuple(tweets), layers=layers)
    except ValueError as exc:
        raise JsonlError(0, str(exc)) from None


# -- token-classification export --

def merge_spans(spans: Iterable[Span]) -> Optional[Span]:
    """Union of spans with overlapping or adjacent fragments merged."""
    ranges = sorted((f.start, f.end) for span in spans for f in span.fragments)
    if not ranges:
        return None
    merged: list[list[int]] = []
    for start, end in ranges:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return Span(tuple(Fragment(s, e) for s, e in merged))


def category_span(ann: ArgumentAnnotation, category: str) -> Optional[Span]:
    """The span an annotation assigns to one exported category.

    The pivot is the union of its two sides: the task is one model over the
    whole tweet, so both sides flag the same mask.
    """
    if category == "justification":
        return ann.justification.span if ann.justification else None
    if category == "conclusion":
        return ann.conclusion.span if ann.conclusion else None
    if category == "collective":
        return ann.collective
    if category == "property":
        return ann.property
    if category == "pivot":
        if ann.pivot is None:
            return None
        return merge_spans([ann.pivot.just_side, ann.pivot.conc_side])
    raise ValueError(f"unknown category {category!r}")


def _tweet_tokens_and_spans(
    tweet: Tweet,
    ann: ArgumentAnnotation,
    categories: Sequence[str],
    normalized: bool,
    lexicon,
    emoji_table,
) -> tuple[list[Token], list[Optional[Span]], int]:
    spans = [category_span(ann, c) for c in categories]
    if normalized:
        nm: NormalizedText = normalize(tweet, lexicon, emoji_table)
        spans = [None if s is None else project_span(s, nm) for s in spans]
        text = nm.text
    else:
        text = tweet.text
    return tokenize(text), spans, len(text)


def export_token_classification(
    corpus: Corpus,
    layer: AnnotationLayer,
    category: Optional[str] = None,
    joint: Optional[tuple[str, str]] = None,
    normalized: bool = False,
    lexicon=None,
    emoji_table=None,
) -> str:
    """Render per-token labels, one blank-line-separated block per tweet.

    Single-category exports label tokens IN/OUT; joint exports use the two
    category names plus OUT, and only the two sanctioned pairs are allowed
    (a token may belong to at most one component of a step, so overlaps
    resolve to the first-listed category with a warning).  Only tweets the
    layer marks argumentative carry component spans, so others are skipped.
    """
    if (category is None) == (joint is None):
        raise ValueError("pass exactly one of category or joint")
    if category is not None and category not in SPAN_CATEGORIES:
        raise ValueError(f"unknown category {category!r}")
    if joint is not None and tuple(joint) not in JOINT_PAIRS:
        raise ValueError(f"joint pair must be one of {JOINT_PAIRS}, got {joint!r}")

    categories = [category] if category is not None else list(joint)
    blocks = []
    for tweet in corpus.tweets:
        ann = layer.get(tweet.id)
        if ann is None:
            raise ValueError(f"layer {layer.annotator_id!r} does not cover tweet {tweet.id}")
        if not ann.argumentative:
            continue
        tokens, spans, text_len = _tweet_tokens_and_spans(
            tweet, ann, categories, normalized, lexicon, emoji_table
        )
        masks = [
            [False] * len(tokens) if s is None else span_to_token_mask(s, tokens, text_len)
            for s in spans
        ]
        labels = []
        for idx in range(len(tokens)):
            hits = [i for i, mask in enumerate(masks) if mask[idx]]
            if category is not None:
                labels.append("IN" if hits else "OUT")
            else:
                if len(hits) == 2:
                    warnings.warn(
                        f"tweet {tweet.id}: token {tokens[idx].text!r} in both "
                        f"{joint[0]} and {joint[1]}; labeled {joint[0]}",
                        OverlapWarning,
                    )
                labels.append(joint[hits[0]].capitalize() if hits else "OUT")
        lines = [f"# id={tweet.id}"]
        lines.extend(f"{tok.text}\t{label}" for tok, label in zip(tokens, labels))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
