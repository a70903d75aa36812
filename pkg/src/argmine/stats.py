"""Corpus composition statistics.

Per language: how many tweets are non-argumentative, how many carry a
collective/property pair and a pivot (all over all tweets), and how the
premise types distribute over fact/policy/value (over argumentative tweets,
since only those carry premises).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .model import AnnotationLayer, Corpus, Language, PropositionType


@dataclass(frozen=True)
class LanguageStats:
    tweet_count: int
    pct_non_argumentative: float
    pct_with_collective_property_pair: float
    pct_with_pivot: float
    justification_types: dict[str, float]  # fact/policy/value percentages
    conclusion_types: dict[str, float]


@dataclass(frozen=True)
class CorpusStats:
    languages: dict[str, LanguageStats]

    def to_json(self) -> str:
        return json.dumps(
            {lang: vars(stats) for lang, stats in self.languages.items()}, indent=2
        )


def corpus_stats(corpus: Corpus, layer: AnnotationLayer) -> CorpusStats:
    if not corpus.tweets:
        raise ValueError("empty corpus")
    languages: dict[str, LanguageStats] = {}
    for language in Language:
        tweets = corpus.by_language(language)
        if not tweets:
            continue
        annotations = []
        for tweet in tweets:
            ann = layer.get(tweet.id)
            if ann is None:
                raise ValueError(
                    f"layer {layer.annotator_id!r} does not cover tweet {tweet.id}"
                )
            annotations.append(ann)
        total = len(annotations)
        non_arg = sum(1 for a in annotations if not a.argumentative)
        pair = sum(
            1 for a in annotations if a.collective is not None and a.property is not None
        )
        pivot = sum(1 for a in annotations if a.pivot is not None)
        languages[language.value] = LanguageStats(
            tweet_count=total,
            pct_non_argumentative=100.0 * non_arg / total,
            pct_with_collective_property_pair=100.0 * pair / total,
            pct_with_pivot=100.0 * pivot / total,
            justification_types=_type_distribution(annotations, "justification"),
            conclusion_types=_type_distribution(annotations, "conclusion"),
        )
    return CorpusStats(languages=languages)


def _type_distribution(annotations, premise_field: str) -> dict[str, float]:
    counts = {ptype: 0 for ptype in PropositionType}
    total = 0
    for ann in annotations:
        if not ann.argumentative:
            continue
        premise = getattr(ann, premise_field)
        if premise is not None:
            counts[premise.type] += 1
            total += 1
    if total == 0:
        return {ptype.value: 0.0 for ptype in PropositionType}
    return {ptype.value: 100.0 * counts[ptype] / total for ptype in PropositionType}


def render_tables(stats: CorpusStats) -> str:
    """Two aligned text tables: corpus composition and premise types."""
    lines = ["language  non-arg%  coll/prop%  pivot%  tweets"]
    for lang, s in stats.languages.items():
        lines.append(
            f"{lang:<8}  {s.pct_non_argumentative:>7.1f}  {s.pct_with_collective_property_pair:>9.1f}"
            f"  {s.pct_with_pivot:>5.1f}  {s.tweet_count:>6}"
        )
    lines.append("")
    lines.append("language  premise        F%     P%     V%")
    for lang, s in stats.languages.items():
        for name, dist in (("justification", s.justification_types),
                           ("conclusion", s.conclusion_types)):
            lines.append(
                f"{lang:<8}  {name:<12}  {dist['fact']:>5.1f}  {dist['policy']:>5.1f}"
                f"  {dist['value']:>5.1f}"
            )
    return "\n".join(lines)
