"""Inter-annotator agreement: Cohen's kappa per annotation category.

Argumentativeness and proposition types are compared per tweet; span
categories are compared per word, after harmonizing the two annotators'
token masks with the 50%-overlap rule and pooling all tokens of all shared
tweets into two long binary vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

from .corpus_io import category_span
from .model import AnnotationLayer, Corpus, PropositionType, span_to_token_mask, tokenize

TABLE_CATEGORIES = (
    "argumentative",
    "collective",
    "property",
    "pivot",
    "justification",
    "conclusion",
    "type_of_conclusion",
    "type_of_justification",
)
_SPAN_CATEGORIES = ("collective", "property", "pivot", "justification", "conclusion")


@dataclass(frozen=True)
class AgreementReport:
    """Per-category kappa (None when chance agreement is 1) and supports."""

    kappa: dict[str, Optional[float]]
    support: dict[str, int]

    def to_json(self) -> str:
        payload = {
            category: {"kappa": self.kappa[category], "support": self.support[category]}
            for category in TABLE_CATEGORIES
        }
        return json.dumps(payload, indent=2)


def cohen_kappa(
    labels_a: Sequence[Hashable],
    labels_b: Sequence[Hashable],
    label_domain: Iterable[Hashable],
) -> Optional[float]:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e).

    p_e is the product-marginal chance agreement.  Returns None (undefined)
    when p_e equals 1, i.e. both raters used one and the same label
    throughout; the degenerate case is detected with integer counts, so it
    is exact.
    """
    if len(labels_a) != len(labels_b):
        raise ValueError(f"label vectors differ in length: {len(labels_a)} vs {len(labels_b)}")
    if not labels_a:
        raise ValueError("need at least one labeled item")
    domain = set(label_domain)
    count_a: dict[Hashable, int] = {}
    count_b: dict[Hashable, int] = {}
    agreements = 0
    for a, b in zip(labels_a, labels_b):
        if a not in domain or b not in domain:
            raise ValueError(f"label outside domain: {a!r} / {b!r}")
        count_a[a] = count_a.get(a, 0) + 1
        count_b[b] = count_b.get(b, 0) + 1
        if a == b:
            agreements += 1
    n = len(labels_a)
    pe_num = sum(count_a.get(c, 0) * count_b.get(c, 0) for c in domain)
    if pe_num == n * n:
        return None
    return (agreements * n - pe_num) / (n * n - pe_num)


def harmonize_spans(
    mask_a: Sequence[bool], mask_b: Sequence[bool]
) -> tuple[list[bool], list[bool], bool]:
    """Apply the 50%-overlap criterion to two token masks of one tweet.

    If at least half of the words of the smaller component (ties favor
    mask_a) are also marked by the other annotator, both annotators are
    credited with exactly the smaller component and every other word counts
    as unmarked for both.  Otherwise the masks are returned unchanged.  Two
    empty masks trivially agree.
    """
    if len(mask_a) != len(mask_b):
        raise ValueError(f"mask lengths differ: {len(mask_a)} vs {len(mask_b)}")
    a, b = list(mask_a), list(mask_b)
    size_a, size_b = sum(a), sum(b)
    if size_a == 0 and size_b == 0:
        return a, b, True
    smaller = a if size_a <= size_b else b
    smallest_size = min(size_a, size_b)
    intersection = sum(1 for x, y in zip(a, b) if x and y)
    if smallest_size > 0 and 2 * intersection >= smallest_size:
        return list(smaller), list(smaller), True
    return a, b, False


def category_agreement(
    corpus: Corpus,
    layer_a: AnnotationLayer,
    layer_b: AnnotationLayer,
    category: str,
) -> tuple[Optional[float], int]:
    """Kappa and support for one category over the tweets both layers cover.

    Support is the number of compared items: tweets for the per-tweet
    categories, pooled tokens for the span categories.  A category with
    nothing to compare (e.g. no tweet where both layers typed a premise)
    reports (None, 0).
    """
    shared = [
        t for t in corpus.tweets if layer_a.get(t.id) is not None and layer_b.get(t.id) is not None
    ]
    if not shared:
        raise ValueError(
            f"layers {layer_a.annotator_id!r} and {layer_b.annotator_id!r} share no tweets"
        )

    if category == "argumentative":
        labels_a = [layer_a.get(t.id).argumentative for t in shared]
        labels_b = [layer_b.get(t.id).argumentative for t in shared]
        return cohen_kappa(labels_a, labels_b, (False, True)), len(shared)

    if category in ("type_of_justification", "type_of_conclusion"):
        field = "justification" if category == "type_of_justification" else "conclusion"
        types_a, types_b = [], []
        for t in shared:
            prem_a = getattr(layer_a.get(t.id), field)
            prem_b = getattr(layer_b.get(t.id), field)
            if prem_a is not None and prem_b is not None:
                types_a.append(prem_a.type)
                types_b.append(prem_b.type)
        if not types_a:
            return None, 0
        return cohen_kappa(types_a, types_b, tuple(PropositionType)), len(types_a)

    if category not in _SPAN_CATEGORIES:
        raise ValueError(f"unknown category {category!r}")

    pooled_a: list[bool] = []
    pooled_b: list[bool] = []
    for t in shared:
        tokens = tokenize(t.text)
        mask_a = _category_mask(layer_a, t, category, tokens)
        mask_b = _category_mask(layer_b, t, category, tokens)
        mask_a, mask_b, _ = harmonize_spans(mask_a, mask_b)
        pooled_a.extend(mask_a)
        pooled_b.extend(mask_b)
    if not pooled_a:
        return None, 0
    return cohen_kappa(pooled_a, pooled_b, (False, True)), len(pooled_a)


def _category_mask(layer: AnnotationLayer, tweet, category: str, tokens) -> list[bool]:
    span = category_span(layer.get(tweet.id), category)
    if span is None:
        return [False] * len(tokens)
    return span_to_token_mask(span, tokens, len(tweet.text))


def agreement_report(
    corpus: Corpus, layer_a: AnnotationLayer, layer_b: AnnotationLayer
) -> AgreementReport:
    kappa: dict[str, Optional[float]] = {}
    support: dict[str, int] = {}
    for category in TABLE_CATEGORIES:
        k, s = category_agreement(corpus, layer_a, layer_b, category)
        kappa[category] = k
        support[category] = s
    return AgreementReport(kappa=kappa, support=support)


def render_table(report: AgreementReport) -> str:
    """Aligned text table, one column per category."""
    headers = [c.replace("_", " ") for c in TABLE_CATEGORIES]
    kappas = [
        "undef" if report.kappa[c] is None else f"{report.kappa[c]:.2f}"
        for c in TABLE_CATEGORIES
    ]
    supports = [str(report.support[c]) for c in TABLE_CATEGORIES]
    widths = [
        max(len(h), len(k), len(s)) for h, k, s in zip(headers, kappas, supports)
    ]
    def row(name: str, cells: list[str]) -> str:
        body = "  ".join(c.rjust(w) for c, w in zip(cells, widths))
        return f"{name:<8}  {body}"
    return "\n".join([row("", headers), row("kappa", kappas), row("support", supports)])
