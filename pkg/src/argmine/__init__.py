"""Toolkit for span-level argument annotations on hate tweets: corpus
model, standoff/JSONL codecs, normalization, agreement, metrics, and
experiment planning."""

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
    ValidationMode,
    ValidationReport,
    span_to_token_mask,
    tokenize,
    validate,
)

__all__ = [
    "AnnotationLayer",
    "ArgumentAnnotation",
    "Corpus",
    "Fragment",
    "Language",
    "PivotPair",
    "Premise",
    "PropositionType",
    "SourceFlags",
    "Span",
    "Token",
    "Tweet",
    "ValidationMode",
    "ValidationReport",
    "span_to_token_mask",
    "tokenize",
    "validate",
]

__version__ = "0.1.0"
