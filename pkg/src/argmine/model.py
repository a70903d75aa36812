"""Domain model for span-level argument annotations on tweets.

A tweet is annotated with up to five components: a Justification and a
Conclusion (each typed fact/value/policy), the targeted Collective, the
negative Property associated with it, and a Pivot pair (one word sequence
inside each premise signalling their common element).  Components are
character spans over the raw tweet text and may be discontinuous.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence


class Language(Enum):
    EN = "en"
    ES = "es"


class PropositionType(Enum):
    FACT = "fact"
    VALUE = "value"
    POLICY = "policy"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


class ValidationMode(Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class SourceFlags:
    """Labels carried over from the source hate-speech corpus."""

    hate_speech: bool
    targeted_individual: bool
    aggressive: bool


@dataclass(frozen=True)
class Tweet:
    id: str
    language: Language
    text: str
    source_flags: Optional[SourceFlags] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("tweet id must be non-empty")
        if not self.text:
            raise ValueError(f"tweet {self.id}: text must be non-empty")
        if not isinstance(self.language, Language):
            raise ValueError(f"tweet {self.id}: bad language {self.language!r}")


@dataclass(frozen=True, order=True)
class Fragment:
    """Half-open character range [start, end) into the addressed text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValueError(f"bad fragment ({self.start}, {self.end})")

    def overlaps(self, other: "Fragment") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class Span:
    """Non-empty sequence of ordered, non-overlapping fragments.

    Components may be split into several non-contiguous parts of the tweet,
    so a span is a list of fragments rather than a single range.
    """

    fragments: tuple[Fragment, ...]

    def __post_init__(self) -> None:
        if not self.fragments:
            raise ValueError("span must have at least one fragment")
        prev = None
        for frag in self.fragments:
            if prev is not None and frag.start < prev.end:
                raise ValueError(f"span fragments unordered or overlapping: {self.fragments}")
            prev = frag

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "Span":
        return cls(tuple(Fragment(s, e) for s, e in pairs))

    @property
    def start(self) -> int:
        return self.fragments[0].start

    @property
    def end(self) -> int:
        return self.fragments[-1].end

    def slice(self, text: str, sep: str = " ") -> str:
        return sep.join(text[f.start:f.end] for f in self.fragments)


@dataclass(frozen=True)
class Premise:
    """A Justification or Conclusion span together with its proposition type."""

    span: Span
    type: PropositionType


@dataclass(frozen=True)
class PivotPair:
    """One word sequence per premise marking their common element."""

    just_side: Span
    conc_side: Span


@dataclass(frozen=True)
class ArgumentAnnotation:
    """One annotator's analysis of one tweet.

    Construction only checks shapes; protocol rules (argumentative tweets
    carry exactly one justification and conclusion, pivot sides sit inside
    their premises, ...) are checked by :func:`validate`, which reports
    instead of raising so that real-world annotation mistakes stay loadable.
    """

    argumentative: bool
    justification: Optional[Premise] = None
    conclusion: Optional[Premise] = None
    collective: Optional[Span] = None
    property: Optional[Span] = None
    pivot: Optional[PivotPair] = None

    def components(self) -> dict[str, Optional[Span]]:
        """Component name to span; pivot flattened to its two sides."""
        return {
            "justification": self.justification.span if self.justification else None,
            "conclusion": self.conclusion.span if self.conclusion else None,
            "collective": self.collective,
            "property": self.property,
            "pivot_just_side": self.pivot.just_side if self.pivot else None,
            "pivot_conc_side": self.pivot.conc_side if self.pivot else None,
        }


@dataclass(frozen=True)
class AnnotationLayer:
    """All annotations produced by one annotator, keyed by tweet id."""

    annotator_id: str
    annotations: Mapping[str, ArgumentAnnotation]

    def __post_init__(self) -> None:
        if not self.annotator_id:
            raise ValueError("annotator_id must be non-empty")

    def get(self, tweet_id: str) -> Optional[ArgumentAnnotation]:
        return self.annotations.get(tweet_id)


@dataclass(frozen=True)
class Corpus:
    """Ordered tweets plus any number of annotation layers.

    Every tweet id referenced by a layer must exist in the corpus.
    """

    tweets: tuple[Tweet, ...]
    layers: tuple[AnnotationLayer, ...] = ()

    def __post_init__(self) -> None:
        ids = [t.id for t in self.tweets]
        id_set = set(ids)
        if len(id_set) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate tweet ids: {dupes}")
        names = [l.annotator_id for l in self.layers]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate annotator ids: {names}")
        for layer in self.layers:
            unknown = set(layer.annotations) - id_set
            if unknown:
                raise ValueError(
                    f"layer {layer.annotator_id!r} references unknown tweets: {sorted(unknown)}"
                )

    def tweet(self, tweet_id: str) -> Tweet:
        for t in self.tweets:
            if t.id == tweet_id:
                return t
        raise KeyError(tweet_id)

    def layer(self, annotator_id: str) -> AnnotationLayer:
        for l in self.layers:
            if l.annotator_id == annotator_id:
                return l
        raise KeyError(annotator_id)

    def by_language(self, language: Language) -> tuple[Tweet, ...]:
        return tuple(t for t in self.tweets if t.language == language)


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if not self.text or self.end - self.start != len(self.text):
            raise ValueError(f"inconsistent token {self}")


@dataclass(frozen=True)
class Issue:
    severity: Severity
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    tweet_id: str
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == Severity.ERROR)

    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == Severity.WARNING)


def _is_separator(ch: str) -> bool:
    return ch.isspace()


def _is_punct(ch: str) -> bool:
    # Punctuation and symbols (Unicode P* and S*) split off words.
    return unicodedata.category(ch)[0] in ("P", "S")


def tokenize(text: str) -> list[Token]:
    """Split text into word tokens with character offsets.

    Rule: split on Unicode whitespace, peel leading/trailing punctuation or
    symbol characters into single-character tokens, and split the remainder
    on internal "/" (so "arrest/prosecute" yields three tokens).  Offsets
    always slice the input back to the token text.
    """
    tokens: list[Token] = []

    def emit(start: int, end: int) -> None:
        if end > start:
            tokens.append(Token(text[start:end], start, end))

    i, n = 0, len(text)
    while i < n:
        if _is_separator(text[i]):
            i += 1
            continue
        j = i
        while j < n and not _is_separator(text[j]):
            j += 1
        # chunk is text[i:j]
        lo, hi = i, j
        while lo < hi and _is_punct(text[lo]):
            emit(lo, lo + 1)
            lo += 1
        trailing = []
        while hi > lo and _is_punct(text[hi - 1]):
            trailing.append(hi - 1)
            hi -= 1
        word_start = lo
        for k in range(lo, hi):
            if text[k] == "/":
                emit(word_start, k)
                emit(k, k + 1)
                word_start = k + 1
        emit(word_start, hi)
        for pos in reversed(trailing):
            emit(pos, pos + 1)
        i = j
    return tokens


def span_to_token_mask(
    span: Span, tokens: Sequence[Token], text_length: Optional[int] = None
) -> list[bool]:
    """Per-token membership flags: a token is in the span iff it overlaps
    any fragment by at least one character.

    Annotators may cut mid-word, so partial overlap still counts the word.
    When ``text_length`` is given the span is bounds-checked against it.
    """
    if text_length is not None and span.end > text_length:
        raise ValueError(
            f"span ends at {span.end} but text has only {text_length} characters"
        )
    mask = []
    for tok in tokens:
        hit = any(f.start < tok.end and tok.start < f.end for f in span.fragments)
        mask.append(hit)
    return mask


_COMPONENT_FIELDS = ("justification", "conclusion", "collective", "property", "pivot")


def validate(
    tweet: Tweet, annotation: ArgumentAnnotation, mode: ValidationMode = ValidationMode.STRICT
) -> ValidationReport:
    """Check an annotation against the protocol rules.

    Problems are reported, never raised.  Strict mode flags every violated
    rule as an error; lenient mode demotes pivot containment and an unpaired
    collective/property to warnings, since both occur in real annotations.
    """
    issues: list[Issue] = []
    demoted = Severity.ERROR if mode == ValidationMode.STRICT else Severity.WARNING

    def add(severity: Severity, code: str, message: str) -> None:
        issues.append(Issue(severity, code, message))

    if annotation.argumentative:
        if annotation.justification is None:
            add(Severity.ERROR, "MISSING_JUSTIFICATION", "argumentative tweet has no justification")
        if annotation.conclusion is None:
            add(Severity.ERROR, "MISSING_CONCLUSION", "argumentative tweet has no conclusion")
    else:
        for name in _COMPONENT_FIELDS:
            if getattr(annotation, name) is not None:
                add(
                    Severity.ERROR,
                    "UNEXPECTED_COMPONENT",
                    f"non-argumentative tweet carries a {name}",
                )

    if annotation.pivot is not None and (
        annotation.justification is None or annotation.conclusion is None
    ):
        add(Severity.ERROR, "PIVOT_WITHOUT_PREMISES", "pivot requires both premises")

    if (annotation.collective is None) != (annotation.property is None):
        if annotation.collective is not None:
            add(demoted, "COLLECTIVE_WITHOUT_PROPERTY", "collective marked without a property")
        else:
            add(demoted, "PROPERTY_WITHOUT_COLLECTIVE", "property marked without a collective")

    if annotation.pivot is not None:
        sides = (
            ("justification", annotation.pivot.just_side, annotation.justification),
            ("conclusion", annotation.pivot.conc_side, annotation.conclusion),
        )
        for name, side, premise in sides:
            if premise is not None and not _contained(side, premise.span):
                add(
                    demoted,
                    "PIVOT_OUTSIDE_PREMISE",
                    f"pivot {name} side extends outside the {name} span",
                )

    length = len(tweet.text)
    for name, span in annotation.components().items():
        if span is not None and span.end > length:
            add(
                Severity.ERROR,
                "SPAN_OUT_OF_BOUNDS",
                f"{name} span ends at {span.end} but text has {length} characters",
            )

    return ValidationReport(tweet_id=tweet.id, issues=tuple(issues))


def _contained(inner: Span, outer: Span) -> bool:
    """Every character range of ``inner`` lies inside some fragment of ``outer``."""
    return all(
        any(o.start <= f.start and f.end <= o.end for o in outer.fragments)
        for f in inner.fragments
    )
