"""Standoff annotation codec (.txt raw text + .ann offset entries).

Text-bound lines are tab-separated: entry id, label with offsets
(discontinuous ranges joined by ";"), covered text.  Attribute lines attach
a proposition type to a premise entry:

    T1	Justification 0 10	sanctuary cities are
    T2	Conclusion 21 36;40 45	shut them down
    A1	PropositionType T1 Fact

The covered-text column is cross-checked against the .txt content on parse,
which pins annotation offsets to the raw tweet text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    ArgumentAnnotation,
    Language,
    PivotPair,
    Premise,
    PropositionType,
    SourceFlags,
    Span,
    Tweet,
    ValidationMode,
    validate,
)

ENTITY_LABELS = (
    "Argumentative",
    "NonArgumentative",
    "Justification",
    "Conclusion",
    "Collective",
    "Property",
    "PivotJ",
    "PivotC",
)
TYPE_ATTRIBUTE = "PropositionType"
_TYPE_VALUES = {
    "Fact": PropositionType.FACT,
    "Value": PropositionType.VALUE,
    "Policy": PropositionType.POLICY,
}
_TYPE_NAMES = {v: k for k, v in _TYPE_VALUES.items()}


class StandoffError(ValueError):
    """Raised for malformed or inconsistent standoff content."""


@dataclass(frozen=True)
class StandoffEntry:
    entry_id: str
    label: str
    fragments: tuple[tuple[int, int], ...]
    covered_text: str


def _covered(text: str, fragments) -> str:
    # Newlines and tabs would corrupt the tab-separated line format.
    joined = " ".join(text[s:e] for s, e in fragments)
    return joined.replace("\n", " ").replace("\t", " ").replace("\r", " ")


def parse_standoff(
    ann_content: str,
    txt_content: str,
    tweet_id: str,
    language: Language,
    source_flags: Optional[SourceFlags] = None,
) -> tuple[Tweet, ArgumentAnnotation]:
    """Parse one annotated document into the in-memory model.

    The standoff files carry no tweet id or language, so those are supplied
    by the caller (the ingest command takes them from the directory layout).
    """
    entries: dict[str, StandoffEntry] = {}
    attributes: list[tuple[str, str, str]] = []  # (attr_id, target, value)

    for lineno, line in enumerate(ann_content.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise StandoffError(f"line {lineno}: expected tab-separated fields: {line!r}")
        entry_id = parts[0]
        if entry_id.startswith("T"):
            entries[entry_id] = _parse_textbound(parts, txt_content, lineno)
        elif entry_id.startswith("A"):
            attributes.append(_parse_attribute(parts, lineno))
        else:
            raise StandoffError(f"line {lineno}: unknown entry kind {entry_id!r}")

    return (
        Tweet(id=tweet_id, language=language, text=txt_content, source_flags=source_flags),
        _assemble(entries, attributes),
    )


def _parse_textbound(parts: list[str], text: str, lineno: int) -> StandoffEntry:
    if len(parts) != 3:
        raise StandoffError(f"line {lineno}: text-bound entry needs 3 fields")
    entry_id, body, covered = parts
    label, _, offsets = body.partition(" ")
    if label not in ENTITY_LABELS:
        raise StandoffError(f"line {lineno}: unknown label {label!r}")
    fragments = []
    for pair in offsets.split(";"):
        try:
            start_s, end_s = pair.split()
            start, end = int(start_s), int(end_s)
        except ValueError:
            raise StandoffError(f"line {lineno}: malformed offsets {offsets!r}") from None
        if not (0 <= start < end <= len(text)):
            raise StandoffError(f"line {lineno}: offsets {start} {end} outside text")
        fragments.append((start, end))
    expected = _covered(text, fragments)
    if covered != expected:
        raise StandoffError(
            f"line {lineno}: covered text mismatch: got {covered!r}, text slices to {expected!r}"
        )
    return StandoffEntry(entry_id, label, tuple(fragments), covered)


def _parse_attribute(parts: list[str], lineno: int) -> tuple[str, str, str]:
    if len(parts) != 2:
        raise StandoffError(f"line {lineno}: attribute entry needs 2 fields")
    attr_id, body = parts
    fields = body.split()
    if len(fields) == 3 and fields[0] == TYPE_ATTRIBUTE and fields[2] in _TYPE_VALUES:
        return attr_id, fields[1], fields[2]
    # binary form: the value is the attribute name itself
    if len(fields) == 2 and fields[0] in _TYPE_VALUES:
        return attr_id, fields[1], fields[0]
    raise StandoffError(f"line {lineno}: unrecognized attribute {body!r}")


def _assemble(
    entries: dict[str, StandoffEntry], attributes: list[tuple[str, str, str]]
) -> ArgumentAnnotation:
    by_label: dict[str, list[StandoffEntry]] = {}
    for entry in entries.values():
        by_label.setdefault(entry.label, []).append(entry)

    for label in ("Justification", "Conclusion", "Collective", "Property", "PivotJ", "PivotC"):
        if len(by_label.get(label, [])) > 1:
            raise StandoffError(f"duplicate {label} entries")
    if by_label.get("Argumentative") and by_label.get("NonArgumentative"):
        raise StandoffError("both Argumentative and NonArgumentative markers present")

    types: dict[str, PropositionType] = {}
    for attr_id, target, value in attributes:
        if target not in entries:
            raise StandoffError(f"attribute {attr_id} targets unknown entry {target}")
        if target in types:
            raise StandoffError(f"entry {target} has multiple proposition types")
        types[target] = _TYPE_VALUES[value]

    def single(label: str) -> Optional[StandoffEntry]:
        found = by_label.get(label)
        return found[0] if found else None

    def span_of(entry: StandoffEntry) -> Span:
        return Span.of(entry.fragments)

    def premise_of(entry: Optional[StandoffEntry]) -> Optional[Premise]:
        if entry is None:
            return None
        if entry.entry_id not in types:
            raise StandoffError(f"premise entry {entry.entry_id} has no proposition type")
        return Premise(span=span_of(entry), type=types[entry.entry_id])

    justification = premise_of(single("Justification"))
    conclusion = premise_of(single("Conclusion"))
    pivot_j, pivot_c = single("PivotJ"), single("PivotC")
    if (pivot_j is None) != (pivot_c is None):
        raise StandoffError("pivot requires both PivotJ and PivotC entries")
    pivot = (
        PivotPair(just_side=span_of(pivot_j), conc_side=span_of(pivot_c))
        if pivot_j is not None and pivot_c is not None
        else None
    )

    if single("NonArgumentative") is not None:
        argumentative = False
    elif single("Argumentative") is not None:
        argumentative = True
    else:
        argumentative = justification is not None or conclusion is not None

    collective = single("Collective")
    prop = single("Property")
    return ArgumentAnnotation(
        argumentative=argumentative,
        justification=justification,
        conclusion=conclusion,
        collective=span_of(collective) if collective else None,
        property=span_of(prop) if prop else None,
        pivot=pivot,
    )


def write_standoff(tweet: Tweet, annotation: ArgumentAnnotation) -> tuple[str, str]:
    """Render one annotated tweet; the inverse of :func:`parse_standoff`.

    The annotation must be clean under lenient validation, otherwise the
    produced file could not be parsed back.
    """
    report = validate(tweet, annotation, ValidationMode.LENIENT)
    if report.errors():
        codes = [i.code for i in report.errors()]
        raise StandoffError(f"annotation for {tweet.id} not writable: {codes}")

    text = tweet.text
    lines: list[str] = []
    attr_lines: list[str] = []

    def emit(label: str, fragments) -> str:
        entry_id = f"T{len(lines) + 1}"
        offsets = ";".join(f"{s} {e}" for s, e in fragments)
        lines.append(f"{entry_id}\t{label} {offsets}\t{_covered(text, fragments)}")
        return entry_id

    def emit_span(label: str, span: Span) -> str:
        return emit(label, [(f.start, f.end) for f in span.fragments])

    marker = "Argumentative" if annotation.argumentative else "NonArgumentative"
    emit(marker, [(0, len(text))])

    for label, premise in (
        ("Justification", annotation.justification),
        ("Conclusion", annotation.conclusion),
    ):
        if premise is not None:
            entry_id = emit_span(label, premise.span)
            attr_lines.append(
                f"A{len(attr_lines) + 1}\t{TYPE_ATTRIBUTE} {entry_id} {_TYPE_NAMES[premise.type]}"
            )
    if annotation.collective is not None:
        emit_span("Collective", annotation.collective)
    if annotation.property is not None:
        emit_span("Property", annotation.property)
    if annotation.pivot is not None:
        emit_span("PivotJ", annotation.pivot.just_side)
        emit_span("PivotC", annotation.pivot.conc_side)

    return "\n".join(lines + attr_lines) + "\n", text
