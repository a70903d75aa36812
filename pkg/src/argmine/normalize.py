"""Soft tweet normalization with a raw-to-normalized offset map.

Four rewrite rules are applied in order: user handles become the literal
token "@usuario", hashtags become "hashtag" followed by the segmented body,
mapped emoji become "emoji <name> emoji", and character runs longer than
three are capped at three.  Handles and hashtags are rewritten before
repetition capping so the detection sees raw markers and the special tokens
are never corrupted.

Spans are annotated on raw text, so every rewrite records an offset-map
segment; a raw character consumed by a rewrite maps to the full rewritten
segment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .model import Fragment, Span, Tweet

HANDLE_TOKEN = "@usuario"
HASHTAG_TOKEN = "hashtag"
EMOJI_TOKEN = "emoji"

_HANDLE_RE = re.compile(r"(?<!\w)@\w+")
_HASHTAG_RE = re.compile(r"(?<!\w)#(\w+)")


@dataclass(frozen=True)
class SegmentationLexicon:
    """Lowercase word list used to split hashtag bodies."""

    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("lexicon must be non-empty")

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    @classmethod
    def from_words(cls, words) -> "SegmentationLexicon":
        return cls(frozenset(w.strip().lower() for w in words if w.strip()))


@dataclass(frozen=True)
class MapSegment:
    """Maps raw range [raw_start, raw_end) onto normalized [norm_start, norm_end).

    Identity segments map character-for-character; rewrite segments map the
    whole raw range onto the whole normalized range.
    """

    raw_start: int
    raw_end: int
    norm_start: int
    norm_end: int
    identity: bool


@dataclass(frozen=True)
class NormalizedText:
    text: str
    segments: tuple[MapSegment, ...]

    @property
    def raw_length(self) -> int:
        return self.segments[-1].raw_end if self.segments else 0


class _Block:
    """Marks normalized characters produced by one rewrite of raw [start, end)."""

    __slots__ = ("raw_start", "raw_end")

    def __init__(self, raw_start: int, raw_end: int) -> None:
        self.raw_start = raw_start
        self.raw_end = raw_end


# An edit replaces text[start:end] with a replacement string.
_Edit = tuple[int, int, str]


def _repetition_edits(text: str) -> list[_Edit]:
    edits = []
    i, n = 0, len(text)
    while i < n:
        j = i
        while j < n and text[j] == text[i]:
            j += 1
        if j - i > 3:
            edits.append((i, j, text[i] * 3))
        i = j
    return edits


def _handle_edits(text: str) -> list[_Edit]:
    return [
        (m.start(), m.end(), HANDLE_TOKEN)
        for m in _HANDLE_RE.finditer(text)
        if m.group() != HANDLE_TOKEN
    ]


def _hashtag_edits(text: str, lexicon: Optional[SegmentationLexicon]) -> list[_Edit]:
    edits = []
    for m in _HASHTAG_RE.finditer(text):
        words = expand_hashtag(m.group(1), lexicon)
        rep = HASHTAG_TOKEN + " " + " ".join(words)
        # a preceding "@" or "#" must not fuse with the literal token
        if m.start() > 0 and not text[m.start() - 1].isspace():
            rep = " " + rep
        edits.append((m.start(), m.end(), rep))
    return edits


def _emoji_edits(text: str, table: Optional[Mapping[str, str]]) -> list[_Edit]:
    if not table:
        return []
    by_first: dict[str, list[str]] = {}
    for seq in table:
        by_first.setdefault(seq[0], []).append(seq)
    for seqs in by_first.values():
        seqs.sort(key=len, reverse=True)

    edits = []
    i, n = 0, len(text)
    while i < n:
        match = None
        for seq in by_first.get(text[i], ()):
            if text.startswith(seq, i):
                match = seq
                break
        if match is None:
            i += 1
            continue
        name = table[match].replace("_", " ")
        edits.append((i, i + len(match), f"{EMOJI_TOKEN} {name} {EMOJI_TOKEN}"))
        i += len(match)

    # Keep the special tokens word-separated from surrounding text.
    starts = {s for s, _, _ in edits}
    padded = []
    for s, e, rep in edits:
        if s > 0 and not text[s - 1].isspace():
            rep = " " + rep
        if e < n and not text[e].isspace() and e not in starts:
            rep = rep + " "
        padded.append((s, e, rep))
    return padded


def cap_repetitions(text: str) -> str:
    """Limit every run of one repeated character to at most three."""
    return _apply_textual(text, _repetition_edits(text))


def replace_handles(text: str) -> str:
    """Rewrite every @handle to the special token, leaving emails alone."""
    return _apply_textual(text, _handle_edits(text))


def replace_emoji(text: str, emoji_table: Mapping[str, str]) -> str:
    """Rewrite each mapped emoji to its wrapped text name."""
    return _apply_textual(text, _emoji_edits(text, emoji_table))


def _apply_textual(text: str, edits: list[_Edit]) -> str:
    out, pos = [], 0
    for s, e, rep in edits:
        out.append(text[pos:s])
        out.append(rep)
        pos = e
    out.append(text[pos:])
    return "".join(out)


def expand_hashtag(tag_text: str, lexicon: Optional[SegmentationLexicon]) -> list[str]:
    """Split a hashtag body into lowercase words.

    CamelCase bodies split at case boundaries.  Otherwise the body is
    segmented to minimize out-of-lexicon chunks, breaking ties by fewer
    chunks and then by leftmost-longest; if nothing beats the whole body it
    is returned as a single lowercased word.
    """
    if not tag_text:
        raise ValueError("empty hashtag body")
    parts = _camel_split(tag_text)
    if len(parts) > 1:
        return [p.lower() for p in parts]
    body = tag_text.lower()
    if lexicon is None:
        return [body]
    return _segment(body, lexicon)


def _camel_split(s: str) -> list[str]:
    cuts = []
    for i in range(1, len(s)):
        prev, cur = s[i - 1], s[i]
        nxt = s[i + 1] if i + 1 < len(s) else ""
        if cur.isupper() and (prev.islower() or prev.isdigit()):
            cuts.append(i)
        elif cur.isupper() and prev.isupper() and nxt.islower():
            cuts.append(i)
    parts, last = [], 0
    for c in cuts:
        parts.append(s[last:c])
        last = c
    parts.append(s[last:])
    return parts


def _segment(body: str, lexicon: SegmentationLexicon) -> list[str]:
    n = len(body)
    # best[i] = (oov_count, chunk_count, words) for body[i:]; scanning chunk
    # lengths longest-first makes ties resolve to the leftmost-longest split.
    best: list[tuple[int, int, tuple[str, ...]]] = [(0, 0, ())] * (n + 1)
    for i in range(n - 1, -1, -1):
        chosen = None
        for length in range(n - i, 0, -1):
            chunk = body[i : i + length]
            oov = 0 if chunk in lexicon else 1
            tail = best[i + length]
            cand = (oov + tail[0], 1 + tail[1], (chunk,) + tail[2])
            if chosen is None or (cand[0], cand[1]) < (chosen[0], chosen[1]):
                chosen = cand
        best[i] = chosen
    return list(best[0][2])


def normalize_text(
    text: str,
    lexicon: Optional[SegmentationLexicon] = None,
    emoji_table: Optional[Mapping[str, str]] = None,
) -> NormalizedText:
    """Run the full rewrite pipeline and return the text with its offset map."""
    prov: list = list(range(len(text)))
    cur = text
    stages: list[Callable[[str], list[_Edit]]] = [
        _handle_edits,
        lambda t: _hashtag_edits(t, lexicon),
        lambda t: _emoji_edits(t, emoji_table),
        _repetition_edits,
    ]
    for stage in stages:
        cur, prov = _apply_edits(cur, prov, stage(cur))
    return NormalizedText(text=cur, segments=tuple(_coalesce(prov)))


def normalize(
    tweet: Tweet,
    lexicon: Optional[SegmentationLexicon] = None,
    emoji_table: Optional[Mapping[str, str]] = None,
) -> NormalizedText:
    """Normalize a tweet, defaulting to the packaged per-language assets."""
    from . import assets

    if lexicon is None:
        lexicon = assets.default_lexicon(tweet.language)
    if emoji_table is None:
        emoji_table = assets.default_emoji_table()
    return normalize_text(tweet.text, lexicon, emoji_table)


def _apply_edits(text: str, prov: list, edits: list[_Edit]) -> tuple[str, list]:
    if not edits:
        return text, prov

    # Never split an earlier rewrite block: widen each edit to block
    # boundaries, then merge edits whose widened ranges overlap.
    widened = []
    for s, e, rep in edits:
        S, E = s, e
        while S > 0 and isinstance(prov[S], _Block) and prov[S - 1] is prov[S]:
            S -= 1
        while E < len(text) and isinstance(prov[E - 1], _Block) and prov[E] is prov[E - 1]:
            E += 1
        widened.append((S, E, [(s, e, rep)]))

    groups: list[tuple[int, int, list[_Edit]]] = []
    for S, E, parts in widened:
        if groups and S < groups[-1][1]:
            ps, pe, pparts = groups[-1]
            groups[-1] = (ps, max(pe, E), pparts + parts)
        else:
            groups.append((S, E, parts))

    out: list[str] = []
    new_prov: list = []
    pos = 0
    for S, E, parts in groups:
        out.append(text[pos:S])
        new_prov.extend(prov[pos:S])
        pieces, at = [], S
        for s, e, rep in parts:
            pieces.append(text[at:s])
            pieces.append(rep)
            at = e
        pieces.append(text[at:E])
        rep_text = "".join(pieces)
        raw_lo = min(p.raw_start if isinstance(p, _Block) else p for p in prov[S:E])
        raw_hi = max(p.raw_end if isinstance(p, _Block) else p + 1 for p in prov[S:E])
        block = _Block(raw_lo, raw_hi)
        out.append(rep_text)
        new_prov.extend([block] * len(rep_text))
        pos = E
    out.append(text[pos:])
    new_prov.extend(prov[pos:])
    return "".join(out), new_prov


def _coalesce(prov: list) -> list[MapSegment]:
    segments = []
    i, n = 0, len(prov)
    while i < n:
        p = prov[i]
        j = i
        if isinstance(p, _Block):
            while j < n and prov[j] is p:
                j += 1
            segments.append(MapSegment(p.raw_start, p.raw_end, i, j, identity=False))
        else:
            while j < n and isinstance(prov[j], int) and prov[j] == p + (j - i):
                j += 1
            segments.append(MapSegment(p, p + (j - i), i, j, identity=True))
        i = j
    return segments


def project_span(span: Span, nm: NormalizedText) -> Span:
    """Map a raw-text span onto the normalized text.

    Each fragment maps to the union of normalized ranges its raw range
    overlaps; ranges touching a rewrite take the whole rewritten segment.
    Adjacent or overlapping images are merged.
    """
    raw_len = nm.raw_length
    images: list[tuple[int, int]] = []
    for frag in span.fragments:
        if frag.end > raw_len:
            raise ValueError(
                f"fragment ({frag.start}, {frag.end}) outside mapped raw range 0..{raw_len}"
            )
        for seg in nm.segments:
            if seg.raw_end <= frag.start or frag.end <= seg.raw_start:
                continue
            if seg.identity:
                lo = seg.norm_start + max(frag.start, seg.raw_start) - seg.raw_start
                hi = seg.norm_start + min(frag.end, seg.raw_end) - seg.raw_start
            else:
                lo, hi = seg.norm_start, seg.norm_end
            images.append((lo, hi))

    images.sort()
    merged: list[list[int]] = []
    for lo, hi in images:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return Span(tuple(Fragment(lo, hi) for lo, hi in merged))
