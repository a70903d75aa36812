"""Packaged data assets: segmentation lexicons and the emoji name table.

Both ship with the package so normalization is reproducible without any
third-party naming scheme.  The ``ARGMINE_DATA`` environment variable may
point at a directory holding replacement files with the same names.
"""

from __future__ import annotations

import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .model import Language
from .normalize import SegmentationLexicon

_LEXICON_FILES = {Language.EN: "lexicon_en.txt", Language.ES: "lexicon_es.txt"}
_EMOJI_FILE = "emoji_table.tsv"


def _read_asset(filename: str) -> str:
    override = os.environ.get("ARGMINE_DATA")
    if override:
        candidate = Path(override) / filename
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8")
    return resources.files("argmine.data").joinpath(filename).read_text(encoding="utf-8")


def load_lexicon(path: Path) -> SegmentationLexicon:
    """One lowercase word per line, UTF-8."""
    return SegmentationLexicon.from_words(path.read_text(encoding="utf-8").splitlines())


def load_emoji_table(path: Path) -> dict[str, str]:
    return _parse_emoji_table(path.read_text(encoding="utf-8"))


def _parse_emoji_table(content: str) -> dict[str, str]:
    """TSV of hyphen-joined hex codepoints to lowercase short name."""
    table: dict[str, str] = {}
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            codepoints, short_name = line.split("\t")
            seq = "".join(chr(int(cp, 16)) for cp in codepoints.split("-"))
        except ValueError as exc:
            raise ValueError(f"emoji table line {lineno}: {line!r}") from exc
        table[seq] = short_name.strip()
    return table


@lru_cache(maxsize=None)
def default_lexicon(language: Language) -> SegmentationLexicon:
    content = _read_asset(_LEXICON_FILES[language])
    return SegmentationLexicon.from_words(content.splitlines())


@lru_cache(maxsize=None)
def default_emoji_table() -> dict[str, str]:
    return _parse_emoji_table(_read_asset(_EMOJI_FILE))
