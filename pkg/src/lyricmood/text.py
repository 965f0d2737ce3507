"""Text pipeline: decode, normalize, tokenize, drop stopwords, count.

Tokens are split at whitespace and at every character whose Unicode general
category is punctuation (P*) or symbol (S*); danda and double danda are
punctuation (Po) and therefore separators too. Devanagari letters, vowel
signs, virama, nukta, anusvara/candrabindu and digits all stay inside tokens.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from lyricmood.errors import DecodeError
from lyricmood.moods import Mood

DANDA = "।"
DOUBLE_DANDA = "॥"
_BOM = "﻿"

TokenFrequencyTable = dict[str, int]


@dataclass(frozen=True)
class RawDocument:
    title: str
    body: str
    true_mood: Mood | None = None

    def __post_init__(self):
        if not self.title:
            raise ValueError("document title must be non-empty")


def decode(data: bytes, source: str | None = None) -> str:
    """Strict UTF-8 decode; a leading BOM is dropped."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(exc.start, source, exc.reason) from None
    return text[1:] if text.startswith(_BOM) else text


def read_document(path: str | Path, true_mood: Mood | None = None) -> RawDocument:
    path = Path(path)
    return RawDocument(path.stem, decode(path.read_bytes(), str(path)), true_mood)


@lru_cache(maxsize=4096)
def _is_latin(ch: str) -> bool:
    return unicodedata.name(ch, "").startswith("LATIN")


def _fold_latin(text: str) -> str:
    if text.isascii():
        return text.lower()
    return "".join(ch.lower() if ch.isupper() and _is_latin(ch) else ch for ch in text)


def normalize(raw: str | bytes) -> str:
    """Compose canonically, lowercase Latin letters and collapse whitespace.

    Bytes are decoded as strict UTF-8 first.
    """
    if isinstance(raw, bytes):
        raw = decode(raw)
    text = unicodedata.normalize("NFC", raw)
    text = _fold_latin(text)
    text = unicodedata.normalize("NFC", text)
    return " ".join(text.split())


@lru_cache(maxsize=8192)
def is_separator(ch: str) -> bool:
    if ch.isspace():
        return True
    return unicodedata.category(ch)[0] in "PS"


def tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    start = None
    for i, ch in enumerate(text):
        if is_separator(ch):
            if start is not None:
                tokens.append(text[start:i])
                start = None
        elif start is None:
            start = i
    if start is not None:
        tokens.append(text[start:])
    return tokens


def clean(tokens: Sequence[str], stopwords: Iterable[str] = frozenset()) -> list[str]:
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    if not stop:
        return list(tokens)
    return [t for t in tokens if t not in stop]


def build_frequency_table(tokens: Iterable[str]) -> TokenFrequencyTable:
    return dict(Counter(tokens))


def document_frequencies(body: str, stopwords: Iterable[str] = frozenset()) -> TokenFrequencyTable:
    """normalize -> tokenize -> clean -> count, in one call."""
    return build_frequency_table(clean(tokenize(normalize(body)), stopwords))


def parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        # a stopword line goes through the same pipeline as lyric text so
        # that its spelling matches the tokens it is meant to remove
        words.update(tokenize(normalize(line)))
    return frozenset(words)


def load_stopwords(path: str | Path | None) -> frozenset[str]:
    if path is None:
        return frozenset()
    path = Path(path)
    return parse_stopwords(decode(path.read_bytes(), str(path)))
