"""Word-level knowledge base: per-mood occurrence counts and probabilities.

Counts are authoritative. ``total`` and ``probs`` are derived by
:meth:`KnowledgeBase.recompute`, which :meth:`KnowledgeBase.merge` deliberately
does not call, so a batch of merges is followed by a single recompute pass.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from lyricmood.errors import DuplicateKeyError, KBParseError, LabelError, SchemaError
from lyricmood.moods import MOODS, N_MOODS, Mood
from lyricmood.text import RawDocument, document_frequencies

log = logging.getLogger(__name__)

HEADER: tuple[str, ...] = (
    ("word",) + tuple(m.value for m in MOODS) + ("Total",) + tuple(f"prob_{m.value}" for m in MOODS)
)
PROB_TOLERANCE = 1e-6


@dataclass
class KnowledgeBaseEntry:
    word: str
    counts: list[int] = field(default_factory=lambda: [0] * N_MOODS)
    total: int = 0
    probs: list[float] = field(default_factory=lambda: [0.0] * N_MOODS)

    def recompute(self) -> None:
        total = sum(self.counts)
        self.total = total
        if total == 0:
            self.probs = [0.0] * N_MOODS
        else:
            self.probs = [c / total for c in self.counts]

    def count(self, mood: Mood) -> int:
        return self.counts[mood.index]

    def prob(self, mood: Mood) -> float:
        return self.probs[mood.index]


class KnowledgeBase:
    def __init__(self, entries: Iterable[KnowledgeBaseEntry] = ()):
        self.entries: dict[str, KnowledgeBaseEntry] = {}
        self.revision = 0
        for e in entries:
            if e.word in self.entries:
                raise DuplicateKeyError(f"duplicate word {e.word!r}")
            self.entries[e.word] = e

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __getitem__(self, word: str) -> KnowledgeBaseEntry:
        return self.entries[word]

    def __iter__(self) -> Iterator[KnowledgeBaseEntry]:
        return iter(self.entries.values())

    def get(self, word: str) -> KnowledgeBaseEntry | None:
        return self.entries.get(word)

    def __eq__(self, other: object) -> bool:
        # content equality; revision is bookkeeping and is ignored
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"KnowledgeBase({len(self.entries)} words, revision={self.revision})"

    def merge(self, freq: Mapping[str, int], mood: Mood) -> KnowledgeBase:
        """Add a document's term counts under ``mood``. Totals/probs are left stale."""
        i = Mood.parse(mood).index
        entries = self.entries
        for word, n in freq.items():
            e = entries.get(word)
            if e is None:
                e = entries[word] = KnowledgeBaseEntry(word)
            e.counts[i] += n
        self.revision += 1
        return self

    def recompute(self) -> KnowledgeBase:
        for e in self.entries.values():
            e.recompute()
        self.revision += 1
        return self

    def copy(self) -> KnowledgeBase:
        kb = KnowledgeBase(
            KnowledgeBaseEntry(e.word, list(e.counts), e.total, list(e.probs)) for e in self
        )
        kb.revision = self.revision
        return kb

    def save(self, path: str | Path) -> None:
        # OSError from open() already carries the path
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        for word in sorted(self.entries):
            e = self.entries[word]
            writer.writerow([word, *e.counts, e.total, *(format_prob(p) for p in e.probs)])
        return buf.getvalue()

    @classmethod
    def load(cls, path: str | Path) -> KnowledgeBase:
        path = Path(path)
        raw = path.read_bytes()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise KBParseError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from None
        return cls.from_csv(text, source=str(path))

    @classmethod
    def from_csv(cls, text: str, source: str = "<string>") -> KnowledgeBase:
        if text.startswith("﻿"):
            text = text[1:]
        reader = csv.reader(io.StringIO(text, newline=""))
        header = next(reader, None)
        if header is None or tuple(header) != HEADER:
            raise SchemaError(
                f"{source}: header must be {','.join(HEADER)!r}, got {','.join(header or [])!r}"
            )
        kb = cls()
        stored: dict[str, list[float]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(HEADER):
                raise KBParseError(f"{source}: row {lineno}: expected {len(HEADER)} fields, got {len(row)}")
            word = row[0]
            if not word:
                raise KBParseError(f"{source}: row {lineno}: empty word")
            if word in kb.entries:
                raise DuplicateKeyError(f"{source}: row {lineno}: duplicate word {word!r}")
            counts = [_parse_count(v, source, lineno) for v in row[1 : 1 + N_MOODS]]
            stored_total = _parse_count(row[1 + N_MOODS], source, lineno)
            try:
                stored[word] = [float(v) for v in row[2 + N_MOODS :]]
            except ValueError:
                raise KBParseError(f"{source}: row {lineno}: non-numeric probability") from None
            kb.entries[word] = KnowledgeBaseEntry(word, counts, stored_total)
        bad = [e.word for e in kb if e.total != sum(e.counts)]
        kb.recompute()
        bad += [
            e.word
            for e in kb
            if e.word not in bad
            and not all(
                math.isclose(a, b, rel_tol=0, abs_tol=PROB_TOLERANCE) for a, b in zip(e.probs, stored[e.word])
            )
        ]
        if bad:
            log.warning(
                "%s: stored probabilities disagree with counts for %d word(s): %s; counts win",
                source, len(bad), ", ".join(bad),
            )
        kb.revision = 0
        return kb


def _parse_count(value: str, source: str, lineno: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise KBParseError(f"{source}: row {lineno}: count {value!r} is not an integer") from None
    if n < 0:
        raise KBParseError(f"{source}: row {lineno}: negative count {n}")
    return n


def format_prob(p: float) -> str:
    # 10 significant digits, zero and one bare: 55/56 -> 0.9821428571, 1.0 -> 1
    return format(p, ".10g")


def build_from_corpus(docs: Iterable[RawDocument], stopwords: Iterable[str] = frozenset()) -> KnowledgeBase:
    stop = frozenset(stopwords)
    kb = KnowledgeBase()
    seen: set[str] = set()
    for doc in docs:
        if doc.title in seen:
            raise DuplicateKeyError(f"duplicate document title {doc.title!r}")
        seen.add(doc.title)
        if doc.true_mood is None:
            raise LabelError(f"document {doc.title!r} has no mood label")
        kb.merge(document_frequencies(doc.body, stop), doc.true_mood)
    return kb.recompute()
