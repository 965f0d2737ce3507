"""Corpus ingestion, per-mood train/test split and confusion-matrix evaluation."""

from __future__ import annotations

import csv
import io
import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from lyricmood.classifier import Prediction, UpdatePolicy, classify_and_learn, classify_document
from lyricmood.errors import CorpusError, DuplicateKeyError, LabelError, NoEvidence
from lyricmood.kb import KnowledgeBase
from lyricmood.moods import MOODS, N_MOODS, Mood
from lyricmood.text import RawDocument, read_document

log = logging.getLogger(__name__)


def ingest_corpus(root: str | Path) -> list[RawDocument]:
    """Read ``root/<mood>/<title>.txt`` into labeled documents, sorted by (mood, title)."""
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"corpus root {root} is not a directory")
    docs: list[RawDocument] = []
    seen: dict[str, Path] = {}
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        try:
            mood = Mood.parse(sub.name)
        except LabelError as exc:
            raise LabelError(f"{sub}: {exc}") from None
        for path in sorted(sub.glob("*.txt")):
            if path.stem in seen:
                raise DuplicateKeyError(f"duplicate song title {path.stem!r}: {seen[path.stem]} and {path}")
            seen[path.stem] = path
            docs.append(read_document(path, mood))
    docs.sort(key=lambda d: (d.true_mood.index, d.title))
    return docs


def missing_moods(root: str | Path) -> list[Mood]:
    root = Path(root)
    return [m for m in MOODS if not (root / m.value).is_dir()]


def split_corpus(
    docs: Sequence[RawDocument], train_per_mood: int, test_per_mood: int, seed: int
) -> tuple[list[RawDocument], list[RawDocument]]:
    """Seeded per-mood shuffle; the first ``train_per_mood`` go to train, the next ``test_per_mood`` to test."""
    if train_per_mood < 0 or test_per_mood < 0:
        raise ValueError("split sizes must be non-negative")
    by_mood: dict[Mood, list[RawDocument]] = {m: [] for m in MOODS}
    for d in docs:
        if d.true_mood is None:
            raise LabelError(f"document {d.title!r} has no mood label")
        by_mood[d.true_mood].append(d)
    need = train_per_mood + test_per_mood
    short = [(m, need - len(ds)) for m, ds in by_mood.items() if len(ds) < need]
    if short:
        detail = ", ".join(f"{m.value} is short by {n}" for m, n in short)
        raise CorpusError(f"not enough documents for a {train_per_mood}/{test_per_mood} split: {detail}")
    train: list[RawDocument] = []
    test: list[RawDocument] = []
    for m in MOODS:
        # sort first so the split does not depend on the caller's ordering
        pool = sorted(by_mood[m], key=lambda d: d.title)
        random.Random(f"{seed}:{m.value}").shuffle(pool)
        train.extend(pool[:train_per_mood])
        test.extend(pool[train_per_mood:need])
    return train, test


@dataclass
class ConfusionMatrix:
    """Rows are actual moods, columns predicted moods, both in canonical order."""

    cells: list[list[int]] = field(default_factory=lambda: [[0] * N_MOODS for _ in range(N_MOODS)])
    no_evidence: list[int] = field(default_factory=lambda: [0] * N_MOODS)

    def add(self, actual: Mood, predicted: Mood | None) -> None:
        if predicted is None:
            self.no_evidence[actual.index] += 1
        else:
            self.cells[actual.index][predicted.index] += 1

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        return ConfusionMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.cells, other.cells)],
            [a + b for a, b in zip(self.no_evidence, other.no_evidence)],
        )

    def row_total(self, mood: Mood) -> int:
        return sum(self.cells[mood.index]) + self.no_evidence[mood.index]

    @property
    def total(self) -> int:
        return sum(map(sum, self.cells)) + sum(self.no_evidence)

    @property
    def trace(self) -> int:
        return sum(self.cells[i][i] for i in range(N_MOODS))

    def accuracy(self) -> float:
        if self.total == 0:
            raise ValueError("empty test set")
        return self.trace / self.total

    def precision(self, mood: Mood) -> float | None:
        j = mood.index
        predicted = sum(row[j] for row in self.cells)
        return self.cells[j][j] / predicted if predicted else None

    def recall(self, mood: Mood) -> float | None:
        actual = self.row_total(mood)
        return self.cells[mood.index][mood.index] / actual if actual else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["actual\\predicted", *(m.value for m in MOODS), "no_evidence"])
        for m in MOODS:
            w.writerow([m.value, *self.cells[m.index], self.no_evidence[m.index]])
        return buf.getvalue()


@dataclass
class EvalReport:
    matrix: ConfusionMatrix
    predictions: list[Prediction]
    seed: int | None = None
    kb_revision: int = 0
    update_policy: UpdatePolicy = UpdatePolicy.OFF

    @property
    def accuracy(self) -> float:
        return self.matrix.accuracy()

    def precision(self) -> dict[str, float]:
        # moods never predicted have no precision and are left out
        return {m.value: p for m in MOODS if (p := self.matrix.precision(m)) is not None}

    def recall(self) -> dict[str, float]:
        return {m.value: r for m in MOODS if (r := self.matrix.recall(m)) is not None}

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "test_documents": self.matrix.total,
            "correct": self.matrix.trace,
            "moods": [m.value for m in MOODS],
            "confusion_matrix": self.matrix.cells,
            "no_evidence": {m.value: self.matrix.no_evidence[m.index] for m in MOODS},
            "precision": self.precision(),
            "recall": self.recall(),
            "seed": self.seed,
            "kb_revision": self.kb_revision,
            "update_policy": self.update_policy.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def format_table(self) -> str:
        width = max(len(m.value) for m in MOODS) + 2
        head = "actual \\ predicted".ljust(width + 8)
        lines = [head + "".join(m.value[:width].rjust(width) for m in MOODS) + "no_evid".rjust(width)]
        for m in MOODS:
            row = self.matrix.cells[m.index] + [self.matrix.no_evidence[m.index]]
            lines.append(m.value.ljust(width + 8) + "".join(str(v).rjust(width) for v in row))
        lines.append("")
        lines.append(f"accuracy: {self.accuracy:.4f} ({self.matrix.trace}/{self.matrix.total})")
        prec, rec = self.precision(), self.recall()
        for m in MOODS:
            p = f"{prec[m.value]:.3f}" if m.value in prec else "n/a"
            r = f"{rec[m.value]:.3f}" if m.value in rec else "n/a"
            lines.append(f"  {m.value:<{width}} precision {p:>6}  recall {r:>6}")
        return "\n".join(lines) + "\n"


def evaluate(
    kb: KnowledgeBase,
    test: Sequence[RawDocument],
    stopwords: Iterable[str] = frozenset(),
    *,
    update_policy: UpdatePolicy | str = UpdatePolicy.OFF,
    seed: int | None = None,
    workers: int = 1,
) -> EvalReport:
    """Classify every test document and tally the confusion matrix.

    The knowledge base is left untouched unless ``update_policy`` is not
    ``off``, in which case documents are processed sequentially in the given
    order and results depend on that order.
    """
    if not test:
        raise ValueError("empty test set")
    policy = UpdatePolicy.parse(update_policy)
    stop = frozenset(stopwords)
    for d in test:
        if d.true_mood is None:
            raise LabelError(f"test document {d.title!r} has no mood label")

    if policy is not UpdatePolicy.OFF:
        log.warning("update policy %r: the knowledge base changes during evaluation; "
                    "results depend on test order", policy.value)
        outcomes = []
        for d in test:
            try:
                outcomes.append(classify_and_learn(d, kb, stop, policy))
            except NoEvidence:
                outcomes.append(None)
    elif workers > 1:
        chunks = [list(test[i::workers]) for i in range(workers)]
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda chunk: _classify_frozen(kb, chunk, stop), chunks))
        matrix = sum((_tally(c, p) for c, p in zip(chunks, parts)), ConfusionMatrix())
        outcomes = [None] * len(test)
        for w, part in enumerate(parts):
            outcomes[w::workers] = part
        return EvalReport(matrix, [p for p in outcomes if p is not None], seed, kb.revision, policy)
    else:
        outcomes = _classify_frozen(kb, test, stop)

    matrix = _tally(test, outcomes)
    return EvalReport(
        matrix=matrix,
        predictions=[p for p in outcomes if p is not None],
        seed=seed,
        kb_revision=kb.revision,
        update_policy=policy,
    )


def _classify_frozen(kb: KnowledgeBase, docs: Sequence[RawDocument], stop: frozenset[str]) -> list[Prediction | None]:
    out: list[Prediction | None] = []
    for d in docs:
        try:
            out.append(classify_document(d, kb, stop))
        except NoEvidence:
            log.info("no evidence for %r", d.title)
            out.append(None)
    return out


def _tally(docs: Sequence[RawDocument], outcomes: Sequence[Prediction | None]) -> ConfusionMatrix:
    matrix = ConfusionMatrix()
    for d, pred in zip(docs, outcomes):
        matrix.add(d.true_mood, pred.mood if pred is not None else None)
    return matrix


def matrix_from_table(rows: Sequence[Sequence[int]]) -> ConfusionMatrix:
    if len(rows) != N_MOODS or any(len(r) != N_MOODS for r in rows):
        raise ValueError(f"confusion table must be {N_MOODS}x{N_MOODS}")
    return ConfusionMatrix([list(map(int, r)) for r in rows])
