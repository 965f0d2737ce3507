"""Score documents against the knowledge base and fold them back in.

A document's score for mood ``m`` is the sum, over its in-vocabulary tokens
``t``, of ``freq[t] * kb[t].probs[m]``. Out-of-vocabulary tokens are dropped
and reported. The predicted mood is the argmax, ties going to the earliest
mood in canonical order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Sequence

from lyricmood.errors import LabelError, NoEvidence
from lyricmood.kb import KnowledgeBase
from lyricmood.moods import MOODS, N_MOODS, Mood
from lyricmood.text import RawDocument, TokenFrequencyTable, document_frequencies

TIE_TOLERANCE = 1e-12


class UpdatePolicy(str, Enum):
    OFF = "off"
    PREDICTED = "predicted"
    GROUND_TRUTH = "ground-truth"

    @classmethod
    def parse(cls, value: str | UpdatePolicy) -> UpdatePolicy:
        try:
            return cls(value)
        except ValueError:
            raise LabelError(f"unknown update policy {value!r}") from None


class MatchedTerm(NamedTuple):
    word: str
    count: int
    contributions: tuple[float, ...]

    def contribution(self, mood: Mood) -> float:
        return self.contributions[mood.index]


@dataclass(frozen=True)
class DocumentScores:
    scores: tuple[float, ...]
    matched_terms: tuple[MatchedTerm, ...] = ()
    oov_terms: tuple[str, ...] = ()

    def __getitem__(self, mood: Mood) -> float:
        return self.scores[mood.index]

    def as_dict(self) -> dict[str, float]:
        return {m.value: s for m, s in zip(MOODS, self.scores)}


@dataclass(frozen=True)
class Prediction:
    title: str
    mood: Mood
    scores: DocumentScores
    tie: bool = False
    matched_terms: tuple[MatchedTerm, ...] = field(default=())
    oov_terms: tuple[str, ...] = field(default=())

    def top_terms(self, k: int = 5, mood: Mood | None = None) -> list[MatchedTerm]:
        """Matched terms ranked by contribution to ``mood`` (the predicted one by default)."""
        i = (mood or self.mood).index
        ranked = sorted(
            (t for t in self.matched_terms if t.contributions[i] > 0),
            key=lambda t: (-t.contributions[i], t.word),
        )
        return ranked[:k]

    def to_record(self, top_k: int = 5) -> dict:
        i = self.mood.index
        return {
            "title": self.title,
            "mood": self.mood.value,
            "tie": self.tie,
            "scores": self.scores.as_dict(),
            "matched_term_count": len(self.matched_terms),
            "oov_term_count": len(self.oov_terms),
            "top_terms": [
                {"word": t.word, "count": t.count, "contribution": t.contributions[i]}
                for t in self.top_terms(top_k)
            ],
        }

    def to_json(self, top_k: int = 5) -> str:
        return json.dumps(self.to_record(top_k), ensure_ascii=False)


def score_document(freq: Mapping[str, int], kb: KnowledgeBase) -> DocumentScores:
    totals = [0.0] * N_MOODS
    matched: list[MatchedTerm] = []
    oov: list[str] = []
    entries = kb.entries
    for word, n in freq.items():
        e = entries.get(word)
        if e is None:
            oov.append(word)
            continue
        contrib = tuple(n * p for p in e.probs)
        for i in range(N_MOODS):
            totals[i] += contrib[i]
        matched.append(MatchedTerm(word, n, contrib))
    return DocumentScores(tuple(totals), tuple(matched), tuple(oov))


def predict(scores: DocumentScores | Sequence[float], title: str = "") -> Prediction:
    if not isinstance(scores, DocumentScores):
        scores = DocumentScores(tuple(float(s) for s in scores))
    values = scores.scores
    if len(values) != N_MOODS:
        raise ValueError(f"expected {N_MOODS} scores, got {len(values)}")
    best = max(values)
    if best <= 0.0:
        raise NoEvidence(title)
    winners = [i for i, v in enumerate(values) if best - v <= TIE_TOLERANCE]
    return Prediction(
        title=title,
        mood=MOODS[winners[0]],
        scores=scores,
        tie=len(winners) > 1,
        matched_terms=scores.matched_terms,
        oov_terms=scores.oov_terms,
    )


def classify_frequencies(freq: TokenFrequencyTable, kb: KnowledgeBase, title: str = "") -> Prediction:
    return predict(score_document(freq, kb), title)


def classify_document(
    doc: RawDocument, kb: KnowledgeBase, stopwords: Iterable[str] = frozenset()
) -> Prediction:
    return classify_frequencies(document_frequencies(doc.body, stopwords), kb, doc.title)


def incremental_update(kb: KnowledgeBase, freq: Mapping[str, int], mood: Mood) -> KnowledgeBase:
    return kb.merge(freq, mood).recompute()


def classify_and_learn(
    doc: RawDocument,
    kb: KnowledgeBase,
    stopwords: Iterable[str] = frozenset(),
    policy: UpdatePolicy = UpdatePolicy.OFF,
) -> Prediction:
    """Classify ``doc`` and credit its terms to the mood chosen by ``policy``.

    With ``PREDICTED`` nothing is learned from a NoEvidence document. With
    ``GROUND_TRUTH`` the document's own label is credited even then, and the
    NoEvidence is re-raised afterwards.
    """
    policy = UpdatePolicy.parse(policy)
    freq = document_frequencies(doc.body, stopwords)
    try:
        pred = classify_frequencies(freq, kb, doc.title)
    except NoEvidence:
        if policy is UpdatePolicy.GROUND_TRUTH:
            incremental_update(kb, freq, _label(doc))
        raise
    if policy is UpdatePolicy.PREDICTED:
        incremental_update(kb, freq, pred.mood)
    elif policy is UpdatePolicy.GROUND_TRUTH:
        incremental_update(kb, freq, _label(doc))
    return pred


def _label(doc: RawDocument) -> Mood:
    if doc.true_mood is None:
        raise LabelError(f"document {doc.title!r} has no mood label to credit")
    return doc.true_mood
