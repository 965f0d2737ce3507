"""Mood classification of Devanagari song lyrics with an incrementally
updated term-probability knowledge base and a Song/Mood/Term graph export."""

from lyricmood.classifier import (
    Prediction,
    UpdatePolicy,
    classify_document,
    incremental_update,
    predict,
    score_document,
)
from lyricmood.errors import LyricMoodError, NoEvidence
from lyricmood.kb import KnowledgeBase, KnowledgeBaseEntry, build_from_corpus
from lyricmood.moods import MOODS, Mood
from lyricmood.text import (
    RawDocument,
    build_frequency_table,
    clean,
    load_stopwords,
    normalize,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "MOODS",
    "KnowledgeBase",
    "KnowledgeBaseEntry",
    "LyricMoodError",
    "Mood",
    "NoEvidence",
    "Prediction",
    "RawDocument",
    "UpdatePolicy",
    "build_frequency_table",
    "build_from_corpus",
    "classify_document",
    "clean",
    "incremental_update",
    "load_stopwords",
    "normalize",
    "predict",
    "score_document",
    "tokenize",
]
