import json
import random

import pytest

from conftest import separable_songs, shared_songs
from lyricmood import Mood, RawDocument, build_from_corpus, classify_document
from lyricmood.errors import CorpusError, DecodeError, DuplicateKeyError, LabelError, NoEvidence
from lyricmood.evaluation import (
    ConfusionMatrix,
    EvalReport,
    evaluate,
    ingest_corpus,
    matrix_from_table,
    split_corpus,
)
from oracles import MOOD_NAMES

# rows = actual (happy, sad, romantic, devotional, party), columns = predicted
PAPER_TABLE = [
    [4, 1, 2, 0, 3],
    [2, 4, 4, 0, 0],
    [1, 1, 8, 0, 0],
    [0, 0, 0, 10, 0],
    [4, 0, 0, 0, 6],
]


def test_ingest(corpus_factory):
    root = corpus_factory({"happy": {"a": "क"}, "sad": {"b": "ख"}})
    docs = ingest_corpus(root)
    assert [(d.title, d.true_mood) for d in docs] == [("a", Mood.HAPPY), ("b", Mood.SAD)]


def test_ingest_empty(tmp_path):
    assert ingest_corpus(tmp_path) == []


def test_ingest_unknown_mood(corpus_factory):
    root = corpus_factory({"joyful": {"a": "क"}})
    with pytest.raises(LabelError, match="joyful"):
        ingest_corpus(root)


def test_ingest_duplicate_title(corpus_factory):
    root = corpus_factory({"happy": {"a": "क"}, "sad": {"a": "ख"}})
    with pytest.raises(DuplicateKeyError):
        ingest_corpus(root)


def test_ingest_undecodable(tmp_path):
    (tmp_path / "sad").mkdir()
    (tmp_path / "sad" / "bad.txt").write_bytes(b"\xe0\xa4")
    with pytest.raises(DecodeError, match="bad.txt"):
        ingest_corpus(tmp_path)


def docs_per_mood(n):
    return [RawDocument(f"{m}{i:02d}", f"{m} {i}", Mood(m)) for m in MOOD_NAMES for i in range(n)]


def test_split_paper_sizes():
    train, test = split_corpus(docs_per_mood(60), 50, 10, seed=1)
    assert len(train) == 250 and len(test) == 50
    assert not {d.title for d in train} & {d.title for d in test}
    for m in Mood:
        assert sum(d.true_mood is m for d in train) == 50
        assert sum(d.true_mood is m for d in test) == 10


def test_split_is_seeded_and_order_independent():
    docs = docs_per_mood(60)
    a = split_corpus(docs, 50, 10, seed=3)
    b = split_corpus(list(reversed(docs)), 50, 10, seed=3)
    assert a == b
    assert split_corpus(docs, 50, 10, seed=4) != a


def test_split_zero_train():
    train, test = split_corpus(docs_per_mood(3), 0, 2, seed=0)
    assert train == [] and len(test) == 10


def test_split_shortfall_names_mood():
    docs = [d for d in docs_per_mood(60) if not (d.true_mood is Mood.PARTY and int(d.title[-2:]) >= 55)]
    with pytest.raises(CorpusError, match="party is short by 5"):
        split_corpus(docs, 50, 10, seed=1)


def test_paper_table_accuracy():
    matrix = matrix_from_table(PAPER_TABLE)
    assert all(matrix.row_total(m) == 10 for m in Mood)
    assert matrix.trace == 32
    assert matrix.accuracy() == pytest.approx(0.64, abs=1e-12)
    assert matrix.precision(Mood.DEVOTIONAL) == 1.0
    assert matrix.recall(Mood.ROMANTIC) == 0.8


def test_precision_absent_when_never_predicted():
    m = ConfusionMatrix()
    m.add(Mood.HAPPY, Mood.SAD)
    report = EvalReport(m, [])
    assert "happy" not in report.precision()
    assert report.recall()["happy"] == 0.0


def test_matrix_merge_is_associative():
    rng = random.Random(0)
    parts = []
    for _ in range(3):
        m = ConfusionMatrix()
        for _ in range(20):
            m.add(rng.choice(list(Mood)), rng.choice([*Mood, None]))
        parts.append(m)
    a, b, c = parts
    assert (a + b) + c == a + (b + c)
    assert (a + b + c).total == 60


def test_separable_evaluation(corpus_factory):
    docs = ingest_corpus(corpus_factory(separable_songs(random.Random(1), 25)))
    train, test = split_corpus(docs, 20, 5, seed=1)
    report = evaluate(build_from_corpus(train), test)
    assert report.accuracy == 1.0
    assert report.matrix.cells == [[5 if i == j else 0 for j in range(5)] for i in range(5)]


def test_empty_test_set():
    with pytest.raises(ValueError, match="empty test set"):
        evaluate(build_from_corpus([]), [])


def test_no_evidence_counted_separately():
    kb = build_from_corpus([RawDocument("t", "क", Mood.HAPPY)])
    test = [RawDocument("x", "क", Mood.HAPPY), RawDocument("y", "ज़", Mood.SAD)]
    report = evaluate(kb, test)
    assert report.matrix.no_evidence == [0, 1, 0, 0, 0]
    assert report.matrix.total == 2
    assert report.accuracy == 0.5


def test_accuracy_matches_per_document_checks(corpus_factory):
    docs = ingest_corpus(corpus_factory(shared_songs(random.Random(9), 30)))
    train, test = split_corpus(docs, 20, 10, seed=2)
    kb = build_from_corpus(train)
    report = evaluate(kb, test)
    hits = 0
    for d in test:
        try:
            hits += classify_document(d, kb).mood is d.true_mood
        except NoEvidence:
            pass
    assert report.accuracy == hits / len(test)
    assert report.matrix.total == len(test)
    assert all(report.matrix.row_total(m) == 10 for m in Mood)


def test_parallel_matches_serial(corpus_factory):
    docs = ingest_corpus(corpus_factory(shared_songs(random.Random(4), 20)))
    train, test = split_corpus(docs, 12, 8, seed=5)
    kb = build_from_corpus(train)
    serial = evaluate(kb, test)
    parallel = evaluate(kb, test, workers=4)
    assert parallel.matrix == serial.matrix
    assert [p.title for p in parallel.predictions] == [p.title for p in serial.predictions]


def test_evaluation_is_deterministic_and_frozen(corpus_factory):
    docs = ingest_corpus(corpus_factory(shared_songs(random.Random(3), 15)))
    train, test = split_corpus(docs, 10, 5, seed=0)
    kb = build_from_corpus(train)
    snapshot = kb.copy()
    first = evaluate(kb, test, seed=0).to_json()
    assert evaluate(kb, test, seed=0).to_json() == first
    assert kb == snapshot


def test_self_training_mutates_kb(corpus_factory):
    docs = ingest_corpus(corpus_factory(shared_songs(random.Random(3), 15)))
    train, test = split_corpus(docs, 10, 5, seed=0)
    kb = build_from_corpus(train)
    before = kb.copy()
    report = evaluate(kb, test, update_policy="predicted")
    assert kb != before
    assert report.matrix.total == len(test)


def test_report_serialization():
    report = EvalReport(matrix_from_table(PAPER_TABLE), [], seed=1, kb_revision=7)
    data = json.loads(report.to_json())
    assert data["accuracy"] == 0.64 and data["correct"] == 32 and data["test_documents"] == 50
    assert data["confusion_matrix"] == PAPER_TABLE
    assert data["moods"] == MOOD_NAMES
    table = report.format_table()
    assert "accuracy: 0.6400 (32/50)" in table
    csv_lines = report.matrix.to_csv().splitlines()
    assert csv_lines[0] == "actual\\predicted,happy,sad,romantic,devotional,party,no_evidence"
    assert csv_lines[1] == "happy,4,1,2,0,3,0"
