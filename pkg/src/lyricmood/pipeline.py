"""Train -> evaluate -> graph, end to end over a labeled corpus directory."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from lyricmood.classifier import Prediction, UpdatePolicy
from lyricmood.errors import CorpusError
from lyricmood.evaluation import EvalReport, evaluate, ingest_corpus, missing_moods, split_corpus
from lyricmood.graph import DEFAULT_TOP_K, FORMATS, KnowledgeGraph, SongRecord, build_graph, export
from lyricmood.kb import KnowledgeBase, build_from_corpus
from lyricmood.text import load_stopwords

log = logging.getLogger(__name__)

ENV_PREFIX = "LYRICMOOD_"


@dataclass(frozen=True)
class RunConfig:
    kb_path: Path | None = None
    stopwords_path: Path | None = None
    # reserved: the only tie policy is "earliest mood in canonical order"
    tie_policy: str = "canonical"
    update_policy: UpdatePolicy = UpdatePolicy.OFF
    top_k_terms: int = DEFAULT_TOP_K
    seed: int = 1
    train_per_mood: int = 50
    test_per_mood: int = 10

    def __post_init__(self):
        if self.top_k_terms < 1:
            raise ValueError("top_k_terms must be >= 1")
        if self.train_per_mood < 0 or self.test_per_mood < 0:
            raise ValueError("split sizes must be non-negative")
        if self.tie_policy != "canonical":
            raise ValueError(f"unsupported tie policy {self.tie_policy!r}")

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None, **overrides) -> RunConfig:
        """Defaults, then ``LYRICMOOD_*`` variables, then non-None ``overrides``."""
        env = os.environ if environ is None else environ
        cfg = cls()
        if env.get(ENV_PREFIX + "KB"):
            cfg = replace(cfg, kb_path=Path(env[ENV_PREFIX + "KB"]))
        if env.get(ENV_PREFIX + "STOPWORDS"):
            cfg = replace(cfg, stopwords_path=Path(env[ENV_PREFIX + "STOPWORDS"]))
        given = {k: v for k, v in overrides.items() if v is not None}
        if "update_policy" in given:
            given["update_policy"] = UpdatePolicy.parse(given["update_policy"])
        for key in ("kb_path", "stopwords_path"):
            if key in given:
                given[key] = Path(given[key])
        return replace(cfg, **given)

    def validate_paths(self, *, kb_must_exist: bool = False) -> None:
        if self.stopwords_path is not None and not self.stopwords_path.is_file():
            raise FileNotFoundError(f"stopword file not found: {self.stopwords_path}")
        if kb_must_exist:
            if self.kb_path is None:
                raise CorpusError("no knowledge base given (use --kb or LYRICMOOD_KB)")
            if not self.kb_path.is_file():
                raise FileNotFoundError(f"knowledge base not found: {self.kb_path}")


@dataclass
class PipelineResult:
    kb: KnowledgeBase
    report: EvalReport
    graph: KnowledgeGraph


def graph_records(predictions: list[Prediction], k: int) -> list[SongRecord]:
    return [
        SongRecord(p.title, p.mood, [(t.word, t.contribution(p.mood)) for t in p.top_terms(k)])
        for p in predictions
    ]


def run_pipeline(corpus_root: str | Path, config: RunConfig, out_dir: str | Path | None = None) -> PipelineResult:
    corpus_root = Path(corpus_root)
    if not corpus_root.is_dir():
        raise CorpusError(f"corpus root {corpus_root} is not a directory")
    missing = missing_moods(corpus_root)
    if missing:
        raise CorpusError(f"{corpus_root}: missing mood directory: {', '.join(m.value for m in missing)}")
    config.validate_paths()
    stop = load_stopwords(config.stopwords_path)
    docs = ingest_corpus(corpus_root)
    train, test = split_corpus(docs, config.train_per_mood, config.test_per_mood, config.seed)
    kb = build_from_corpus(train, stop)
    log.info("knowledge base: %d words from %d training songs", len(kb), len(train))
    report = evaluate(kb, test, stop, update_policy=config.update_policy, seed=config.seed)
    graph = build_graph(graph_records(report.predictions, config.top_k_terms), kb.revision)

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        kb.save(out / "kb.csv")
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
        (out / "confusion.csv").write_text(report.matrix.to_csv(), encoding="utf-8")
        for fmt in FORMATS:
            (out / f"graph.{fmt}").write_text(export(graph, fmt), encoding="utf-8")
    return PipelineResult(kb, report, graph)
