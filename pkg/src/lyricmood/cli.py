"""Command-line interface.

Exit status: 0 success, 1 usage error, 2 data or I/O error, 3 no knowledge-base
evidence for at least one song (``predict`` only).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from lyricmood.classifier import UpdatePolicy, classify_and_learn, classify_document
from lyricmood.errors import LyricMoodError, NoEvidence
from lyricmood.evaluation import ingest_corpus
from lyricmood.graph import (
    FORMATS,
    SongRecord,
    build_graph,
    cypher_statements,
    export,
    lookup_song,
    push_cypher,
    read_graphml,
    select_depicting_terms,
)
from lyricmood.kb import KnowledgeBase, build_from_corpus
from lyricmood.moods import MOODS, Mood
from lyricmood.pipeline import RunConfig, graph_records, run_pipeline
from lyricmood.text import document_frequencies, load_stopwords, read_document

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NO_EVIDENCE = 0, 1, 2, 3

log = logging.getLogger("lyricmood")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _out(text: str) -> None:
    sys.stdout.write(text)


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _config(args, **extra) -> RunConfig:
    return RunConfig.from_env(
        kb_path=getattr(args, "kb", None),
        stopwords_path=getattr(args, "stopwords", None),
        **extra,
    )


def cmd_build_kb(args) -> int:
    cfg = _config(args)
    out = Path(args.out) if args.out else cfg.kb_path
    if out is None:
        raise UsageError("build-kb: --out is required (or set LYRICMOOD_KB)")
    cfg.validate_paths()
    docs = ingest_corpus(args.corpus)
    kb = build_from_corpus(docs, load_stopwords(cfg.stopwords_path))
    kb.save(out)
    log.info("wrote %d words from %d songs to %s", len(kb), len(docs), out)
    return EXIT_OK


def cmd_predict(args) -> int:
    cfg = _config(args, update_policy=args.update, top_k_terms=args.top_k)
    cfg.validate_paths(kb_must_exist=True)
    if cfg.update_policy is UpdatePolicy.GROUND_TRUTH:
        raise UsageError("predict: use the update subcommand for ground-truth credit")
    kb = KnowledgeBase.load(cfg.kb_path)
    stop = load_stopwords(cfg.stopwords_path)
    status = EXIT_OK
    for name in args.files:
        doc = read_document(name)
        try:
            pred = classify_and_learn(doc, kb, stop, cfg.update_policy)
        except NoEvidence as exc:
            print(f"{name}: {exc}", file=sys.stderr)
            status = EXIT_NO_EVIDENCE
            continue
        _out(pred.to_json(cfg.top_k_terms) + "\n")
    if cfg.update_policy is UpdatePolicy.PREDICTED:
        kb.save(cfg.kb_path)
    return status


def cmd_update(args) -> int:
    cfg = _config(args)
    cfg.validate_paths(kb_must_exist=True)
    mood = Mood.parse(args.mood)
    kb = KnowledgeBase.load(cfg.kb_path)
    stop = load_stopwords(cfg.stopwords_path)
    for name in args.files:
        doc = read_document(name, mood)
        kb.merge(document_frequencies(doc.body, stop), mood)
    kb.recompute()
    kb.save(cfg.kb_path)
    _out(f"credited {len(args.files)} file(s) to {mood.value}; {len(kb)} words\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _config(
        args,
        update_policy=args.update,
        seed=args.seed,
        train_per_mood=args.train,
        test_per_mood=args.test,
        top_k_terms=args.top_k,
    )
    result = run_pipeline(args.corpus, cfg, args.out_dir)
    report = result.report
    _out(report.format_table())
    if args.report:
        _write_text(Path(args.report), report.to_json())
    if args.matrix_csv:
        _write_text(Path(args.matrix_csv), report.matrix.to_csv())
    return EXIT_OK


def cmd_graph_export(args) -> int:
    cfg = _config(args, top_k_terms=args.top_k)
    cfg.validate_paths(kb_must_exist=True)
    kb = KnowledgeBase.load(cfg.kb_path)
    stop = load_stopwords(cfg.stopwords_path)
    records = []
    for doc in ingest_corpus(args.corpus):
        if args.mood_source == "label":
            freq = document_frequencies(doc.body, stop)
            records.append(SongRecord(doc.title, doc.true_mood,
                                      select_depicting_terms(freq, kb, doc.true_mood, cfg.top_k_terms)))
            continue
        try:
            pred = classify_document(doc, kb, stop)
        except NoEvidence:
            log.warning("%s: no knowledge-base evidence; left out of the graph", doc.title)
            continue
        records.extend(graph_records([pred], cfg.top_k_terms))
    graph = build_graph(records, kb.revision)
    _write_text(Path(args.out), export(graph, args.format))
    if args.push_url:
        sent = push_cypher(
            cypher_statements(graph),
            args.push_url,
            user=args.push_user,
            password=os.environ.get("LYRICMOOD_GRAPH_PASSWORD"),
        )
        log.info("pushed graph in %d request(s)", sent)
    return EXIT_OK


def cmd_graph_query(args) -> int:
    path = Path(args.graph)
    graph = read_graphml(path.read_text(encoding="utf-8"))
    info = lookup_song(graph, args.title)
    if info is None:
        print(f"{args.title!r} is not in {path}", file=sys.stderr)
        return EXIT_DATA
    record = {
        "title": args.title,
        "mood": info.mood.value,
        "terms": [{"word": w, "weight": v} for w, v in info.terms],
        "kb_revision": graph.kb_revision,
    }
    _out(json.dumps(record, ensure_ascii=False) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lyricmood", description="Mood classification for Devanagari song lyrics.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    moods = [m.value for m in MOODS]

    b = sub.add_parser("build-kb", help="build a knowledge base from a labeled corpus")
    b.add_argument("--corpus", required=True)
    b.add_argument("--out")
    b.add_argument("--stopwords")
    b.set_defaults(func=cmd_build_kb)

    pr = sub.add_parser("predict", help="classify lyric files, one JSON line each")
    pr.add_argument("--kb")
    pr.add_argument("--stopwords")
    pr.add_argument("--update", choices=["predicted", "off"], default="off")
    pr.add_argument("--top-k", type=int, default=5)
    pr.add_argument("files", nargs="+")
    pr.set_defaults(func=cmd_predict)

    u = sub.add_parser("update", help="credit lyric files to a known mood")
    u.add_argument("--kb")
    u.add_argument("--stopwords")
    u.add_argument("--mood", required=True, choices=moods)
    u.add_argument("files", nargs="+")
    u.set_defaults(func=cmd_update)

    e = sub.add_parser("eval", help="train/test split, confusion matrix and accuracy")
    e.add_argument("--corpus", required=True)
    e.add_argument("--seed", type=int)
    e.add_argument("--train", type=int)
    e.add_argument("--test", type=int)
    e.add_argument("--update", choices=[p.value for p in UpdatePolicy])
    e.add_argument("--stopwords")
    e.add_argument("--top-k", type=int)
    e.add_argument("--report", help="write the report as JSON")
    e.add_argument("--matrix-csv", help="write the confusion matrix as CSV")
    e.add_argument("--out-dir", help="also write kb.csv, report.json and graph exports here")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("graph-export", help="build the Song/Mood/Term graph and export it")
    g.add_argument("--kb")
    g.add_argument("--corpus", required=True)
    g.add_argument("--format", required=True, choices=FORMATS)
    g.add_argument("--out", required=True)
    g.add_argument("--top-k", type=int, default=5)
    g.add_argument("--stopwords")
    g.add_argument("--mood-source", choices=["predicted", "label"], default="predicted")
    g.add_argument("--push-url", help="transactional HTTP endpoint to POST Cypher statements to")
    g.add_argument("--push-user")
    g.set_defaults(func=cmd_graph_export)

    q = sub.add_parser("graph-query", help="look up a song in an exported GraphML graph")
    q.add_argument("--graph", required=True)
    q.add_argument("--title", required=True)
    q.set_defaults(func=cmd_graph_query)
    return p


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # bad option values that parse fine (e.g. --top-k 0)
        if isinstance(exc, LyricMoodError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"lyricmood: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoEvidence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_EVIDENCE
    except (LyricMoodError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
