"""Song/Mood/Term property graph.

Songs point at their mood through ``BELONGS_TO``; terms that carried the
most weight for that mood point at the song through ``DEPICTS``. The graph
serves as a lookup cache for already-classified titles and is exported as
DOT, GraphML or a MERGE-only Cypher script.
"""

from __future__ import annotations

import base64
import json
import urllib.request
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from lyricmood.errors import DuplicateKeyError, LyricMoodError
from lyricmood.kb import KnowledgeBase
from lyricmood.moods import MOODS, Mood

SONG, MOOD, TERM = "Song", "Mood", "Term"
BELONGS_TO, DEPICTS = "BELONGS_TO", "DEPICTS"
NODE_KINDS = (MOOD, SONG, TERM)
EDGE_KINDS = {BELONGS_TO: (SONG, MOOD), DEPICTS: (TERM, SONG)}
FORMATS = ("dot", "graphml", "cypher")
DEFAULT_TOP_K = 5

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


class Node(NamedTuple):
    kind: str
    key: str


class Edge(NamedTuple):
    kind: str
    src: Node
    dst: Node
    weight: float = 0.0


class SongRecord(NamedTuple):
    title: str
    mood: Mood
    terms: Sequence[tuple[str, float]] = ()


class SongInfo(NamedTuple):
    mood: Mood
    terms: list[tuple[str, float]]


@dataclass
class KnowledgeGraph:
    nodes: set[Node] = field(default_factory=set)
    edges: dict[tuple[str, Node, Node], float] = field(default_factory=dict)
    kb_revision: int = 0

    def add_node(self, kind: str, key: str) -> Node:
        if kind not in NODE_KINDS:
            raise ValueError(f"unknown node kind {kind!r}")
        node = Node(kind, key)
        self.nodes.add(node)
        return node

    def add_edge(self, kind: str, src: Node, dst: Node, weight: float = 0.0) -> None:
        expected = EDGE_KINDS.get(kind)
        if expected is None:
            raise ValueError(f"unknown edge kind {kind!r}")
        if (src.kind, dst.kind) != expected:
            raise ValueError(f"{kind} must connect {expected[0]} -> {expected[1]}, got {src.kind} -> {dst.kind}")
        if src not in self.nodes or dst not in self.nodes:
            raise ValueError(f"{kind} edge endpoint missing from graph")
        if weight < 0:
            raise ValueError("edge weight must be non-negative")
        self.edges[(kind, src, dst)] = float(weight)

    def sorted_nodes(self) -> list[Node]:
        return sorted(self.nodes)

    def sorted_edges(self) -> list[Edge]:
        return [Edge(k, s, d, w) for (k, s, d), w in sorted(self.edges.items())]

    def nodes_of(self, kind: str) -> list[Node]:
        return sorted(n for n in self.nodes if n.kind == kind)

    def edges_of(self, kind: str) -> list[Edge]:
        return [e for e in self.sorted_edges() if e.kind == kind]


def select_depicting_terms(
    freq: Mapping[str, int], kb: KnowledgeBase, mood: Mood, k: int = DEFAULT_TOP_K
) -> list[tuple[str, float]]:
    """The ``k`` in-vocabulary tokens contributing most to ``mood``; ties by codepoint order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    i = Mood.parse(mood).index
    scored = []
    for word, n in freq.items():
        e = kb.get(word)
        if e is None:
            continue
        c = n * e.probs[i]
        if c > 0:
            scored.append((word, c))
    scored.sort(key=lambda wc: (-wc[1], wc[0]))
    return scored[:k]


def build_graph(records: Iterable[SongRecord], kb_revision: int = 0) -> KnowledgeGraph:
    g = KnowledgeGraph(kb_revision=kb_revision)
    moods = {m: g.add_node(MOOD, m.value) for m in MOODS}
    for rec in records:
        song = Node(SONG, rec.title)
        if song in g.nodes:
            raise DuplicateKeyError(f"duplicate song title {rec.title!r}")
        g.add_node(SONG, rec.title)
        g.add_edge(BELONGS_TO, song, moods[Mood.parse(rec.mood)])
        for word, weight in rec.terms:
            term = g.add_node(TERM, word)
            g.add_edge(DEPICTS, term, song, weight)
    return g


def lookup_song(graph: KnowledgeGraph, title: str) -> SongInfo | None:
    song = Node(SONG, title)
    if song not in graph.nodes:
        return None
    mood = None
    terms = []
    for (kind, src, dst), w in graph.edges.items():
        if kind == BELONGS_TO and src == song:
            mood = Mood.parse(dst.key)
        elif kind == DEPICTS and dst == song:
            terms.append((src.key, w))
    if mood is None:
        raise LyricMoodError(f"song {title!r} has no BELONGS_TO edge")
    terms.sort(key=lambda t: (-t[1], t[0]))
    return SongInfo(mood, terms)


def export(graph: KnowledgeGraph, fmt: str) -> str:
    try:
        writer = _WRITERS[fmt]
    except KeyError:
        raise ValueError(f"unknown export format {fmt!r}; choose from {', '.join(FORMATS)}") from None
    return writer(graph)


def _node_id(node: Node) -> str:
    return f"{node.kind}:{node.key}"


def _fmt_weight(w: float) -> str:
    return repr(float(w))


# ---- DOT ----

_DOT_SHAPES = {SONG: "box", MOOD: "ellipse", TERM: "plaintext"}


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(graph: KnowledgeGraph) -> str:
    lines = ["digraph knowledge_graph {", f"  kb_revision={_dot_quote(str(graph.kb_revision))};"]
    for n in graph.sorted_nodes():
        lines.append(
            f"  {_dot_quote(_node_id(n))} [label={_dot_quote(n.key)}, kind={n.kind}, shape={_DOT_SHAPES[n.kind]}];"
        )
    for e in graph.sorted_edges():
        attrs = f"label={e.kind}"
        if e.kind == DEPICTS:
            attrs += f", weight={_dot_quote(_fmt_weight(e.weight))}"
        lines.append(f"  {_dot_quote(_node_id(e.src))} -> {_dot_quote(_node_id(e.dst))} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---- GraphML ----

def to_graphml(graph: KnowledgeGraph) -> str:
    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    for kid, target, name, typ in (
        ("g_rev", "graph", "kb_revision", "int"),
        ("n_kind", "node", "kind", "string"),
        ("n_key", "node", "key", "string"),
        ("e_kind", "edge", "kind", "string"),
        ("e_weight", "edge", "weight", "double"),
    ):
        ET.SubElement(root, "key", {"id": kid, "for": target, "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    ET.SubElement(g, "data", key="g_rev").text = str(graph.kb_revision)
    for n in graph.sorted_nodes():
        el = ET.SubElement(g, "node", id=_node_id(n))
        ET.SubElement(el, "data", key="n_kind").text = n.kind
        ET.SubElement(el, "data", key="n_key").text = n.key
    for i, e in enumerate(graph.sorted_edges()):
        el = ET.SubElement(g, "edge", id=f"e{i}", source=_node_id(e.src), target=_node_id(e.dst))
        ET.SubElement(el, "data", key="e_kind").text = e.kind
        ET.SubElement(el, "data", key="e_weight").text = _fmt_weight(e.weight)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def read_graphml(text: str) -> KnowledgeGraph:
    try:
        root = ET.fromstring(text.encode("utf-8"))
    except ET.ParseError as exc:
        raise LyricMoodError(f"malformed GraphML: {exc}") from None
    ns = {"g": GRAPHML_NS}
    names = {k.get("id"): k.get("attr.name") for k in root.findall("g:key", ns)}
    g_el = root.find("g:graph", ns)
    if g_el is None:
        raise LyricMoodError("GraphML document has no <graph>")

    def data(el) -> dict[str, str]:
        return {names.get(d.get("key"), d.get("key")): d.text or "" for d in el.findall("g:data", ns)}

    graph = KnowledgeGraph(kb_revision=int(data(g_el).get("kb_revision", 0)))
    by_id: dict[str, Node] = {}
    for el in g_el.findall("g:node", ns):
        attrs = data(el)
        by_id[el.get("id")] = graph.add_node(attrs["kind"], attrs["key"])
    for el in g_el.findall("g:edge", ns):
        attrs = data(el)
        try:
            src, dst = by_id[el.get("source")], by_id[el.get("target")]
        except KeyError as exc:
            raise LyricMoodError(f"GraphML edge references unknown node {exc}") from None
        graph.add_edge(attrs["kind"], src, dst, float(attrs.get("weight", 0.0)))
    return graph


# ---- Cypher ----

_CYPHER_PROP = {SONG: "title", MOOD: "name", TERM: "word"}


def _cypher_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r") + '"'


def _cypher_pattern(var: str, n: Node) -> str:
    return f"({var}:{n.kind} {{{_CYPHER_PROP[n.kind]}: {_cypher_str(n.key)}}})"


def cypher_statements(graph: KnowledgeGraph) -> list[str]:
    out = [f"MERGE {_cypher_pattern('n', n)};" for n in graph.sorted_nodes()]
    for e in graph.sorted_edges():
        rel = f"[:{e.kind}]" if e.kind == BELONGS_TO else f"[:{e.kind} {{weight: {_fmt_weight(e.weight)}}}]"
        out.append(f"MERGE {_cypher_pattern('a', e.src)} MERGE {_cypher_pattern('b', e.dst)} MERGE (a)-{rel}->(b);")
    return out


def to_cypher(graph: KnowledgeGraph) -> str:
    return "".join(s + "\n" for s in cypher_statements(graph))


_WRITERS = {"dot": to_dot, "graphml": to_graphml, "cypher": to_cypher}


def push_cypher(
    statements: Sequence[str],
    url: str,
    *,
    user: str | None = None,
    password: str | None = None,
    batch_size: int = 100,
    timeout: float = 30.0,
) -> int:
    """POST statements to a transactional HTTP endpoint (e.g. ``.../db/neo4j/tx/commit``).

    Returns the number of requests sent. Raises LyricMoodError when the store
    reports errors for a batch.
    """
    if not 1 <= batch_size <= 100:
        raise ValueError("batch_size must be in 1..100")
    headers = {"Content-Type": "application/json", "Accept": "application/json"}
    if user is not None:
        token = base64.b64encode(f"{user}:{password or ''}".encode()).decode("ascii")
        headers["Authorization"] = f"Basic {token}"
    requests_sent = 0
    for start in range(0, len(statements), batch_size):
        batch = [{"statement": s.rstrip(";")} for s in statements[start : start + batch_size]]
        body = json.dumps({"statements": batch}, ensure_ascii=False).encode("utf-8")
        req = urllib.request.Request(url, data=body, headers=headers, method="POST")
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8") or "{}")
        requests_sent += 1
        if payload.get("errors"):
            raise LyricMoodError(f"graph store rejected batch starting at statement {start}: {payload['errors']}")
    return requests_sent
