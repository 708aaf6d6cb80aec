"""JSON and DOT encodings of crystal graphs and catalogue crystals.

JSON documents use one schema for both kinds of graph::

    {type, weight, depth_limit, highest,
     nodes: [{id, exponents, depth, eps, phi, interior}],
     edges: [{src, color, dst}]}

``eps``/``phi`` are dense lists over the index set in ascending colour
order.  Catalogue crystals have ``weight``, ``depth_limit``, ``highest``,
``exponents`` and ``depth`` set to null.  Encoding is canonical
(sorted keys, fixed separators), so load followed by dump is byte-identical.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .cartan import RootSystemType, WeightVector, format_type, parse_type
from .crystal import CrystalGraph, CrystalNode
from .perfect import PerfectCrystal


class SerializationError(ValueError):
    pass


def dumps_doc(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


# ---------------------------------------------------------------------------
# JSON


def graph_to_doc(g: CrystalGraph) -> dict:
    idx = g.t.index_set
    nodes = []
    for nid in g.order:
        node = g.nodes[nid]
        nodes.append({
            "id": nid,
            "exponents": [[c, s, y] for (c, s), y in node.exponents],
            "depth": node.depth,
            "eps": [g.eps(nid, i) for i in idx],
            "phi": [g.phi(nid, i) for i in idx],
            "interior": g.interior(nid),
        })
    return {
        "type": format_type(g.t),
        "weight": None if g.weight is None else g.weight.as_list(g.t),
        "depth_limit": g.depth_limit,
        "highest": g.highest,
        "nodes": nodes,
        "edges": [{"src": s, "color": c, "dst": d} for s, c, d in g.edges()],
    }


def perfect_to_doc(t: RootSystemType, pc: PerfectCrystal) -> dict:
    idx = t.index_set
    return {
        "type": format_type(t),
        "name": pc.name,
        "weight": None,
        "depth_limit": None,
        "highest": None,
        "nodes": [
            {
                "id": b,
                "exponents": None,
                "depth": None,
                "eps": [pc.eps(b, i) for i in idx],
                "phi": [pc.phi(b, i) for i in idx],
                "interior": True,
            }
            for b in pc.nodes
        ],
        "edges": [{"src": s, "color": c, "dst": d} for s, c, d in pc.arrows],
    }


def dumps_graph(g: Union[CrystalGraph, tuple[RootSystemType, PerfectCrystal]]) -> str:
    if isinstance(g, CrystalGraph):
        return dumps_doc(graph_to_doc(g))
    t, pc = g
    return dumps_doc(perfect_to_doc(t, pc))


def _need(doc: dict, key: str):
    if key not in doc:
        raise SerializationError(f"missing key {key!r}")
    return doc[key]


def graph_from_doc(doc: dict) -> CrystalGraph:
    try:
        t = parse_type(_need(doc, "type"))
    except ValueError as exc:
        raise SerializationError(str(exc)) from exc
    w = _need(doc, "weight")
    if w is None:
        raise SerializationError("document has no weight; load it with perfect_from_doc")
    idx = t.index_set
    g = CrystalGraph(t, WeightVector.from_list(t, w), _need(doc, "depth_limit"))
    for rec in _need(doc, "nodes"):
        exps = tuple(((c, s), y) for c, s, y in rec["exponents"])
        node = CrystalNode(exps, rec["depth"])
        if node.id != rec["id"]:
            raise SerializationError(f"node id {rec['id']} does not match its exponents")
        eps_row = {i: v for i, v in zip(idx, rec["eps"]) if v}
        phi_row = {i: v for i, v in zip(idx, rec["phi"]) if v}
        g.add_node(rec["id"], node, eps_row, phi_row, bool(rec["interior"]))
    for rec in _need(doc, "edges"):
        if rec["src"] not in g or rec["dst"] not in g:
            raise SerializationError(f"edge {rec} uses an unknown node")
        g.add_edge(rec["src"], rec["color"], rec["dst"])
    g.highest = _need(doc, "highest")
    if g.highest not in g:
        raise SerializationError("highest node is not in the node list")
    return g


def perfect_from_doc(doc: dict) -> tuple[RootSystemType, PerfectCrystal]:
    t = parse_type(_need(doc, "type"))
    nodes = [rec["id"] for rec in _need(doc, "nodes")]
    arrows = [(e["src"], e["color"], e["dst"]) for e in _need(doc, "edges")]
    return t, PerfectCrystal(doc.get("name", format_type(t)), nodes, arrows)


def loads_graph(text: str) -> CrystalGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"not JSON: {exc}") from exc
    return graph_from_doc(doc)


def load_graph(path: str) -> CrystalGraph:
    with open(path, encoding="utf-8") as fh:
        return loads_graph(fh.read())


def save_graph(g: CrystalGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_graph(g))


# ---------------------------------------------------------------------------
# DOT


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def doc_to_dot(doc: dict) -> str:
    """DOT text for a JSON graph document (crystal or catalogue)."""
    lines = [f"digraph {_quote(doc['type'])} {{"]
    highest = doc.get("highest")
    for rec in doc["nodes"]:
        label = "eps " + ",".join(str(v) for v in rec["eps"])
        shape = "doublecircle" if rec["id"] == highest else "circle"
        lines.append(f"  {_quote(rec['id'])} [label={_quote(label)}, shape={shape}];")
    for e in doc["edges"]:
        lines.append(f"  {_quote(e['src'])} -> {_quote(e['dst'])} [label={e['color']}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dot(g: Union[CrystalGraph, tuple[RootSystemType, PerfectCrystal]]) -> str:
    if isinstance(g, CrystalGraph):
        return doc_to_dot(graph_to_doc(g))
    return doc_to_dot(perfect_to_doc(*g))


@dataclass
class DotGraph:
    name: str
    nodes: dict[str, dict[str, str]] = field(default_factory=dict)
    edges: list[tuple[str, str, dict[str, str]]] = field(default_factory=list)


_TOKEN = re.compile(r'\s*(?:(->|[{}\[\];,=])|"((?:[^"\\]|\\.)*)"|([A-Za-z_0-9.\-]+))')


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SerializationError(f"DOT: unexpected input at offset {pos}")
        sym, quoted, bare = m.groups()
        if sym is not None:
            out.append(sym)
        elif quoted is not None:
            out.append("\x00" + re.sub(r"\\(.)", r"\1", quoted))
        else:
            out.append("\x00" + bare)
        pos = m.end()
    return out


def parse_dot(text: str) -> DotGraph:
    """Parse the ``digraph`` subset written by :func:`to_dot`.

    Accepts node statements ``ID [attrs];`` and edge statements
    ``ID -> ID [attrs];``; anything else is a syntax error.
    """
    toks = _tokens(text)
    pos = 0

    def peek() -> Optional[str]:
        return toks[pos] if pos < len(toks) else None

    def take(expect: Optional[str] = None) -> str:
        nonlocal pos
        if pos >= len(toks):
            raise SerializationError("DOT: unexpected end of input")
        tok = toks[pos]
        if expect == "ID":
            if not tok.startswith("\x00"):
                raise SerializationError(f"DOT: expected identifier, got {tok!r}")
            tok = tok[1:]
        elif expect is not None and tok != expect:
            raise SerializationError(f"DOT: expected {expect!r}, got {tok!r}")
        pos += 1
        return tok

    def attrs() -> dict[str, str]:
        out: dict[str, str] = {}
        if peek() != "[":
            return out
        take("[")
        while peek() != "]":
            k = take("ID")
            take("=")
            out[k] = take("ID")
            if peek() in (",", ";"):
                take()
        take("]")
        return out

    if take("ID") != "digraph":
        raise SerializationError("DOT: only digraphs are supported")
    g = DotGraph(take("ID") if peek() != "{" else "")
    take("{")
    while peek() != "}":
        a = take("ID")
        if peek() == "->":
            take("->")
            b = take("ID")
            g.edges.append((a, b, attrs()))
            g.nodes.setdefault(a, {})
            g.nodes.setdefault(b, {})
        else:
            g.nodes.setdefault(a, {}).update(attrs())
        if peek() == ";":
            take(";")
    take("}")
    if pos != len(toks):
        raise SerializationError("DOT: trailing input after graph")
    return g
