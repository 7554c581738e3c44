"""Deterministic renderers for every report artifact.

All writers emit byte-stable text for a fixed input: sorted vertices,
fixed column orders, two-decimal CSV values, repr-precision JSON.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .hypergraph import GraphMode, Hypergraph, unmentioned_entities
from .lexicon import EntityLexicon
from .metrics import MetricsRow, RankRow, SimpleGraph


def graphml_bipartite(h: Hypergraph, lexicon: EntityLexicon) -> str:
    """Statement-entity incidence graph in GraphML.

    Entity nodes carry kind actor/object; statement nodes carry kind
    statement plus their doc and statement ids.
    """
    kinds = lexicon.kinds()
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="kind" for="node" attr.name="kind" attr.type="string"/>',
        '  <key id="statement" for="node" attr.name="statement" attr.type="string"/>',
        '  <graph id="statement_entity" edgedefault="undirected">',
    ]
    entity_node = {name: f"e{i}" for i, name in enumerate(h.vertices)}
    for name in h.vertices:
        lines.append(f'    <node id="{entity_node[name]}">')
        lines.append(f'      <data key="label">{escape(name)}</data>')
        lines.append(f'      <data key="kind">{kinds[name].value}</data>')
        lines.append("    </node>")
    for j, edge in enumerate(h.edges):
        sid = f"s{j}"
        ref = f"{edge.doc_id}/{edge.statement_id}"
        lines.append(f'    <node id="{sid}">')
        lines.append(f'      <data key="label">{escape(ref)}</data>')
        lines.append('      <data key="kind">statement</data>')
        lines.append(f'      <data key="statement">{escape(ref)}</data>')
        lines.append("    </node>")
        for name in sorted(edge.members):
            lines.append(f'    <edge source="{sid}" target="{entity_node[name]}"/>')
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def dot_two_section(g: SimpleGraph, lexicon: EntityLexicon) -> str:
    """Two-section projection in DOT, entities annotated with their kind."""
    kinds = lexicon.kinds()
    lines = ["graph two_section {"]
    for v in g.vertices:
        kind = kinds[v].value
        lines.append(f"  {_dot_quote(v)} [kind={_dot_quote(kind)}];")
    for u, v in g.edges():
        lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def incidence_json(h: Hypergraph, lexicon: EntityLexicon) -> str:
    kinds = lexicon.kinds()
    payload = {
        "vertices": [
            {"name": v, "kind": kinds[v].value} for v in h.vertices
        ],
        "hyperedges": [
            {
                "doc_id": e.doc_id,
                "statement_id": e.statement_id,
                "members": sorted(e.members),
            }
            for e in h.edges
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def metrics_csv(rows: Sequence[MetricsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entity", "kind", "visibility", "closeness"])
    for r in rows:
        w.writerow([r.entity, r.kind.value, f"{r.visibility:.2f}", f"{r.centrality:.2f}"])
    return buf.getvalue()


def ranks_csv(ranks: Sequence[RankRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entity", "visibility_rank", "centrality_rank", "delta"])
    for r in ranks:
        w.writerow([r.entity, r.visibility_rank, r.centrality_rank, r.delta])
    return buf.getvalue()


def histogram_csv(histograms: Mapping[GraphMode, Mapping[int, int]]) -> str:
    """Hyperedge-size histograms for both graph modes in one table."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["mode", "size", "count"])
    for mode in (GraphMode.ACTORS, GraphMode.ACTORS_AND_OBJECTS):
        if mode not in histograms:
            continue
        for size in sorted(histograms[mode]):
            w.writerow([mode.value, size, histograms[mode][size]])
    return buf.getvalue()


def scatter_json(rows: Sequence[MetricsRow], mode: GraphMode) -> str:
    """Full-precision visibility-vs-centrality points for plotting."""
    payload = {
        "mode": mode.value,
        "n_statements": rows[0].n_statements if rows else 0,
        "points": [
            {
                "entity": r.entity,
                "kind": r.kind.value,
                "visibility": r.visibility,
                "centrality": r.centrality,
            }
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def isolated_csv(lexicon: EntityLexicon, h: Hypergraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entity", "kind"])
    for entry in unmentioned_entities(lexicon, h):
        w.writerow([entry.canonical_name, entry.kind.value])
    return buf.getvalue()
