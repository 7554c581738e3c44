"""Visibility and centrality measures per entity.

Visibility is the statement-normalized weighted count of the slots an
entity occupies: sum over classes c of w_c * n_c / N, where n_c counts
statements whose best mention of the entity has class c and the weights
are the fixed 6..1 scale. Centrality is closeness on the unweighted
two-section projection of the statement hypergraph, with the
component-size correction so values stay in [0, 1] on disconnected
graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .hypergraph import Hypergraph, cooccurrence_pairs
from .lexicon import EntityKind, EntityLexicon
from .mentions import Mention, MentionClass

VISIBILITY_WEIGHTS: dict[MentionClass, float] = {
    c: float(c.weight) for c in MentionClass
}


def class_counts(
    entity: str, mentions: Sequence[Mention]
) -> dict[MentionClass, int]:
    """n_c per class: one count per statement, best (highest) class wins."""
    best: dict[tuple[str, str], MentionClass] = {}
    for m in mentions:
        if m.entity != entity:
            continue
        ref = m.statement_ref
        if ref not in best or m.mention_class > best[ref]:
            best[ref] = m.mention_class
    counts: dict[MentionClass, int] = {}
    for cls in best.values():
        counts[cls] = counts.get(cls, 0) + 1
    return counts


def visibility(
    entity: str, mentions: Sequence[Mention], n_statements: int
) -> float:
    if n_statements < 1:
        raise ValidationError("visibility needs at least one statement (N >= 1)")
    counts = class_counts(entity, mentions)
    return sum(VISIBILITY_WEIGHTS[c] * n for c, n in counts.items()) / n_statements


class SimpleGraph:
    """Undirected simple graph with string vertices."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]):
        self._adj: dict[str, set[str]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                continue
            if u not in self._adj or v not in self._adj:
                raise ValidationError(f"edge ({u!r}, {v!r}) uses unknown vertex")
            self._adj[u].add(v)
            self._adj[v].add(u)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self._adj))

    def __contains__(self, v: str) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(self._adj[v]))

    def edges(self) -> list[tuple[str, str]]:
        return sorted(
            (min(u, v), max(u, v))
            for u in self._adj
            for v in self._adj[u]
            if u < v
        )


def two_section(h: Hypergraph) -> SimpleGraph:
    """Clique expansion: vertices co-occurring in a hyperedge get an edge."""
    return SimpleGraph(h.vertices, cooccurrence_pairs(h))


def bfs_distances(g: SimpleGraph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def closeness(g: SimpleGraph, v: str) -> float:
    """Component-corrected closeness: ((n_v-1)/sum_d) * ((n_v-1)/(n-1))."""
    if v not in g:
        raise ValidationError(f"unknown vertex {v!r}")
    n = len(g)
    dist = bfs_distances(g, v)
    n_v = len(dist)
    total = sum(dist.values())
    if n_v <= 1 or total == 0 or n <= 1:
        return 0.0
    return ((n_v - 1) / total) * ((n_v - 1) / (n - 1))


def closeness_map(g: SimpleGraph) -> dict[str, float]:
    return {v: closeness(g, v) for v in g.vertices}


@dataclass(frozen=True)
class MetricsRow:
    entity: str
    kind: EntityKind
    visibility: float
    centrality: float
    class_counts: dict[MentionClass, int]
    n_statements: int


def metrics_table(
    h: Hypergraph,
    mentions: Sequence[Mention],
    n_statements: int,
    lexicon: EntityLexicon,
) -> list[MetricsRow]:
    """One row per graph vertex, sorted by visibility descending (name
    ascending on ties); the deterministic basis for every report file."""
    kinds = lexicon.kinds()
    g = two_section(h)
    cls = closeness_map(g)
    rows = []
    for v in h.vertices:
        counts = class_counts(v, mentions)
        rows.append(
            MetricsRow(
                entity=v,
                kind=kinds[v],
                visibility=visibility(v, mentions, n_statements),
                centrality=cls[v],
                class_counts=counts,
                n_statements=n_statements,
            )
        )
    rows.sort(key=lambda r: (-r.visibility, r.entity))
    return rows


@dataclass(frozen=True)
class RankRow:
    entity: str
    visibility_rank: int
    centrality_rank: int

    @property
    def delta(self) -> int:
        return self.visibility_rank - self.centrality_rank


def _dense_ranks(values: Mapping[str, float]) -> dict[str, int]:
    distinct = sorted(set(values.values()), reverse=True)
    position = {val: i + 1 for i, val in enumerate(distinct)}
    return {k: position[v] for k, v in values.items()}


def rank_comparison(rows: Sequence[MetricsRow]) -> list[RankRow]:
    """Dense ranks on both measures; ties share a rank. The delta
    (visibility rank minus centrality rank) is negative for entities
    that are better placed in the network than on the page."""
    if not rows:
        raise ValidationError("rank comparison needs at least one row")
    vis = _dense_ranks({r.entity: r.visibility for r in rows})
    cen = _dense_ranks({r.entity: r.centrality for r in rows})
    out = [
        RankRow(
            entity=r.entity,
            visibility_rank=vis[r.entity],
            centrality_rank=cen[r.entity],
        )
        for r in rows
    ]
    out.sort(key=lambda r: (r.visibility_rank, r.entity))
    return out
