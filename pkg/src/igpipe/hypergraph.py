"""Statement hypergraph over mentioned entities.

One hyperedge per statement with at least one qualifying mention; the
vertex set is exactly the union of hyperedge members, so isolated
lexicon entries never enter the graph (they are reported separately).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import ValidationError
from .lexicon import EntityKind, EntityLexicon, LexiconEntry
from .mentions import Mention


class GraphMode(str, Enum):
    ACTORS = "actors"
    ACTORS_AND_OBJECTS = "actors-objects"


@dataclass(frozen=True)
class Hyperedge:
    doc_id: str
    statement_id: str
    members: frozenset[str]

    def __post_init__(self):
        if not self.members:
            raise ValidationError(
                f"empty hyperedge for statement {self.statement_id}"
            )

    @property
    def statement_ref(self) -> tuple[str, str]:
        return (self.doc_id, self.statement_id)


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple[str, ...]
    edges: tuple[Hyperedge, ...]

    def __post_init__(self):
        union = set()
        for e in self.edges:
            union.update(e.members)
        if set(self.vertices) != union or list(self.vertices) != sorted(union):
            raise ValidationError(
                "vertex set must be the sorted union of hyperedge members"
            )


def build_hypergraph(
    mentions: Sequence[Mention],
    mode: GraphMode,
    lexicon: EntityLexicon,
) -> Hypergraph:
    """Group qualifying mentions by statement into hyperedges.

    ACTORS keeps actor entities only; ACTORS_AND_OBJECTS keeps both.
    Statement order follows first appearance in the mention sequence;
    duplicate mentions of an entity collapse to one membership.
    """
    kinds = lexicon.kinds()
    grouped: dict[tuple[str, str], set[str]] = {}
    order: list[tuple[str, str]] = []
    for m in mentions:
        if m.entity not in kinds:
            raise ValidationError(f"mention of unknown entity {m.entity!r}")
        if mode is GraphMode.ACTORS and kinds[m.entity] is not EntityKind.ACTOR:
            continue
        ref = m.statement_ref
        if ref not in grouped:
            grouped[ref] = set()
            order.append(ref)
        grouped[ref].add(m.entity)
    edges = tuple(
        Hyperedge(doc_id=ref[0], statement_id=ref[1], members=frozenset(grouped[ref]))
        for ref in order
        if grouped[ref]
    )
    vertices = tuple(sorted({v for e in edges for v in e.members}))
    return Hypergraph(vertices=vertices, edges=edges)


def edge_size_histogram(h: Hypergraph) -> dict[int, int]:
    """Hyperedge cardinality counts (how many entities share a statement)."""
    return dict(sorted(Counter(len(e.members) for e in h.edges).items()))


def unmentioned_entities(
    lexicon: EntityLexicon, h: Hypergraph
) -> tuple[LexiconEntry, ...]:
    """Lexicon entries absent from the graph, for the sidecar report."""
    present = set(h.vertices)
    return tuple(
        e for e in sorted(lexicon.entries, key=lambda e: e.canonical_name)
        if e.canonical_name not in present
    )


def cooccurrence_pairs(h: Hypergraph) -> set[tuple[str, str]]:
    """Unordered entity pairs sharing at least one hyperedge."""
    pairs: set[tuple[str, str]] = set()
    for e in h.edges:
        members = sorted(e.members)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                pairs.add((u, v))
    return pairs
