"""Entity mention extraction from tagged statements.

A mention is a lexicon hit inside one of the six weighted slot regions
of the visibility scale. Matching is greedy longest-match over
lowercased lemma sequences and never crosses a tag-region boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .lexicon import EntityLexicon
from .tagger import AnnotatedStatement, AnnotationRecord, IGTag


class MentionClass(IntEnum):
    """Slot classes of the visibility scale; the numeric value is the weight."""

    ATTRIBUTE_OR_ENTITY = 6
    OBJECT_OR_PROPERTY = 5
    INDIRECT_OBJECT = 4
    IN_ATTRIBUTE_PROPS = 3
    IN_OBJECT_PROPS = 2
    IN_INDIRECT_OBJECT_PROPS = 1

    @property
    def weight(self) -> int:
        return int(self)


TAG_TO_CLASS: dict[IGTag, MentionClass] = {
    IGTag.ATTRIBUTE: MentionClass.ATTRIBUTE_OR_ENTITY,
    IGTag.CONSTITUTED_ENTITY: MentionClass.ATTRIBUTE_OR_ENTITY,
    IGTag.DIRECT_OBJECT: MentionClass.OBJECT_OR_PROPERTY,
    IGTag.CONSTITUTING_PROPERTIES: MentionClass.OBJECT_OR_PROPERTY,
    IGTag.INDIRECT_OBJECT: MentionClass.INDIRECT_OBJECT,
    IGTag.ATTRIBUTE_PROP: MentionClass.IN_ATTRIBUTE_PROPS,
    IGTag.CONSTITUTED_ENTITY_PROP: MentionClass.IN_ATTRIBUTE_PROPS,
    IGTag.DIRECT_OBJECT_PROP: MentionClass.IN_OBJECT_PROPS,
    IGTag.CONSTITUTING_PROPERTIES_PROP: MentionClass.IN_OBJECT_PROPS,
    IGTag.INDIRECT_OBJECT_PROP: MentionClass.IN_INDIRECT_OBJECT_PROPS,
}


@dataclass(frozen=True)
class Mention:
    entity: str
    doc_id: str
    statement_id: str
    mention_class: MentionClass
    token_span: tuple[int, int]  # inclusive token-id range

    @property
    def statement_ref(self) -> tuple[str, str]:
        return (self.doc_id, self.statement_id)


def _regions(record: AnnotationRecord):
    """Maximal runs of consecutive tokens sharing a slot-bearing tag."""
    run: list = []
    run_tag: IGTag | None = None
    for tok in record.tokens:
        tag = tok.tag if tok.tag in TAG_TO_CLASS else None
        contiguous = run and tok.id == run[-1].id + 1
        if tag is not None and tag is run_tag and contiguous:
            run.append(tok)
            continue
        if run:
            yield run_tag, run
        run, run_tag = ([tok], tag) if tag is not None else ([], None)
    if run:
        yield run_tag, run


def extract_mentions(
    ann: AnnotatedStatement | AnnotationRecord, lexicon: EntityLexicon
) -> list[Mention]:
    """Scan each slot region left to right, longest surface form first."""
    record = ann.record if isinstance(ann, AnnotatedStatement) else ann
    index = lexicon.forms_by_first_lemma()
    mentions: list[Mention] = []
    for tag, region in _regions(record):
        lemmas = [t.lemma.lower() for t in region]
        i = 0
        while i < len(lemmas):
            hit = None
            for form, entry in index.get(lemmas[i], ()):
                if tuple(lemmas[i : i + len(form)]) == form:
                    hit = (form, entry)
                    break
            if hit is None:
                i += 1
                continue
            form, entry = hit
            mentions.append(
                Mention(
                    entity=entry.canonical_name,
                    doc_id=record.doc_id,
                    statement_id=record.statement_id,
                    mention_class=TAG_TO_CLASS[tag],
                    token_span=(region[i].id, region[i + len(form) - 1].id),
                )
            )
            i += len(form)
    return mentions


def extract_all_mentions(
    records, lexicon: EntityLexicon
) -> list[Mention]:
    out: list[Mention] = []
    for rec in records:
        out.extend(extract_mentions(rec, lexicon))
    return out
