"""Rule engine assigning institutional-grammar component tags to tokens.

Two rule programs, one per statement type. Rules fire in a fixed order
and a token is never retagged, so output is deterministic and every
tagged token traces back to exactly one rule record.

Constitutive program (root must be VERB or ADJ):
  c1a  root VERB -> Function, root ADJ -> Properties
  c1b  root's aux:pass/cop child -> Function
  c1c  root's nsubj/nsubj:pass/expl child -> Entity
  c1d  entity's det/compound/mark child + descendants -> Entity
  c1e  root's obl/advmod/xcomp child + descendants -> Context
  c2   root's aux child with a modal lemma -> Modal

Regulative program (root must be VERB), the structural mirror:
  r1a  root -> Aim                       r1b  aux:pass/cop child -> Aim
  r1c  subject child -> Attribute        r1d  its det/compound/mark -> Attribute
  r3   obj subtree -> DirectObject core + DirectObjectProp remainder
  r4   iobj subtree (or a to-case oblique naming a lexicon actor)
       -> IndirectObject core + IndirectObjectProp remainder
  r5   remaining obl/advmod/xcomp/advcl subtrees -> Context
  r2   aux child with a modal lemma -> Deontic

Core vs remainder: the span head plus its det/compound/mark descendants
are the object core; every other non-punctuation descendant lands in the
property tag. Punctuation never receives a tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .classifier import StatementType
from .conllu import Statement, Token
from .errors import ValidationError
from .lexicon import EntityLexicon

MODAL_LEMMAS = frozenset(
    {"must", "should", "may", "might", "can", "could", "need", "ought", "shall"}
)

_SUBJECT_RELS = frozenset({"nsubj", "nsubj:pass", "expl"})
_FUNCTION_RELS = frozenset({"aux:pass", "cop"})
_ENTITY_EXPAND_RELS = frozenset({"det", "compound", "mark"})
_CONST_CONTEXT_RELS = frozenset({"obl", "advmod", "xcomp"})
_REG_CONTEXT_RELS = frozenset({"obl", "advmod", "xcomp", "advcl"})


class IGTag(str, Enum):
    CONSTITUTED_ENTITY = "ConstitutedEntity"
    CONSTITUTED_ENTITY_PROP = "ConstitutedEntityProp"
    CONSTITUTIVE_FUNCTION = "ConstitutiveFunction"
    CONSTITUTING_PROPERTIES = "ConstitutingProperties"
    CONSTITUTING_PROPERTIES_PROP = "ConstitutingPropertiesProp"
    MODAL = "Modal"
    ATTRIBUTE = "Attribute"
    ATTRIBUTE_PROP = "AttributeProp"
    AIM = "Aim"
    DEONTIC = "Deontic"
    DIRECT_OBJECT = "DirectObject"
    DIRECT_OBJECT_PROP = "DirectObjectProp"
    INDIRECT_OBJECT = "IndirectObject"
    INDIRECT_OBJECT_PROP = "IndirectObjectProp"
    CONTEXT = "Context"
    UNTAGGED = "Untagged"


REGULATIVE_TAGS = frozenset(
    {
        IGTag.ATTRIBUTE,
        IGTag.ATTRIBUTE_PROP,
        IGTag.AIM,
        IGTag.DEONTIC,
        IGTag.DIRECT_OBJECT,
        IGTag.DIRECT_OBJECT_PROP,
        IGTag.INDIRECT_OBJECT,
        IGTag.INDIRECT_OBJECT_PROP,
        IGTag.CONTEXT,
    }
)
CONSTITUTIVE_TAGS = frozenset(
    {
        IGTag.CONSTITUTED_ENTITY,
        IGTag.CONSTITUTED_ENTITY_PROP,
        IGTag.CONSTITUTIVE_FUNCTION,
        IGTag.CONSTITUTING_PROPERTIES,
        IGTag.CONSTITUTING_PROPERTIES_PROP,
        IGTag.MODAL,
        IGTag.CONTEXT,
    }
)


def _layer_tags(statement_type: StatementType) -> frozenset[IGTag]:
    return (
        REGULATIVE_TAGS
        if statement_type is StatementType.REGULATIVE
        else CONSTITUTIVE_TAGS
    )


@dataclass(frozen=True)
class RuleRecord:
    rule_id: str
    token_ids: tuple[int, ...]
    note: str | None = None


@dataclass(frozen=True)
class AnnotatedToken:
    id: int
    form: str
    lemma: str
    tag: IGTag


@dataclass(frozen=True)
class AnnotationRecord:
    """Wire-format view of one annotated statement (the JSONL schema)."""

    doc_id: str
    statement_id: str
    type: StatementType
    tokens: tuple[AnnotatedToken, ...]
    rule_trace: tuple[RuleRecord, ...] = ()
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        allowed = _layer_tags(self.type) | {IGTag.UNTAGGED}
        for t in self.tokens:
            if t.tag not in allowed:
                raise ValidationError(
                    f"statement {self.statement_id}: tag {t.tag.value} does not "
                    f"belong to the {self.type.value} tag set"
                )

    @property
    def statement_ref(self) -> tuple[str, str]:
        return (self.doc_id, self.statement_id)

    @property
    def tags(self) -> tuple[IGTag, ...]:
        return tuple(t.tag for t in self.tokens)

    def to_json_obj(self) -> dict:
        obj = {
            "doc_id": self.doc_id,
            "statement_id": self.statement_id,
            "type": self.type.value,
            "tokens": [
                {"id": t.id, "form": t.form, "lemma": t.lemma, "tag": t.tag.value}
                for t in self.tokens
            ],
            "rule_trace": [
                {"rule_id": r.rule_id, "token_ids": list(r.token_ids)}
                | ({"note": r.note} if r.note else {})
                for r in self.rule_trace
            ],
            "diagnostics": list(self.diagnostics),
        }
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "AnnotationRecord":
        return cls(
            doc_id=obj["doc_id"],
            statement_id=obj["statement_id"],
            type=StatementType(obj["type"]),
            tokens=tuple(
                AnnotatedToken(
                    id=t["id"],
                    form=t["form"],
                    lemma=t.get("lemma", t["form"].lower()),
                    tag=IGTag(t["tag"]),
                )
                for t in obj["tokens"]
            ),
            rule_trace=tuple(
                RuleRecord(r["rule_id"], tuple(r["token_ids"]), r.get("note"))
                for r in obj.get("rule_trace", [])
            ),
            diagnostics=tuple(obj.get("diagnostics", [])),
        )


@dataclass(frozen=True)
class AnnotatedStatement:
    statement: Statement
    type: StatementType
    tags: tuple[IGTag, ...]
    rule_trace: tuple[RuleRecord, ...]
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.tags) != len(self.statement.tokens):
            raise ValidationError(
                f"statement {self.statement.statement_id}: {len(self.tags)} tags "
                f"for {len(self.statement.tokens)} tokens"
            )
        allowed = _layer_tags(self.type) | {IGTag.UNTAGGED}
        bad = {t.value for t in self.tags if t not in allowed}
        if bad:
            raise ValidationError(
                f"statement {self.statement.statement_id}: tags {sorted(bad)} do "
                f"not belong to the {self.type.value} tag set"
            )
        traced: set[int] = set()
        for rec in self.rule_trace:
            dup = traced.intersection(rec.token_ids)
            if dup:
                raise ValidationError(
                    f"statement {self.statement.statement_id}: tokens {sorted(dup)} "
                    f"appear in more than one rule record"
                )
            traced.update(rec.token_ids)
        tagged = {
            t.id
            for t, tag in zip(self.statement.tokens, self.tags)
            if tag is not IGTag.UNTAGGED
        }
        if traced != tagged:
            raise ValidationError(
                f"statement {self.statement.statement_id}: rule trace covers "
                f"{sorted(traced)} but tagged tokens are {sorted(tagged)}"
            )

    @property
    def record(self) -> AnnotationRecord:
        return AnnotationRecord(
            doc_id=self.statement.doc_id,
            statement_id=self.statement.statement_id,
            type=self.type,
            tokens=tuple(
                AnnotatedToken(id=t.id, form=t.form, lemma=t.lemma, tag=tag)
                for t, tag in zip(self.statement.tokens, self.tags)
            ),
            rule_trace=self.rule_trace,
            diagnostics=self.diagnostics,
        )


class _Assigner:
    """Single-assignment tag store; first firing rule wins."""

    def __init__(self, statement: Statement):
        self.statement = statement
        self.tags: list[IGTag] = [IGTag.UNTAGGED] * len(statement.tokens)
        self.trace: list[RuleRecord] = []

    def assign(
        self, rule_id: str, token_ids: Iterable[int], tag: IGTag, note: str | None = None
    ) -> list[int]:
        fresh = sorted(
            i
            for i in token_ids
            if self.tags[i - 1] is IGTag.UNTAGGED
            and self.statement.token(i).upos != "PUNCT"
        )
        for i in fresh:
            self.tags[i - 1] = tag
        if fresh:
            self.trace.append(RuleRecord(rule_id, tuple(fresh), note))
        return fresh

    def is_untagged(self, token_id: int) -> bool:
        return self.tags[token_id - 1] is IGTag.UNTAGGED


def _rel_in(token: Token, rels: frozenset[str]) -> bool:
    """Exact or base-label relation match ("obl:tmod" satisfies "obl")."""
    return token.deprel in rels or token.base_deprel in rels


def _span_ids(statement: Statement, anchor_id: int) -> list[int]:
    """Subtree of anchor in surface order, punctuation removed."""
    return [
        i
        for i in statement.subtree_ids(anchor_id)
        if statement.token(i).upos != "PUNCT"
    ]


def _select_root(statement: Statement, diagnostics: list[str]) -> Token:
    roots = statement.roots
    if len(roots) > 1:
        diagnostics.append(
            f"multiple roots at tokens {[t.id for t in roots]}; using the first"
        )
    return roots[0]


def _context_note(span: Sequence[int], root_id: int) -> str:
    # spans fully preceding the predicate read as activation conditions,
    # everything else as execution constraints
    return "activation-condition" if max(span) < root_id else "execution-constraint"


def _object_split(
    statement: Statement, head: Token, exclude: set[int] | None = None
) -> tuple[list[int], list[int]]:
    """Core ids (head + det/compound/mark descendants) and property ids."""
    span = _span_ids(statement, head.id)
    if exclude:
        span = [i for i in span if i not in exclude]
    core = {head.id}
    for ch in statement.children(head.id):
        if _rel_in(ch, _ENTITY_EXPAND_RELS):
            core.update(_span_ids(statement, ch.id))
    core &= set(span)
    prop = [i for i in span if i not in core]
    return sorted(core), prop


def _amod_diagnostics(
    statement: Statement, assigner: _Assigner, subject_ids: list[int], diag: list[str]
) -> None:
    for sid in subject_ids:
        for ch in statement.children(sid):
            if ch.base_deprel == "amod" and assigner.is_untagged(ch.id):
                diag.append(
                    f"amod modifier {ch.form!r} of {statement.token(sid).form!r} "
                    f"left untagged"
                )


def tag_constitutive(statement: Statement) -> AnnotatedStatement:
    """Apply the constitutive rule program to one parsed statement.

    A root that is neither VERB nor ADJ leaves every token untagged and
    a diagnostic explaining why.
    """
    diag: list[str] = []
    if not statement.roots:
        raise ValidationError(f"unrooted statement {statement.statement_id}")
    root = _select_root(statement, diag)
    a = _Assigner(statement)

    if root.upos == "VERB":
        a.assign("c1a", [root.id], IGTag.CONSTITUTIVE_FUNCTION)
    elif root.upos == "ADJ":
        a.assign("c1a", [root.id], IGTag.CONSTITUTING_PROPERTIES)
    else:
        diag.append(
            f"root {root.form!r} has upos {root.upos}; constitutive rules "
            f"require a VERB or ADJ root"
        )
        return AnnotatedStatement(
            statement=statement,
            type=StatementType.CONSTITUTIVE,
            tags=tuple(a.tags),
            rule_trace=(),
            diagnostics=tuple(diag),
        )

    children = statement.children(root.id)
    for ch in children:
        if ch.deprel in _FUNCTION_RELS:
            a.assign("c1b", [ch.id], IGTag.CONSTITUTIVE_FUNCTION)

    entity_ids: list[int] = []
    for ch in children:
        if _rel_in(ch, _SUBJECT_RELS):
            if a.assign("c1c", [ch.id], IGTag.CONSTITUTED_ENTITY):
                entity_ids.append(ch.id)
    for eid in entity_ids:
        for ch in statement.children(eid):
            if _rel_in(ch, _ENTITY_EXPAND_RELS):
                a.assign("c1d", _span_ids(statement, ch.id), IGTag.CONSTITUTED_ENTITY)

    for ch in children:
        if _rel_in(ch, _CONST_CONTEXT_RELS):
            span = _span_ids(statement, ch.id)
            if span:
                a.assign(
                    "c1e", span, IGTag.CONTEXT, note=_context_note(span, root.id)
                )

    for ch in children:
        if ch.deprel == "aux" and ch.lemma.lower() in MODAL_LEMMAS:
            a.assign("c2", [ch.id], IGTag.MODAL)

    _amod_diagnostics(statement, a, entity_ids, diag)
    return AnnotatedStatement(
        statement=statement,
        type=StatementType.CONSTITUTIVE,
        tags=tuple(a.tags),
        rule_trace=tuple(a.trace),
        diagnostics=tuple(diag),
    )


def _is_actor_oblique(
    statement: Statement, head: Token, lexicon: EntityLexicon | None
) -> tuple[bool, set[int]]:
    """A to-case oblique whose head names a lexicon actor is an indirect
    object; returns the case-token ids to keep untagged."""
    if lexicon is None:
        return False, set()
    case_ids = {
        ch.id
        for ch in statement.children(head.id)
        if ch.base_deprel == "case"
    }
    has_to = any(
        statement.token(i).lemma.lower() == "to" for i in case_ids
    )
    if not has_to:
        return False, set()
    span = _span_ids(statement, head.id)
    lemmas = [statement.token(i).lemma for i in span]
    head_pos = span.index(head.id)
    return lexicon.actor_match_covering(lemmas, head_pos), case_ids


def tag_regulative(
    statement: Statement, lexicon: EntityLexicon | None = None
) -> AnnotatedStatement:
    """Apply the regulative mirror program to one parsed statement.

    The lexicon, when given, lets a "to the Committee"-style oblique be
    recognized as an indirect object; without it such obliques stay
    context.
    """
    diag: list[str] = []
    if not statement.roots:
        raise ValidationError(f"unrooted statement {statement.statement_id}")
    root = _select_root(statement, diag)
    a = _Assigner(statement)

    if root.upos != "VERB":
        diag.append(
            f"root {root.form!r} has upos {root.upos}; regulative rules "
            f"require a VERB root"
        )
        return AnnotatedStatement(
            statement=statement,
            type=StatementType.REGULATIVE,
            tags=tuple(a.tags),
            rule_trace=(),
            diagnostics=tuple(diag),
        )

    a.assign("r1a", [root.id], IGTag.AIM)
    children = statement.children(root.id)
    for ch in children:
        if ch.deprel in _FUNCTION_RELS:
            a.assign("r1b", [ch.id], IGTag.AIM)

    subject_ids: list[int] = []
    for ch in children:
        if _rel_in(ch, _SUBJECT_RELS):
            if a.assign("r1c", [ch.id], IGTag.ATTRIBUTE):
                subject_ids.append(ch.id)
    for sid in subject_ids:
        for ch in statement.children(sid):
            if _rel_in(ch, _ENTITY_EXPAND_RELS):
                a.assign("r1d", _span_ids(statement, ch.id), IGTag.ATTRIBUTE)

    for ch in children:
        if _rel_in(ch, frozenset({"obj"})):
            core, prop = _object_split(statement, ch)
            a.assign("r3a", core, IGTag.DIRECT_OBJECT)
            if prop:
                a.assign("r3b", prop, IGTag.DIRECT_OBJECT_PROP)

    context_candidates: list[Token] = []
    for ch in children:
        if _rel_in(ch, frozenset({"iobj"})):
            core, prop = _object_split(statement, ch)
            a.assign("r4a", core, IGTag.INDIRECT_OBJECT)
            if prop:
                a.assign("r4b", prop, IGTag.INDIRECT_OBJECT_PROP)
        elif _rel_in(ch, _REG_CONTEXT_RELS):
            if ch.base_deprel == "obl":
                is_actor, case_ids = _is_actor_oblique(statement, ch, lexicon)
                if is_actor:
                    exclude = set()
                    for cid in case_ids:
                        exclude.update(statement.subtree_ids(cid))
                    core, prop = _object_split(statement, ch, exclude=exclude)
                    a.assign("r4a", core, IGTag.INDIRECT_OBJECT, note="oblique")
                    if prop:
                        a.assign("r4b", prop, IGTag.INDIRECT_OBJECT_PROP, note="oblique")
                    continue
            context_candidates.append(ch)

    for ch in context_candidates:
        span = _span_ids(statement, ch.id)
        if span:
            a.assign("r5", span, IGTag.CONTEXT, note=_context_note(span, root.id))

    for ch in children:
        if ch.deprel == "aux" and ch.lemma.lower() in MODAL_LEMMAS:
            a.assign("r2", [ch.id], IGTag.DEONTIC)

    _amod_diagnostics(statement, a, subject_ids, diag)
    return AnnotatedStatement(
        statement=statement,
        type=StatementType.REGULATIVE,
        tags=tuple(a.tags),
        rule_trace=tuple(a.trace),
        diagnostics=tuple(diag),
    )


def tag_statement(
    statement: Statement,
    statement_type: StatementType,
    lexicon: EntityLexicon | None = None,
) -> AnnotatedStatement:
    if statement_type is StatementType.REGULATIVE:
        return tag_regulative(statement, lexicon)
    return tag_constitutive(statement)


# --- evaluation collapsing ------------------------------------------------

_COLLAPSED: dict[IGTag, str] = {
    IGTag.ATTRIBUTE: "Attribute",
    IGTag.ATTRIBUTE_PROP: "Attribute",
    IGTag.AIM: "Aim",
    IGTag.DEONTIC: "Deontic",
    IGTag.DIRECT_OBJECT: "Object",
    IGTag.DIRECT_OBJECT_PROP: "Object",
    IGTag.INDIRECT_OBJECT: "Object",
    IGTag.INDIRECT_OBJECT_PROP: "Object",
    IGTag.CONSTITUTED_ENTITY: "ConstitutedEntity",
    IGTag.CONSTITUTED_ENTITY_PROP: "ConstitutedEntity",
    IGTag.CONSTITUTING_PROPERTIES: "ConstitutingProperties",
    IGTag.CONSTITUTING_PROPERTIES_PROP: "ConstitutingProperties",
    IGTag.CONSTITUTIVE_FUNCTION: "ConstitutiveFunction",
    IGTag.MODAL: "Modal",
    IGTag.CONTEXT: "Context",
    IGTag.UNTAGGED: "Untagged",
}

_CONTEXT_ALIASES = {"ActivationCondition", "ExecutionConstraint"}
_COLLAPSED_NAMES = set(_COLLAPSED.values())


def collapse_label(tag: IGTag | str) -> str:
    """Evaluation label for a tag; idempotent on already-collapsed names."""
    if isinstance(tag, IGTag):
        return _COLLAPSED[tag]
    if tag in _CONTEXT_ALIASES:
        return "Context"
    try:
        return _COLLAPSED[IGTag(tag)]
    except ValueError:
        if tag in _COLLAPSED_NAMES:
            return tag
        raise ValidationError(f"unknown tag label {tag!r}") from None


def collapse_tags_for_eval(tags: Sequence[IGTag | str]) -> tuple[str, ...]:
    """Property tags fold into their base component and both object kinds
    fold into Object, mirroring how the annotations are scored."""
    return tuple(collapse_label(t) for t in tags)


# --- JSONL annotation IO ----------------------------------------------------


def dumps_annotation(record: AnnotationRecord) -> str:
    return json.dumps(record.to_json_obj(), sort_keys=True, ensure_ascii=False)


def write_annotations(records: Iterable[AnnotationRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rec in records:
            f.write(dumps_annotation(rec) + "\n")


def read_annotations(path) -> list[AnnotationRecord]:
    records = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(AnnotationRecord.from_json_obj(json.loads(line)))
    return records
