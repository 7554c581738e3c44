"""Curated lexicon of actors and objects with lemma-sequence surface forms."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

from .errors import LexiconError


class EntityKind(str, Enum):
    ACTOR = "actor"
    OBJECT = "object"


def _normalize_form(form: str) -> tuple[str, ...]:
    lemmas = tuple(w.lower() for w in form.split())
    if not lemmas:
        raise LexiconError(f"empty surface form {form!r}")
    return lemmas


@dataclass(frozen=True)
class LexiconEntry:
    canonical_name: str
    kind: EntityKind
    surface_forms: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class EntityLexicon:
    entries: tuple[LexiconEntry, ...]

    def __post_init__(self):
        names = set()
        owner: dict[tuple[str, ...], str] = {}
        for e in self.entries:
            if e.canonical_name in names:
                raise LexiconError(f"duplicate canonical name {e.canonical_name!r}")
            names.add(e.canonical_name)
            if not e.surface_forms:
                raise LexiconError(f"entry {e.canonical_name!r} has no surface forms")
            for form in e.surface_forms:
                if not form or any(not w for w in form):
                    raise LexiconError(
                        f"entry {e.canonical_name!r} has an empty surface form"
                    )
                if form in owner and owner[form] != e.canonical_name:
                    raise LexiconError(
                        f"surface form {' '.join(form)!r} maps to both "
                        f"{owner[form]!r} and {e.canonical_name!r}"
                    )
                owner[form] = e.canonical_name

    def entry(self, canonical_name: str) -> LexiconEntry:
        for e in self.entries:
            if e.canonical_name == canonical_name:
                return e
        raise LexiconError(f"unknown entity {canonical_name!r}")

    def kinds(self) -> dict[str, EntityKind]:
        return {e.canonical_name: e.kind for e in self.entries}

    def forms_by_first_lemma(self) -> dict[str, list[tuple[tuple[str, ...], LexiconEntry]]]:
        """Index for greedy longest-match scanning, longest form first."""
        index: dict[str, list[tuple[tuple[str, ...], LexiconEntry]]] = {}
        for e in self.entries:
            for form in e.surface_forms:
                index.setdefault(form[0], []).append((form, e))
        for forms in index.values():
            forms.sort(key=lambda fe: (-len(fe[0]), fe[0]))
        return index

    def actor_match_covering(self, lemmas: list[str], pos: int) -> bool:
        """Does any actor surface form match a window containing `pos`?"""
        low = [w.lower() for w in lemmas]
        for e in self.entries:
            if e.kind is not EntityKind.ACTOR:
                continue
            for form in e.surface_forms:
                L = len(form)
                for start in range(max(0, pos - L + 1), min(pos + 1, len(low) - L + 1)):
                    if tuple(low[start : start + L]) == form:
                        return True
        return False


CSV_HEADER = ("canonical_name", "kind", "surface_form")


def lexicon_from_csv(text: str) -> EntityLexicon:
    """One row per surface form: canonical_name,kind,surface_form."""
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise LexiconError("empty lexicon file")
    if tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise LexiconError(
            f"lexicon header must be {','.join(CSV_HEADER)}, got {rows[0]}"
        )
    kinds: dict[str, EntityKind] = {}
    forms: dict[str, list[tuple[str, ...]]] = {}
    order: list[str] = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise LexiconError(f"lexicon row {i}: expected 3 columns, got {len(row)}")
        name, kind_s, form = (c.strip() for c in row)
        if not name:
            raise LexiconError(f"lexicon row {i}: empty canonical name")
        try:
            kind = EntityKind(kind_s.lower())
        except ValueError:
            raise LexiconError(
                f"lexicon row {i}: kind must be actor or object, got {kind_s!r}"
            ) from None
        if name in kinds and kinds[name] is not kind:
            raise LexiconError(
                f"lexicon row {i}: entity {name!r} declared with two kinds"
            )
        if name not in kinds:
            kinds[name] = kind
            order.append(name)
        forms.setdefault(name, [])
        normalized = _normalize_form(form)
        if normalized not in forms[name]:
            forms[name].append(normalized)
    entries = tuple(
        LexiconEntry(
            canonical_name=name, kind=kinds[name], surface_forms=tuple(forms[name])
        )
        for name in order
    )
    return EntityLexicon(entries=entries)


def load_lexicon(path) -> EntityLexicon:
    with open(path, encoding="utf-8") as f:
        return lexicon_from_csv(f.read())
