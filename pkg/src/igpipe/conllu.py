"""CoNLL-U parsing, validation and in-memory dependency trees.

A document is a sequence of statements; a statement is one CoNLL-U
sentence whose token lines form a forest over integer ids. Multiword
token ranges (id "3-4") and empty nodes (id "5.1") are kept as raw lines
for lossless serialization but never enter the tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ParseError, ValidationError

N_COLUMNS = 10

_MWT_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")
_WORD = re.compile(r"\w+(?:[-'’]\w+)*|[^\w\s]", re.UNICODE)


@dataclass(frozen=True)
class Token:
    """One syntactic word: the ten CoNLL-U columns, head/id as integers.

    `feats` is the raw column string ("_" when empty); use `feats_map()`
    for the parsed key/value view. head == 0 marks a root.
    """

    id: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    def __post_init__(self):
        if self.id < 1:
            raise ValidationError(f"token id must be >= 1, got {self.id}")
        if self.head < 0:
            raise ValidationError(f"token {self.id}: negative head {self.head}")
        if self.head == self.id:
            raise ValidationError(f"self-loop at token {self.id}")
        if not self.deprel or self.deprel == "_":
            raise ValidationError(f"token {self.id}: empty deprel")
        if (self.head == 0) != (self.deprel == "root"):
            raise ValidationError(
                f"token {self.id}: head 0 and deprel 'root' must coincide "
                f"(head={self.head}, deprel={self.deprel!r})"
            )

    def feats_map(self) -> dict[str, str]:
        if self.feats in ("", "_"):
            return {}
        out = {}
        for pair in self.feats.split("|"):
            k, _, v = pair.partition("=")
            out[k] = v
        return out

    @property
    def base_deprel(self) -> str:
        """Relation label without its subtype ("obl:tmod" -> "obl")."""
        return self.deprel.split(":", 1)[0]

    def to_line(self) -> str:
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos,
                self.feats,
                str(self.head),
                self.deprel,
                self.deps,
                self.misc,
            )
        )


@dataclass(frozen=True)
class Statement:
    """One atomic institutional statement as a dependency forest.

    extra_lines holds (token_index, raw_line) pairs for multiword ranges
    and empty nodes, anchored before the token at that index.
    """

    doc_id: str
    statement_id: str
    tokens: tuple[Token, ...]
    comments: tuple[str, ...] = ()
    extra_lines: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        if not self.tokens:
            raise ValidationError(f"statement {self.statement_id}: no tokens")
        ids = [t.id for t in self.tokens]
        if ids != list(range(1, len(ids) + 1)):
            raise ValidationError(
                f"statement {self.statement_id}: token ids not contiguous 1..n: {ids}"
            )
        n = len(ids)
        for t in self.tokens:
            if t.head > n:
                raise ValidationError(
                    f"statement {self.statement_id}: token {t.id} head {t.head} "
                    f"points outside the sentence"
                )
        self._check_acyclic()
        if not any(t.head == 0 for t in self.tokens):
            raise ValidationError(f"statement {self.statement_id}: no root token")

    def _check_acyclic(self):
        # follow head chains; ids are bounded so > n steps means a cycle
        n = len(self.tokens)
        for t in self.tokens:
            seen = set()
            cur = t.head
            while cur != 0:
                if cur in seen:
                    raise ValidationError(
                        f"cyclic head chain in statement {self.statement_id}"
                    )
                seen.add(cur)
                cur = self.tokens[cur - 1].head
                if len(seen) > n:  # pragma: no cover - guarded by the set above
                    raise ValidationError(
                        f"cyclic head chain in statement {self.statement_id}"
                    )

    @cached_property
    def _children(self) -> dict[int, tuple[int, ...]]:
        kids: dict[int, list[int]] = {t.id: [] for t in self.tokens}
        for t in self.tokens:
            if t.head != 0:
                kids[t.head].append(t.id)
        return {i: tuple(sorted(c)) for i, c in kids.items()}

    @property
    def roots(self) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.head == 0)

    def token(self, token_id: int) -> Token:
        if not 1 <= token_id <= len(self.tokens):
            raise LookupError(
                f"statement {self.statement_id}: no token with id {token_id}"
            )
        return self.tokens[token_id - 1]

    def children(self, token_id: int) -> tuple[Token, ...]:
        self.token(token_id)
        return tuple(self.tokens[i - 1] for i in self._children[token_id])

    def subtree_ids(self, token_id: int) -> tuple[int, ...]:
        self.token(token_id)
        collected = []
        stack = [token_id]
        while stack:
            cur = stack.pop()
            collected.append(cur)
            stack.extend(self._children[cur])
        return tuple(sorted(collected))

    @property
    def text(self) -> str:
        """Surface string: the `# text` comment when present, else
        reconstructed from forms honoring SpaceAfter=No."""
        for c in self.comments:
            m = re.match(r"#\s*text\s*=\s*(.*)$", c)
            if m:
                return m.group(1)
        parts = []
        for t in self.tokens:
            parts.append(t.form)
            misc = t.misc
            if "SpaceAfter=No" not in misc and t is not self.tokens[-1]:
                parts.append(" ")
        return "".join(parts)

    def structural_warnings(self) -> tuple[str, ...]:
        warnings = []
        roots = [t.id for t in self.tokens if t.head == 0]
        if len(roots) > 1:
            warnings.append(f"multiple roots at tokens {roots}")
        return tuple(warnings)

    def to_lines(self) -> list[str]:
        lines = list(self.comments)
        extra = {}
        for idx, raw in self.extra_lines:
            extra.setdefault(idx, []).append(raw)
        for i, tok in enumerate(self.tokens):
            lines.extend(extra.get(i, ()))
            lines.append(tok.to_line())
        lines.extend(extra.get(len(self.tokens), ()))
        return lines


def subtree(statement: Statement, token_id: int) -> list[Token]:
    """The token plus all transitive dependents, in surface order."""
    return [statement.tokens[i - 1] for i in statement.subtree_ids(token_id)]


@dataclass(frozen=True)
class Document:
    doc_id: str
    statements: tuple[Statement, ...]
    metadata: dict[str, str] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        seen = set()
        for s in self.statements:
            if s.statement_id in seen:
                raise ValidationError(
                    f"duplicate statement_id {s.statement_id!r} in document {self.doc_id}"
                )
            seen.add(s.statement_id)


def _parse_token_line(line: str, line_no: int) -> Token:
    cols = line.split("\t")
    if len(cols) != N_COLUMNS:
        raise ParseError(
            f"expected {N_COLUMNS} tab-separated columns, got {len(cols)}", line_no
        )
    try:
        tid = int(cols[0])
    except ValueError:
        raise ParseError(f"invalid token id {cols[0]!r}", line_no) from None
    try:
        head = int(cols[6])
    except ValueError:
        raise ParseError(f"non-integer head {cols[6]!r}", line_no) from None
    try:
        return Token(
            id=tid,
            form=cols[1],
            lemma=cols[2],
            upos=cols[3],
            xpos=cols[4],
            feats=cols[5],
            head=head,
            deprel=cols[7],
            deps=cols[8],
            misc=cols[9],
        )
    except ValidationError as e:
        raise ParseError(str(e), line_no) from None


_SENT_ID = re.compile(r"#\s*sent_id\s*=\s*(\S+)")
_NEWDOC = re.compile(r"#\s*newdoc(?:\s+(\S+)\s*=\s*(.*\S))?\s*$")


def parse_conllu(text: str, doc_id: str = "doc") -> Document:
    """Parse CoNLL-U text into a validated Document.

    Raises ParseError for malformed lines and ValidationError for tree
    violations; tolerated oddities (multiple roots) become warnings on
    the returned document.
    """
    statements: list[Statement] = []
    warnings: list[str] = []
    metadata: dict[str, str] = {}

    comments: list[str] = []
    tokens: list[Token] = []
    extra: list[tuple[int, str]] = []
    ordinal = 0

    def flush():
        nonlocal comments, tokens, extra, ordinal, doc_id
        if not comments and not tokens and not extra:
            return
        ordinal += 1
        sid = f"s{ordinal}"
        for c in comments:
            m = _SENT_ID.match(c)
            if m:
                sid = m.group(1)
            m = _NEWDOC.match(c)
            if m:
                if m.group(1) == "id":
                    doc_id = m.group(2)
                if m.group(1):
                    metadata[f"newdoc {m.group(1)}"] = m.group(2)
        if not tokens:
            raise ParseError(f"sentence {sid} has no token lines")
        stmt = Statement(
            doc_id="",  # patched below once doc_id is final
            statement_id=sid,
            tokens=tuple(tokens),
            comments=tuple(comments),
            extra_lines=tuple(extra),
        )
        statements.append(stmt)
        for w in stmt.structural_warnings():
            warnings.append(f"statement {sid}: {w}")
        comments, tokens, extra = [], [], []

    for line_no, line in enumerate(text.split("\n"), start=1):
        if line == "":
            flush()
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        first = line.split("\t", 1)[0]
        if _MWT_ID.match(first) or _EMPTY_ID.match(first):
            extra.append((len(tokens), line))
            continue
        tokens.append(_parse_token_line(line, line_no))
    flush()

    # doc_id may have been discovered mid-parse; rebuild statements with it
    statements = [
        Statement(
            doc_id=doc_id,
            statement_id=s.statement_id,
            tokens=s.tokens,
            comments=s.comments,
            extra_lines=s.extra_lines,
        )
        for s in statements
    ]
    return Document(
        doc_id=doc_id,
        statements=tuple(statements),
        metadata=metadata,
        warnings=tuple(warnings),
    )


def to_conllu(doc: Document) -> str:
    """Serialize back to CoNLL-U; lossless for the ten standard columns.

    Canonical shape: sentences separated by blank lines, file ends with
    one blank line."""
    blocks = []
    for s in doc.statements:
        blocks.append("\n".join(s.to_lines()))
    return "\n\n".join(blocks) + "\n\n" if blocks else ""


def statement_from_text(
    text: str, statement_id: str = "s1", doc_id: str = "doc"
) -> Statement:
    """Whitespace/punctuation tokenization into a flat placeholder tree.

    Used for plain-text training rows where no parse exists: the first
    token is the root and everything else attaches to it. Lemmas are
    lowercased forms; pure-punctuation tokens get upos PUNCT.
    """
    forms = _WORD.findall(text)
    if not forms:
        raise ValidationError(f"statement {statement_id}: no tokens in text {text!r}")
    tokens = []
    for i, form in enumerate(forms, start=1):
        is_punct = not re.search(r"\w", form)
        tokens.append(
            Token(
                id=i,
                form=form,
                lemma=form.lower(),
                upos="PUNCT" if is_punct else "X",
                head=0 if i == 1 else 1,
                deprel="root" if i == 1 else "dep",
            )
        )
    return Statement(doc_id=doc_id, statement_id=statement_id, tokens=tuple(tokens))
