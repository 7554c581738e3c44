"""Neural parser backends: stanza (preferred, native UD) and spacy.

Both loaders raise ParserUnavailableError with concrete fetch
instructions when the package or its pretrained model is missing.
"""

from __future__ import annotations

from typing import Sequence

from .adapter import Backend, ParserUnavailableError, TokenRow, register_backend

STANZA_INSTALL = (
    "install the stanza backend with:\n"
    "    pip install stanza\n"
    "    python -c \"import stanza; stanza.download('{lang}')\""
)
SPACY_INSTALL = (
    "install the spacy backend with:\n"
    "    pip install spacy\n"
    "    python -m spacy download {model}"
)


def load_stanza(lang: str) -> Backend:
    try:
        import stanza
    except ImportError:
        raise ParserUnavailableError(
            "stanza is not installed; " + STANZA_INSTALL.format(lang=lang)
        ) from None
    try:
        pipeline = stanza.Pipeline(
            lang=lang,
            processors="tokenize,pos,lemma,depparse",
            tokenize_no_ssplit=True,
            verbose=False,
            download_method=None,
        )
    except Exception as e:
        raise ParserUnavailableError(
            f"stanza model for {lang!r} could not be loaded ({e}); "
            + STANZA_INSTALL.format(lang=lang)
        ) from e

    def parse(lines: Sequence[str]) -> list[list[TokenRow]]:
        # tokenize_no_ssplit treats blank-line-separated chunks as sentences
        doc = pipeline("\n\n".join(lines))
        out = []
        for sent in doc.sentences:
            rows = [
                TokenRow(
                    id=word.id,
                    form=word.text,
                    lemma=word.lemma or word.text.lower(),
                    upos=word.upos or "_",
                    xpos=word.xpos or "_",
                    feats=word.feats or "_",
                    head=word.head,
                    deprel=word.deprel or "dep",
                )
                for word in sent.words
            ]
            out.append(rows)
        return out

    return parse


def load_spacy(model: str) -> Backend:
    try:
        import spacy
    except ImportError:
        raise ParserUnavailableError(
            "spacy is not installed; " + SPACY_INSTALL.format(model=model)
        ) from None
    try:
        nlp = spacy.load(model)
    except OSError as e:
        raise ParserUnavailableError(
            f"spacy model {model!r} is not available ({e}); "
            + SPACY_INSTALL.format(model=model)
        ) from e

    def parse(lines: Sequence[str]) -> list[list[TokenRow]]:
        out = []
        for doc in nlp.pipe(lines):
            rows = []
            for i, tok in enumerate(doc, start=1):
                is_root = tok.head is tok
                rows.append(
                    TokenRow(
                        id=i,
                        form=tok.text,
                        lemma=tok.lemma_ or tok.text.lower(),
                        upos=tok.pos_ or "_",
                        xpos=tok.tag_ or "_",
                        feats=str(tok.morph) or "_",
                        head=0 if is_root else tok.head.i + 1,
                        deprel="root" if is_root else tok.dep_,
                    )
                )
            out.append(rows)
        return out

    return parse


register_backend("stanza", load_stanza)
register_backend("spacy", load_spacy)
