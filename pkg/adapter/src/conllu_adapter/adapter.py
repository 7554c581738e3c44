"""Plain text to CoNLL-U via a pluggable dependency-parser backend.

Input contract: UTF-8 text, one atomic statement per line (statement
splitting happens upstream). Each non-empty line becomes one CoNLL-U
sentence whose sent_id is the original 1-based line number; empty lines
are skipped with a warning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

N_COLUMNS = 10


class AdapterError(Exception):
    pass


class ParserUnavailableError(AdapterError):
    """The requested parser backend or its model cannot be loaded; the
    message carries fetch instructions for the operator."""


@dataclass(frozen=True)
class TokenRow:
    """One parsed token; mirrors the CoNLL-U columns the pipeline needs."""

    id: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str
    xpos: str = "_"
    feats: str = "_"

    def to_line(self) -> str:
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma or "_",
                self.upos or "_",
                self.xpos or "_",
                self.feats or "_",
                str(self.head),
                self.deprel,
                "_",
                "_",
            )
        )


# a backend maps statement lines to one TokenRow list per line
Backend = Callable[[Sequence[str]], list[list[TokenRow]]]
BackendLoader = Callable[[str], Backend]

_BACKENDS: dict[str, BackendLoader] = {}


def register_backend(engine: str, loader: BackendLoader) -> None:
    _BACKENDS[engine] = loader


def available_engines() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


@dataclass(frozen=True)
class AdapterConfig:
    input_path: Path
    output_path: Path
    model: str = "stanza"
    language: str = "en"

    def engine_and_model(self) -> tuple[str, str]:
        """"stanza:en" -> ("stanza", "en"); a bare engine name uses the
        configured language code as its model argument."""
        if ":" in self.model:
            engine, _, model = self.model.partition(":")
            return engine, model
        return self.model, self.language


@dataclass
class AdapterResult:
    n_sentences: int
    warnings: list[str] = field(default_factory=list)


def resolve_backend(config: AdapterConfig) -> Backend:
    engine, model = config.engine_and_model()
    loader = _BACKENDS.get(engine)
    if loader is None:
        raise ParserUnavailableError(
            f"unknown parser engine {engine!r}; available: "
            f"{', '.join(available_engines()) or 'none'}"
        )
    return loader(model)


def text_to_conllu(config: AdapterConfig, backend: Backend | None = None) -> AdapterResult:
    """Parse the input file and write CoNLL-U plus a sidecar manifest.

    Raises ParserUnavailableError (with fetch instructions) when the
    backend cannot be loaded. An empty input produces an empty output
    file and a warning rather than an error.
    """
    text = Path(config.input_path).read_text(encoding="utf-8")
    raw_lines = text.split("\n")
    if raw_lines and raw_lines[-1] == "":
        raw_lines.pop()

    warnings: list[str] = []
    numbered: list[tuple[int, str]] = []
    for no, line in enumerate(raw_lines, start=1):
        if line.strip():
            numbered.append((no, line.strip()))
        else:
            warnings.append(f"line {no}: empty line skipped")

    if not numbered:
        warnings.append("input contains no statements; wrote empty output")
        Path(config.output_path).write_text("", encoding="utf-8")
        _write_manifest(config, 0)
        return AdapterResult(n_sentences=0, warnings=warnings)

    if backend is None:
        backend = resolve_backend(config)
    parsed = backend([line for _, line in numbered])
    if len(parsed) != len(numbered):
        raise AdapterError(
            f"backend returned {len(parsed)} sentences for {len(numbered)} lines"
        )

    blocks = []
    for (line_no, line), rows in zip(numbered, parsed):
        if not rows:
            raise AdapterError(f"line {line_no}: backend produced no tokens")
        lines = [f"# sent_id = {line_no}", f"# text = {line}"]
        lines.extend(r.to_line() for r in rows)
        blocks.append("\n".join(lines))
    Path(config.output_path).write_text(
        "\n\n".join(blocks) + "\n\n", encoding="utf-8", newline="\n"
    )
    _write_manifest(config, len(blocks))
    return AdapterResult(n_sentences=len(blocks), warnings=warnings)


def _write_manifest(config: AdapterConfig, n_sentences: int) -> None:
    # pins the exact model identifier used, for reproducibility
    engine, model = config.engine_and_model()
    manifest = {
        "engine": engine,
        "model": model,
        "model_identifier": f"{engine}:{model}",
        "input": str(config.input_path),
        "output": str(config.output_path),
        "n_sentences": n_sentences,
    }
    path = Path(str(config.output_path) + ".manifest.json")
    path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
