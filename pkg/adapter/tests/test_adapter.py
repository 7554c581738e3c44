"""Adapter contract tests.

The primary pipeline is exercised strictly through its external
interfaces: the .conllu file format and the `igpipe` CLI. A deterministic
stub backend covers the emission contract; the acceptance test runs a
real neural backend when one is importable and otherwise skips with the
verified reason.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from conllu_adapter import (
    AdapterConfig,
    ParserUnavailableError,
    TokenRow,
    register_backend,
    text_to_conllu,
)
from conllu_adapter import backends as real_backends  # noqa: F401

FIG1_TEXT = (
    "Once a year, each State Party may submit a request for financial "
    "assistance to the Committee through an online form."
)
FIG3_TEXT = "the employee is unable to work"


def chain_stub(lines):
    """Deterministic placeholder parse: first token is the root, each
    later token attaches to the previous one."""
    out = []
    for line in lines:
        words = line.split()
        rows = [
            TokenRow(
                id=i,
                form=w,
                lemma=w.lower(),
                upos="X",
                head=0 if i == 1 else i - 1,
                deprel="root" if i == 1 else "dep",
            )
            for i, w in enumerate(words, start=1)
        ]
        out.append(rows)
    return out


register_backend("stub", lambda model: chain_stub)


def run_igpipe_tag(conllu_path: Path, tmp_path: Path):
    out = tmp_path / (conllu_path.stem + ".igjsonl")
    proc = subprocess.run(
        [
            sys.executable, "-m", "igpipe", "tag",
            "--type", "constitutive",
            "--in", str(conllu_path),
            "--out", str(out),
        ],
        capture_output=True,
        text=True,
    )
    return proc, out


def parse_conllu_blocks(text: str):
    """Minimal reader for assertions: list of {form: (head, deprel)} maps."""
    sentences = []
    for block in text.strip().split("\n\n"):
        rows = {}
        for line in block.splitlines():
            if line.startswith("#") or not line.strip():
                continue
            cols = line.split("\t")
            rows[cols[1]] = (int(cols[6]), cols[7])
        if rows:
            sentences.append(rows)
    return sentences


def test_stub_emission_contract(tmp_path):
    src = tmp_path / "statements.txt"
    src.write_text("The fund is available\n\nThe Committee shall report\n")
    out = tmp_path / "statements.conllu"
    config = AdapterConfig(input_path=src, output_path=out, model="stub")
    result = text_to_conllu(config)
    assert result.n_sentences == 2
    assert any("line 2: empty line skipped" in w for w in result.warnings)
    text = out.read_text()
    # sent_id is the original line number, including the skipped line
    assert "# sent_id = 1" in text and "# sent_id = 3" in text
    assert "# sent_id = 2" not in text
    manifest = json.loads((tmp_path / "statements.conllu.manifest.json").read_text())
    assert manifest["model_identifier"] == "stub:en"
    assert manifest["n_sentences"] == 2


def test_stub_output_accepted_by_primary_without_warnings(tmp_path):
    src = tmp_path / "in.txt"
    src.write_text(FIG1_TEXT + "\n" + FIG3_TEXT + "\n")
    out = tmp_path / "in.conllu"
    text_to_conllu(AdapterConfig(input_path=src, output_path=out, model="stub"))
    proc, jsonl = run_igpipe_tag(out, tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "warning" not in proc.stderr.lower()
    records = [json.loads(line) for line in jsonl.read_text().splitlines()]
    assert len(records) == 2


def test_empty_file_writes_empty_output_with_warning(tmp_path):
    src = tmp_path / "empty.txt"
    src.write_text("")
    out = tmp_path / "empty.conllu"
    result = text_to_conllu(AdapterConfig(input_path=src, output_path=out, model="stub"))
    assert result.n_sentences == 0
    assert out.read_text() == ""
    assert any("no statements" in w for w in result.warnings)


def test_unknown_engine_has_instructions(tmp_path):
    src = tmp_path / "x.txt"
    src.write_text("something\n")
    config = AdapterConfig(
        input_path=src, output_path=tmp_path / "x.conllu", model="nosuch:en"
    )
    with pytest.raises(ParserUnavailableError, match="unknown parser engine"):
        text_to_conllu(config)


def test_cli_reports_parser_unavailable_or_succeeds(tmp_path):
    """In an environment without stanza the CLI must exit nonzero and
    print fetch instructions; with stanza installed it must succeed."""
    src = tmp_path / "x.txt"
    src.write_text(FIG3_TEXT + "\n")
    out = tmp_path / "x.conllu"
    proc = subprocess.run(
        [
            sys.executable, "-m", "conllu_adapter.cli",
            "--in", str(src), "--out", str(out), "--model", "stanza:en",
        ],
        capture_output=True,
        text=True,
    )
    if proc.returncode == 0:
        assert out.exists() and out.read_text().strip()
    else:
        assert proc.returncode == 1
        assert "pip install stanza" in proc.stderr


def test_cli_unknown_flag_exits_two(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "conllu_adapter.cli", "--bogus"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2


def _load_real_backend():
    reasons = []
    for model in ("stanza:en", "spacy:en_core_web_sm"):
        config = AdapterConfig(
            input_path=Path("unused"), output_path=Path("unused"), model=model
        )
        try:
            from conllu_adapter.adapter import resolve_backend

            return model, resolve_backend(config)
        except ParserUnavailableError as e:
            reasons.append(f"{model}: {e}")
    return None, "; ".join(reasons)


def test_acceptance_adapter_contract(tmp_path):
    """[SECONDARY] criterion: worked sentences through a real neural
    parser, accepted by the primary with zero validation warnings, with
    the expected cop/nsubj relations present."""
    model, backend = _load_real_backend()
    if model is None:
        print("[BLOCKED] AC-adapter: no neural parser backend in this environment")
        pytest.skip(
            "verified environment limitation: no neural UD parser installable "
            f"(mirror lacks stanza/spacy, no model downloads) -- {backend}"
        )
    src = tmp_path / "worked.txt"
    src.write_text(FIG1_TEXT + "\n" + FIG3_TEXT + "\n")
    out = tmp_path / "worked.conllu"
    result = text_to_conllu(
        AdapterConfig(input_path=src, output_path=out, model=model), backend=backend
    )
    assert result.n_sentences == 2

    proc, _ = run_igpipe_tag(out, tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "warning" not in proc.stderr.lower()

    fig1, fig3 = parse_conllu_blocks(out.read_text())
    assert fig3["employee"][1] == "nsubj"
    assert fig3["is"][1] == "cop"
    assert fig1["submit"] == (0, "root")
    assert fig1["may"][1] == "aux"
    print(f"[PASS] AC-adapter: contract satisfied with backend {model}")
