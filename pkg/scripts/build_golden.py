#!/usr/bin/env python3
"""Produce the golden report bundle for the bundled mini-corpus.

The pipeline output is cross-checked against independent brute-force
oracles (hand-derived mention classes, Floyd-Warshall closeness) and
against hand-expected tag assignments before anything is frozen under
tests/golden/minicorpus/. Run from the repository root:

    python scripts/build_golden.py
"""

import csv
import io
import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "tests"))

import oracles  # noqa: E402

from igpipe.cli import PipelineConfig, run_pipeline  # noqa: E402
from igpipe.classifier import fit  # noqa: E402
from igpipe.cli import _read_training_csv  # noqa: E402
from igpipe.hypergraph import GraphMode  # noqa: E402

GOLDEN = REPO / "tests" / "golden" / "minicorpus"
BUNDLE_FILES = (
    "annotations.igjsonl",
    "hypergraph.graphml",
    "hypergraph.dot",
    "hypergraph.json",
    "isolated.csv",
    "metrics.csv",
    "ranks.csv",
    "histogram.csv",
    "scatter.json",
)

# hand-traced rule outputs for every mini-corpus statement
EXPECTED_TAGS = {
    "s1": {
        "Once": "Context", "a": ["Context", "DirectObject"], "year": "Context",
        ",": "Untagged", "each": "Attribute", "State": "Attribute",
        "Party": "Attribute", "may": "Deontic", "submit": "Aim",
        "request": "DirectObject", "for": "DirectObjectProp",
        "financial": "DirectObjectProp", "assistance": "DirectObjectProp",
        "to": "Untagged", "the": "IndirectObject", "Committee": "IndirectObject",
        "through": "Context", "an": "Context", "online": "Context",
        "form": "Context", ".": "Untagged",
    },
    "s4": {
        "the": "ConstitutedEntity", "employee": "ConstitutedEntity",
        "is": "ConstitutiveFunction", "unable": "ConstitutingProperties",
        "to": "Context", "work": "Context",
    },
}

EXPECTED_TYPES = {
    "s1": "regulative", "s2": "regulative", "s3": "regulative",
    "s4": "constitutive", "s5": "constitutive", "s6": "constitutive",
}

EXPECTED_HISTOGRAM = {
    "actors": {1: 2, 2: 1, 3: 1},
    "actors-objects": {1: 2, 3: 2, 4: 1},
}

ENTITY_KINDS = {
    "State Party": "actor", "Committee": "actor", "General Assembly": "actor",
    "Secretariat": "actor", "request": "object", "report": "object",
    "fund": "object",
}


def oracle_metrics_csv() -> str:
    vis = oracles.mini_visibility()
    clo = oracles.mini_closeness()
    rows = sorted(vis, key=lambda e: (-vis[e], e))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entity", "kind", "visibility", "closeness"])
    for e in rows:
        w.writerow([e, ENTITY_KINDS[e], f"{vis[e]:.2f}", f"{clo[e]:.2f}"])
    return buf.getvalue()


def oracle_ranks_csv() -> str:
    vis = oracles.mini_visibility()
    clo = oracles.mini_closeness()

    def dense(values):
        distinct = sorted(set(values.values()), reverse=True)
        return {k: distinct.index(v) + 1 for k, v in values.items()}

    vr, cr = dense(vis), dense(clo)
    ordered = sorted(vis, key=lambda e: (vr[e], e))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entity", "visibility_rank", "centrality_rank", "delta"])
    for e in ordered:
        w.writerow([e, vr[e], cr[e], vr[e] - cr[e]])
    return buf.getvalue()


def verify_annotations(path: Path) -> None:
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(records) == 6, "expected six statements"
    for rec in records:
        sid = rec["statement_id"]
        assert rec["type"] == EXPECTED_TYPES[sid], (sid, rec["type"])
        expected = EXPECTED_TAGS.get(sid)
        if not expected:
            continue
        for tok in rec["tokens"]:
            want = expected[tok["form"]]
            options = want if isinstance(want, list) else [want]
            assert tok["tag"] in options, (sid, tok, want)


def verify_against_oracles(bundle: Path) -> None:
    verify_annotations(bundle / "annotations.igjsonl")

    got_metrics = (bundle / "metrics.csv").read_text()
    want_metrics = oracle_metrics_csv()
    assert got_metrics == want_metrics, (
        f"metrics.csv disagrees with the oracle:\n{got_metrics}\nvs\n{want_metrics}"
    )
    got_ranks = (bundle / "ranks.csv").read_text()
    want_ranks = oracle_ranks_csv()
    assert got_ranks == want_ranks, f"ranks.csv:\n{got_ranks}\nvs\n{want_ranks}"

    hist_rows = list(csv.DictReader(io.StringIO((bundle / "histogram.csv").read_text())))
    got_hist: dict = {}
    for row in hist_rows:
        got_hist.setdefault(row["mode"], {})[int(row["size"])] = int(row["count"])
    assert got_hist == EXPECTED_HISTOGRAM, got_hist

    scatter = json.loads((bundle / "scatter.json").read_text())
    vis = oracles.mini_visibility()
    clo = oracles.mini_closeness()
    for point in scatter["points"]:
        e = point["entity"]
        assert point["visibility"] == vis[e], (e, point["visibility"], vis[e])
        assert point["centrality"] == clo[e], (e, point["centrality"], clo[e])

    isolated = (bundle / "isolated.csv").read_text().splitlines()
    assert isolated == ["entity,kind", "Director-General,actor"], isolated


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    model = fit(_read_training_csv(REPO / "data" / "train.csv"), k=70, seed=13)
    model.save(GOLDEN / "model.json")

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "bundle"
        run_pipeline(
            PipelineConfig(
                inputs=(REPO / "data" / "minicorpus",),
                lexicon_path=REPO / "data" / "lexicon.csv",
                out_dir=out,
                model_path=GOLDEN / "model.json",
                mode=GraphMode.ACTORS_AND_OBJECTS,
                seed=13,
            )
        )
        verify_against_oracles(out)
        for name in BUNDLE_FILES:
            shutil.copyfile(out / name, GOLDEN / name)
    print(f"golden bundle verified against oracles and written to {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
