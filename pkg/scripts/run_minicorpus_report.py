#!/usr/bin/env python3
"""End-to-end demo on the bundled mini-corpus.

Trains the statement-type classifier from data/train.csv, runs the full
report pipeline on data/minicorpus/, and prints the resulting metrics
table. Run from the repository root:

    python scripts/run_minicorpus_report.py [out_dir]
"""

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]

from igpipe.cli import PipelineConfig, _read_training_csv, run_pipeline
from igpipe.classifier import fit
from igpipe.hypergraph import GraphMode


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else REPO / "out" / "minicorpus"
    out_dir.mkdir(parents=True, exist_ok=True)

    model = fit(_read_training_csv(REPO / "data" / "train.csv"), k=70, seed=13)
    model_path = out_dir / "model.json"
    model.save(model_path)

    manifest = run_pipeline(
        PipelineConfig(
            inputs=(REPO / "data" / "minicorpus",),
            lexicon_path=REPO / "data" / "lexicon.csv",
            out_dir=out_dir,
            model_path=model_path,
            mode=GraphMode.ACTORS_AND_OBJECTS,
            seed=13,
        )
    )
    print(f"bundle written to {out_dir} ({manifest['n_statements']} statements)\n")
    print((out_dir / "metrics.csv").read_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
