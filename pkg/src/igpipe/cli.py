"""Command-line pipeline: documents -> classification -> tagging ->
mentions -> hypergraph -> metrics -> report bundle.

Subcommands re-run individual stages from each other's outputs; `report`
chains everything and writes a byte-deterministic bundle plus a manifest
(only the manifest timestamp varies between identical runs).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import shutil
import sys
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .classifier import (
    ClassifierModel,
    DEFAULT_FEATURE_COUNT,
    StatementType,
    fit,
    predict,
)
from .conllu import Document, parse_conllu, statement_from_text
from .errors import IGPipeError, PipelineError
from .evaluation import evaluate_tagger
from .exports import (
    dot_two_section,
    graphml_bipartite,
    histogram_csv,
    incidence_json,
    isolated_csv,
    metrics_csv,
    ranks_csv,
    scatter_json,
)
from .hypergraph import GraphMode, build_hypergraph, edge_size_histogram
from .lexicon import EntityLexicon, load_lexicon
from .mentions import extract_all_mentions
from .metrics import metrics_table, rank_comparison, two_section
from .tagger import (
    AnnotationRecord,
    read_annotations,
    tag_statement,
    write_annotations,
)

CONFIG_FILENAME = "igpipe.json"
LOG_LEVEL_ENV = "IGPIPE_LOG_LEVEL"
_CONFIG_KEYS = ("model", "lexicon", "mode", "seed", "k", "type")

log = logging.getLogger("igpipe")


@dataclass(frozen=True)
class PipelineConfig:
    inputs: tuple[Path, ...]
    lexicon_path: Path
    out_dir: Path
    model_path: Path | None = None
    mode: GraphMode = GraphMode.ACTORS_AND_OBJECTS
    seed: int = 0
    type_override: StatementType | None = None

    def to_json_obj(self) -> dict:
        return {
            "inputs": [str(p) for p in self.inputs],
            "lexicon": str(self.lexicon_path),
            "model": str(self.model_path) if self.model_path else None,
            "mode": self.mode.value,
            "seed": self.seed,
            "type": self.type_override.value if self.type_override else None,
        }


def _collect_conllu(paths: tuple[Path, ...]) -> list[Path]:
    files: list[Path] = []
    for p in paths:
        if not p.exists():
            raise PipelineError("ingest", f"input path does not exist: {p}")
        if p.is_dir():
            files.extend(sorted(p.glob("*.conllu")))
        elif p.suffix == ".conllu":
            files.append(p)
    return files


def _parse_documents(files: list[Path]) -> list[Document]:
    docs = []
    for f in files:
        try:
            docs.append(parse_conllu(f.read_text(encoding="utf-8"), doc_id=f.stem))
        except IGPipeError as e:
            raise PipelineError("parse", f"{f}: {e}") from e
    return docs


def _annotate_documents(
    docs: list[Document],
    model: ClassifierModel | None,
    type_override: StatementType | None,
    lexicon: EntityLexicon | None,
) -> list[AnnotationRecord]:
    records = []
    for doc in docs:
        for stmt in doc.statements:
            if type_override is not None:
                stype = type_override
            else:
                if model is None:
                    raise PipelineError(
                        "classify",
                        "no classifier model given and no --type override",
                        statement=stmt.statement_id,
                    )
                stype, _ = predict(model, stmt)
            try:
                records.append(tag_statement(stmt, stype, lexicon).record)
            except IGPipeError as e:
                raise PipelineError(
                    "tag", str(e), statement=f"{doc.doc_id}/{stmt.statement_id}"
                ) from e
    return records


def run_pipeline(config: PipelineConfig) -> dict:
    """Run the whole pipeline; returns the manifest. Outputs are staged
    and moved into place only when every stage succeeded."""
    files = _collect_conllu(config.inputs)
    if not files:
        raise PipelineError(
            "ingest",
            f"no .conllu inputs (searched: {', '.join(str(p) for p in config.inputs)})",
        )
    docs = _parse_documents(files)
    for doc in docs:
        for w in doc.warnings:
            log.warning("%s: %s", doc.doc_id, w)

    try:
        lexicon = load_lexicon(config.lexicon_path)
    except (IGPipeError, OSError) as e:
        raise PipelineError("lexicon", str(e)) from e
    model = None
    if config.type_override is None:
        if config.model_path is None:
            raise PipelineError("classify", "a model (or --type) is required")
        try:
            model = ClassifierModel.load(config.model_path)
        except (IGPipeError, OSError) as e:
            raise PipelineError("classify", f"cannot load model: {e}") from e

    records = _annotate_documents(docs, model, config.type_override, lexicon)
    n_statements = len(records)

    try:
        mentions = extract_all_mentions(records, lexicon)
        graphs = {
            mode: build_hypergraph(mentions, mode, lexicon) for mode in GraphMode
        }
        h = graphs[config.mode]
        rows = metrics_table(h, mentions, n_statements, lexicon)
        ranks = rank_comparison(rows) if rows else []
        histograms = {mode: edge_size_histogram(g) for mode, g in graphs.items()}
    except IGPipeError as e:
        raise PipelineError("metrics", str(e)) from e

    artifacts = {
        "annotations.igjsonl": None,  # written via write_annotations below
        "hypergraph.graphml": graphml_bipartite(h, lexicon),
        "hypergraph.dot": dot_two_section(two_section(h), lexicon),
        "hypergraph.json": incidence_json(h, lexicon),
        "isolated.csv": isolated_csv(lexicon, h),
        "metrics.csv": metrics_csv(rows),
        "ranks.csv": ranks_csv(ranks),
        "histogram.csv": histogram_csv(histograms),
        "scatter.json": scatter_json(rows, config.mode),
    }

    config_obj = config.to_json_obj()
    manifest = {
        "bundle": sorted([*artifacts.keys(), "manifest.json"]),
        "config": config_obj,
        "config_hash": hashlib.sha256(
            json.dumps(config_obj, sort_keys=True).encode()
        ).hexdigest(),
        "created_at": datetime.now(timezone.utc).isoformat(),
        "inputs": [
            {"path": str(f), "sha256": hashlib.sha256(f.read_bytes()).hexdigest()}
            for f in files
        ],
        "n_documents": len(docs),
        "n_statements": n_statements,
        "seed": config.seed,
        "versions": {"igpipe": __version__, "python": sys.version.split()[0]},
    }

    out_dir = config.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out_dir))
    try:
        write_annotations(records, staging / "annotations.igjsonl")
        for name, content in artifacts.items():
            if content is not None:
                (staging / name).write_text(content, encoding="utf-8", newline="\n")
        with open(staging / "manifest.json", "w", encoding="utf-8", newline="\n") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        for name in [*artifacts.keys(), "manifest.json"]:
            (staging / name).replace(out_dir / name)
    except Exception:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    staging.rmdir()
    return manifest


# --- subcommand handlers ----------------------------------------------------


def _read_training_csv(path: Path):
    corpus = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        required = {"statement_id", "text", "label"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise IGPipeError(
                f"training CSV needs columns statement_id,text,label "
                f"(got {reader.fieldnames})"
            )
        for i, row in enumerate(reader, start=2):
            try:
                label = StatementType(row["label"].strip().lower())
            except ValueError:
                raise IGPipeError(
                    f"{path}:{i}: label must be regulative or constitutive, "
                    f"got {row['label']!r}"
                ) from None
            corpus.append(
                (statement_from_text(row["text"], row["statement_id"]), label)
            )
    return corpus


def _cmd_classify_train(args) -> int:
    corpus = _read_training_csv(Path(args.data))
    model = fit(corpus, k=args.k, seed=args.seed)
    model.save(args.out)
    print(
        f"trained on {len(corpus)} statements, "
        f"k={model.feature_space.k}, wrote {args.out}"
    )
    return 0


def _cmd_classify_predict(args) -> int:
    model = ClassifierModel.load(args.model)
    doc = parse_conllu(
        Path(args.infile).read_text(encoding="utf-8"), doc_id=Path(args.infile).stem
    )
    out = Path(args.out) if args.out else None
    rows = []
    for stmt in doc.statements:
        label, score = predict(model, stmt)
        rows.append([doc.doc_id, stmt.statement_id, label.value, f"{score:.6f}"])
    buf = [",".join(["doc_id", "statement_id", "label", "score"])]
    buf += [",".join(r) for r in rows]
    text = "\n".join(buf) + "\n"
    if out:
        out.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def _resolve_type(value) -> StatementType | None:
    if value in (None, ""):
        return None
    return StatementType(value)


def _cmd_tag(args) -> int:
    src = Path(args.infile)
    doc = parse_conllu(src.read_text(encoding="utf-8"), doc_id=src.stem)
    for w in doc.warnings:
        log.warning("%s: %s", doc.doc_id, w)
    type_override = _resolve_type(args.type)
    model = None
    if type_override is None:
        if not args.model:
            raise IGPipeError("tag needs --model or --type")
        model = ClassifierModel.load(args.model)
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    records = _annotate_documents([doc], model, type_override, lexicon)
    write_annotations(records, args.out)
    print(f"tagged {len(records)} statements, wrote {args.out}")
    return 0


def _cmd_eval(args) -> int:
    pred = read_annotations(args.pred)
    gold = read_annotations(args.gold)
    report = evaluate_tagger(pred, gold)
    text = report.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def _load_graph_inputs(args):
    records = read_annotations(args.infile)
    lexicon = load_lexicon(args.lexicon)
    mode = GraphMode(args.mode)
    mentions = extract_all_mentions(records, lexicon)
    return records, lexicon, mode, mentions


def _cmd_graph(args) -> int:
    _, lexicon, mode, mentions = _load_graph_inputs(args)
    h = build_hypergraph(mentions, mode, lexicon)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "hypergraph.graphml").write_text(
        graphml_bipartite(h, lexicon), encoding="utf-8", newline="\n"
    )
    (out_dir / "hypergraph.dot").write_text(
        dot_two_section(two_section(h), lexicon), encoding="utf-8", newline="\n"
    )
    (out_dir / "hypergraph.json").write_text(
        incidence_json(h, lexicon), encoding="utf-8", newline="\n"
    )
    (out_dir / "isolated.csv").write_text(
        isolated_csv(lexicon, h), encoding="utf-8", newline="\n"
    )
    print(
        f"{len(h.vertices)} vertices, {len(h.edges)} hyperedges "
        f"({mode.value}), wrote {out_dir}"
    )
    return 0


def _cmd_metrics(args) -> int:
    records, lexicon, mode, mentions = _load_graph_inputs(args)
    n_statements = len(records)
    graphs = {m: build_hypergraph(mentions, m, lexicon) for m in GraphMode}
    h = graphs[mode]
    rows = metrics_table(h, mentions, n_statements, lexicon)
    ranks = rank_comparison(rows) if rows else []
    histograms = {m: edge_size_histogram(g) for m, g in graphs.items()}
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "metrics.csv").write_text(metrics_csv(rows), encoding="utf-8", newline="\n")
    (out_dir / "ranks.csv").write_text(ranks_csv(ranks), encoding="utf-8", newline="\n")
    (out_dir / "histogram.csv").write_text(
        histogram_csv(histograms), encoding="utf-8", newline="\n"
    )
    (out_dir / "scatter.json").write_text(
        scatter_json(rows, mode), encoding="utf-8", newline="\n"
    )
    print(f"{len(rows)} entities, wrote {out_dir}")
    return 0


def _cmd_report(args) -> int:
    config = PipelineConfig(
        inputs=tuple(Path(p) for p in args.inputs),
        lexicon_path=Path(args.lexicon),
        out_dir=Path(args.out or "report"),
        model_path=Path(args.model) if args.model else None,
        mode=GraphMode(args.mode),
        seed=args.seed,
        type_override=_resolve_type(args.type),
    )
    manifest = run_pipeline(config)
    print(
        f"report bundle in {config.out_dir} "
        f"({manifest['n_statements']} statements, mode {config.mode.value})"
    )
    return 0


# --- parser -----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, out_default=None):
    p.add_argument("--seed", type=int, default=None, help="deterministic seed")
    p.add_argument("--out", default=out_default, help="output file or directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="igpipe",
        description="Institutional-grammar annotation and policy-network metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", help="statement-type classifier")
    csub = classify.add_subparsers(dest="subcommand", required=True)
    train = csub.add_parser("train", help="fit a model from a labeled CSV")
    train.add_argument("--data", required=True, help="CSV: statement_id,text,label")
    train.add_argument("--k", type=int, default=None, help="selected n-gram count")
    _add_common(train, out_default="model.json")
    train.set_defaults(handler=_cmd_classify_train)
    pred = csub.add_parser("predict", help="label statements in a CoNLL-U file")
    pred.add_argument("--model", required=True)
    pred.add_argument("--in", dest="infile", required=True)
    _add_common(pred)
    pred.set_defaults(handler=_cmd_classify_predict)

    tag = sub.add_parser("tag", help="annotate statements with IG components")
    tag.add_argument("--model", default=None)
    tag.add_argument("--in", dest="infile", required=True)
    tag.add_argument(
        "--type",
        choices=[t.value for t in StatementType],
        default=None,
        help="force a statement type instead of classifying",
    )
    tag.add_argument("--lexicon", default=None, help="actor lexicon CSV (optional)")
    _add_common(tag, out_default="annotations.igjsonl")
    tag.set_defaults(handler=_cmd_tag)

    ev = sub.add_parser("eval", help="score predictions against gold annotations")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--gold", required=True)
    _add_common(ev)
    ev.set_defaults(handler=_cmd_eval)

    graph = sub.add_parser("graph", help="build the entity hypergraph")
    graph.add_argument("--in", dest="infile", required=True)
    graph.add_argument("--lexicon", default=None)
    graph.add_argument(
        "--mode", choices=[m.value for m in GraphMode], default=None
    )
    _add_common(graph, out_default=".")
    graph.set_defaults(handler=_cmd_graph)

    met = sub.add_parser("metrics", help="visibility and centrality tables")
    met.add_argument("--in", dest="infile", required=True)
    met.add_argument("--lexicon", default=None)
    met.add_argument("--mode", choices=[m.value for m in GraphMode], default=None)
    _add_common(met, out_default=".")
    met.set_defaults(handler=_cmd_metrics)

    rep = sub.add_parser("report", help="run the whole pipeline")
    rep.add_argument(
        "--in", dest="inputs", nargs="+", required=True,
        help=".conllu files or directories",
    )
    rep.add_argument("--model", default=None)
    rep.add_argument("--lexicon", default=None)
    rep.add_argument("--mode", choices=[m.value for m in GraphMode], default=None)
    rep.add_argument(
        "--type",
        choices=[t.value for t in StatementType],
        default=None,
        help="skip classification, treat every statement as this type",
    )
    _add_common(rep, out_default="report")
    rep.set_defaults(handler=_cmd_report)
    return parser


def _apply_config_defaults(args: argparse.Namespace) -> None:
    config_path = Path.cwd() / CONFIG_FILENAME
    if not config_path.exists():
        defaults = {}
    else:
        try:
            defaults = json.loads(config_path.read_text(encoding="utf-8"))
        except ValueError as e:
            raise IGPipeError(f"invalid {CONFIG_FILENAME}: {e}") from e
    for key in _CONFIG_KEYS:
        if getattr(args, key, None) is None and key in defaults:
            setattr(args, key, defaults[key])
    if getattr(args, "seed", None) is None:
        args.seed = 0
    if getattr(args, "k", None) is None and hasattr(args, "k"):
        args.k = DEFAULT_FEATURE_COUNT
    if getattr(args, "mode", None) is None and hasattr(args, "mode"):
        args.mode = GraphMode.ACTORS_AND_OBJECTS.value
    if hasattr(args, "lexicon") and args.lexicon is None and args.command in (
        "graph",
        "metrics",
        "report",
    ):
        raise IGPipeError(f"--lexicon is required (flag or {CONFIG_FILENAME})")


def main(argv=None) -> int:
    # the only environment knob: log verbosity (IGPIPE_LOG_LEVEL)
    logging.basicConfig(
        stream=sys.stderr,
        format="%(levelname)s: %(message)s",
        level=os.environ.get(LOG_LEVEL_ENV, "WARNING").upper(),
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_defaults(args)
        return args.handler(args)
    except (IGPipeError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
