"""Thin CLI: conllu-adapter --in text.txt --out doc.conllu --model stanza:en"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import backends  # noqa: F401  (registers the real backends)
from .adapter import AdapterConfig, AdapterError, ParserUnavailableError, text_to_conllu


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conllu-adapter",
        description="Parse one-statement-per-line text into CoNLL-U",
    )
    p.add_argument("--in", dest="infile", required=True, help="UTF-8 text input")
    p.add_argument("--out", dest="outfile", required=True, help=".conllu output path")
    p.add_argument(
        "--model",
        default="stanza",
        help="parser model identifier, e.g. stanza:en or spacy:en_core_web_sm",
    )
    p.add_argument("--language", default="en", help="language code (default en)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = AdapterConfig(
        input_path=Path(args.infile),
        output_path=Path(args.outfile),
        model=args.model,
        language=args.language,
    )
    try:
        result = text_to_conllu(config)
    except ParserUnavailableError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (AdapterError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"wrote {result.n_sentences} sentences to {args.outfile}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
