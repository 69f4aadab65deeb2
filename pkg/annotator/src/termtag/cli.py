"""Command-line front end: tag a dataset, write annotations JSONL.

Exit codes: 0 on success, 2 on any validation error (bad inputs,
unknown model or rules, unavailable backend).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .annotate import AnnotatorConfig, annotate, write_annotations
from .errors import TermtagError
from .rules import RULE_NAMES

EXIT_OK = 0
EXIT_VALIDATION = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annotate",
        description="tag sensitive terms in a dataset's textual columns",
    )
    parser.add_argument("--data", required=True, help="dataset CSV file")
    parser.add_argument("--schema", required=True,
                        help="schema JSON file; textual columns are read from it")
    parser.add_argument("--out", required=True, help="output annotations JSONL file")
    parser.add_argument("--model", default="lexicon",
                        help="'lexicon' (built-in), 'none', or 'spacy:NAME'")
    parser.add_argument("--rules", default=",".join(RULE_NAMES),
                        help="comma-separated rule detectors; empty string disables them")
    parser.add_argument("--columns", default=None,
                        help="textual columns to tag (default: all from the schema)")
    parser.add_argument("--batch-size", type=int, default=64,
                        help="backend batch size")
    return parser


def _parse_names(raw: str | None) -> tuple[str, ...] | None:
    if raw is None:
        return None
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = AnnotatorConfig(
            model=args.model,
            rules=_parse_names(args.rules) or (),
            columns=_parse_names(args.columns),
            batch_size=args.batch_size,
        )
        records = annotate(args.data, args.schema, config)
        write_annotations(records, Path(args.out))
    except TermtagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"wrote {len(records)} spans to {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
