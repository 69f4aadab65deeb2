"""Command-line front end.

Three subcommands: ``anonymize`` runs one configuration and writes the
release plus reports, ``sweep`` runs a k/lambda/strategy grid into one
CSV, and ``evaluate`` audits an existing release. Exit codes: 0 on
success, 2 on any validation error, 3 when the k-anonymity audit fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import AnonmixError
from .evaluate import evaluate_release
from .ingest import load_annotations, load_dataset
from .metrics import NcpWeights
from .pipeline import GDF, MONDRIAN, STRATEGIES, RunConfig, RunResult, run
from .schema import load_schema

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_AUDIT = 3


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--schema", required=True, help="schema JSON file")
    parser.add_argument("--data", required=True, help="dataset CSV file")
    parser.add_argument("--annotations", required=True, help="term annotations JSONL file")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--entities", default=None,
                        help="comma-separated entity types to treat as sensitive")
    parser.add_argument("--wa", type=float, default=1.0,
                        help="weight of the relational loss component")
    parser.add_argument("--wx", type=float, default=1.0,
                        help="weight of the textual loss component")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anonmix",
        description="k-anonymization of datasets with relational and free-text attributes",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    anonymize = commands.add_parser("anonymize", help="anonymize one dataset")
    _add_io_flags(anonymize)
    anonymize.add_argument("--out", required=True, help="output directory")
    anonymize.add_argument("--k", type=int, required=True, help="anonymity parameter")
    anonymize.add_argument("--lambda", dest="lam", type=float, default=0.5,
                           help="relational/textual split weight in [0,1]")
    anonymize.add_argument("--strategy", choices=STRATEGIES, default=MONDRIAN)
    anonymize.add_argument("--drop-direct-id", action="store_true",
                           help="blank the direct identifier in the release")
    _add_run_flags(anonymize)

    sweep = commands.add_parser("sweep", help="run a k/lambda/strategy grid")
    _add_io_flags(sweep)
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--k-list", required=True,
                       help="comma-separated k values, e.g. 2,3,5")
    sweep.add_argument("--lambda-list", default="",
                       help="comma-separated lambda values for mondrian cells")
    sweep.add_argument("--strategy", default=MONDRIAN,
                       help="comma-separated strategies (mondrian, gdf)")
    sweep.add_argument("--drop-direct-id", action="store_true", help=argparse.SUPPRESS)
    _add_run_flags(sweep)

    evaluate = commands.add_parser("evaluate", help="audit an existing release")
    _add_io_flags(evaluate)
    evaluate.add_argument("--release", required=True, help="release CSV to audit")
    evaluate.add_argument("--k", type=int, required=True, help="anonymity parameter to verify")
    evaluate.add_argument("--out", default=None, help="optional directory for the loss report")
    evaluate.add_argument("--drop-direct-id", action="store_true",
                          help="the release was written with a blanked direct identifier")
    _add_run_flags(evaluate)
    return parser


def _entity_filter(raw: str | None) -> frozenset[str] | None:
    if raw is None:
        return None
    return frozenset(part.strip() for part in raw.split(",") if part.strip())


def _parse_list(raw: str, convert, flag: str) -> list:
    values = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(convert(part))
        except ValueError:
            raise AnonmixError(f"{flag}: cannot parse {part!r}") from None
    return values


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _class_report(result: RunResult) -> list[dict]:
    report = []
    for cls in result.classes:
        report.append(
            {
                "members": list(cls.pids),
                "cells": cls.rendered_cells(),
                "retained_terms": [
                    f"{key.text}/{key.entity_type}" for key in sorted(cls.retained)
                ],
                "suppressed_term_count": len(cls.suppressed),
            }
        )
    return report


def _write_run_artifacts(result: RunResult, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "release.csv", result.header, result.rows)
    _write_json(out / "classes.json", _class_report(result))
    _write_json(out / "loss.json", result.report.to_dict())
    _write_csv(out / "loss.csv", result.report.csv_columns(), [result.report.csv_row()])
    _write_json(out / "partition_tree.json", result.tree.to_dict())


def cmd_anonymize(args: argparse.Namespace) -> int:
    schema = load_schema(args.schema)
    dataset = load_dataset(args.data, schema)
    annotations = load_annotations(args.annotations, dataset)
    config = RunConfig(
        k=args.k,
        lam=args.lam,
        strategy=args.strategy,
        weights=NcpWeights(args.wa, args.wx),
        entity_types=_entity_filter(args.entities),
        drop_direct_id=args.drop_direct_id,
        jobs=args.jobs,
    )
    result = run(dataset, annotations, config)
    _write_run_artifacts(result, Path(args.out))
    print(result.audit.verdict())
    return EXIT_OK if result.audit.ok else EXIT_AUDIT


def _sweep_cell(payload: tuple) -> tuple[list[str], list[str]]:
    schema_path, data_path, annotations_path, config = payload
    schema = load_schema(schema_path)
    dataset = load_dataset(data_path, schema)
    annotations = load_annotations(annotations_path, dataset)
    result = run(dataset, annotations, config)
    return result.report.csv_columns(), result.report.csv_row()


def _cell_config(args: argparse.Namespace, k: int, lam: float | None) -> RunConfig:
    return RunConfig(
        k=k,
        lam=0.5 if lam is None else lam,
        strategy=GDF if lam is None else MONDRIAN,
        weights=NcpWeights(args.wa, args.wx),
        entity_types=_entity_filter(args.entities),
        jobs=1,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    k_values = _parse_list(args.k_list, int, "--k-list")
    lambdas = _parse_list(args.lambda_list, float, "--lambda-list")
    strategies = [s.strip() for s in args.strategy.split(",") if s.strip()]
    if not k_values:
        raise AnonmixError("--k-list: no values given")
    for strategy in strategies:
        if strategy not in STRATEGIES:
            raise AnonmixError(f"--strategy: unknown strategy {strategy!r}")

    cells: list[RunConfig] = []
    for k in sorted(k_values):
        if GDF in strategies:
            cells.append(_cell_config(args, k, None))
        if MONDRIAN in strategies:
            for lam in sorted(lambdas):
                cells.append(_cell_config(args, k, lam))

    payloads = [(args.schema, args.data, args.annotations, config) for config in cells]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_cell, payloads))
    else:
        results = [_sweep_cell(payload) for payload in payloads]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = results[0][0] if results else []
    _write_csv(out / "sweep.csv", header, [row for _, row in results])
    print(f"wrote {len(results)} sweep rows to {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    schema = load_schema(args.schema)
    dataset = load_dataset(args.data, schema)
    annotations = load_annotations(args.annotations, dataset)
    with Path(args.release).open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise AnonmixError(f"release file {args.release} is empty") from None
        rows = [list(row) for row in reader]
    result = evaluate_release(
        dataset,
        annotations,
        header,
        rows,
        k=args.k,
        weights=NcpWeights(args.wa, args.wx),
        entity_types=_entity_filter(args.entities),
        drop_direct_id=args.drop_direct_id,
    )
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "evaluation.json", result.report.to_dict())
    print(result.audit.verdict())
    return EXIT_OK if result.audit.ok else EXIT_AUDIT


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"anonymize": cmd_anonymize, "sweep": cmd_sweep, "evaluate": cmd_evaluate}
    try:
        return handlers[args.command](args)
    except AnonmixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
