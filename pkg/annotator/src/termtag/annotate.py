"""Batch annotation of a dataset's textual columns.

Reads the schema to find textual columns, runs the configured model
backend and rule detectors over every cell, resolves overlaps
(longer span wins, ties to the rule detector), and emits one JSON
object per span in the annotations-JSONL format the anonymization
engine ingests: ``row_id`` (0-based data row), ``attribute``,
``start``/``end`` (Unicode code-point offsets into the cell),
``text`` (the covered substring), and ``label``.

Cell values are whitespace-trimmed before tagging, exactly like the
consumer's dataset loader, so offsets agree between the two tools.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .backends import NONE, build_recognizer
from .errors import ConfigError, InputError
from .rules import RULE_NAMES, rule_detect
from .spans import merge_spans


@dataclass(frozen=True)
class AnnotatorConfig:
    model: str = "lexicon"
    rules: tuple[str, ...] = RULE_NAMES
    columns: tuple[str, ...] | None = None
    batch_size: int = 64

    def __post_init__(self) -> None:
        unknown = [name for name in self.rules if name not in RULE_NAMES]
        if unknown:
            raise ConfigError(f"unknown rule detectors: {', '.join(sorted(unknown))}")
        if self.model == NONE and not self.rules:
            raise ConfigError("at least one span source (model or rules) must be enabled")
        if self.batch_size < 1:
            raise ConfigError(f"batch size must be at least 1, got {self.batch_size}")


def load_textual_columns(schema_path: str | Path) -> list[str]:
    path = Path(schema_path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"schema file {path} does not exist") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse schema {path}: {exc}") from None
    attributes = document.get("attributes")
    if not isinstance(attributes, list):
        raise InputError(f"schema {path} has no attribute list")
    textual = [
        entry.get("name")
        for entry in attributes
        if isinstance(entry, dict) and entry.get("kind") == "textual"
    ]
    if not textual or any(not isinstance(name, str) or not name for name in textual):
        raise InputError(f"schema {path} declares no usable textual attribute")
    return textual


def _read_rows(data_path: Path) -> tuple[list[str], list[list[str]]]:
    try:
        with data_path.open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise InputError(f"dataset file {data_path} is empty") from None
            rows = []
            for index, row in enumerate(reader):
                if len(row) != len(header):
                    raise InputError(
                        f"{data_path} row {index}: expected {len(header)} cells, "
                        f"got {len(row)}"
                    )
                rows.append([cell.strip() for cell in row])
    except FileNotFoundError:
        raise InputError(f"dataset file {data_path} does not exist") from None
    return header, rows


def annotate(
    data_path: str | Path, schema_path: str | Path, config: AnnotatorConfig
) -> list[dict]:
    """All detected spans of the dataset's textual cells, row-major."""
    textual = load_textual_columns(schema_path)
    requested = list(config.columns) if config.columns else textual
    for name in requested:
        if name not in textual:
            raise InputError(f"column {name!r} is not a textual attribute in the schema")

    header, rows = _read_rows(Path(data_path))
    missing = [name for name in requested if name not in header]
    if missing:
        raise InputError(f"column {missing[0]!r} missing from {data_path}")

    recognizer = build_recognizer(config.model)
    records: list[dict] = []
    for column in (name for name in header if name in requested):
        index = header.index(column)
        texts = [row[index] for row in rows]
        if recognizer is None:
            tagged = [[] for _ in texts]
        else:
            tagged = recognizer.tag_many(texts, config.batch_size)
        for row_id, text in enumerate(texts):
            if not text:
                continue
            candidates = list(tagged[row_id]) + rule_detect(text, config.rules)
            for span in merge_spans(candidates):
                records.append(
                    {
                        "row_id": row_id,
                        "attribute": column,
                        "start": span.start,
                        "end": span.end,
                        "text": span.text,
                        "label": span.label,
                    }
                )
    order = {name: position for position, name in enumerate(header)}
    records.sort(key=lambda r: (r["row_id"], order[r["attribute"]], r["start"]))
    return records


def write_annotations(records: list[dict], out_path: str | Path) -> None:
    lines = [json.dumps(record, ensure_ascii=False) for record in records]
    Path(out_path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
