"""Loading and validation of datasets and term annotations.

Builds the person-centric view: rows grouped by the direct identifier,
quasi cells aggregated as sets, and sensitive terms unioned per person
after redundant occurrences (terms duplicating a linked relational
cell) have been flagged.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path

from .errors import AnnotationError, DatasetError
from .records import AnnotationSet, PersonRecord, SensitiveTerm, TermKey
from .schema import AttributeKind, Schema, validate_schema

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


@dataclass(frozen=True)
class Dataset:
    """Flattened input table plus parsed quasi-cell caches."""

    schema: Schema
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    parsed: dict[str, tuple]  # quasi attribute name -> per-row parsed values

    def __len__(self) -> int:
        return len(self.rows)

    def cell(self, row_id: int, attribute: str) -> str:
        return self.rows[row_id][self.header.index(attribute)]

    def parsed_cell(self, row_id: int, attribute: str):
        return self.parsed[attribute][row_id]


def _parse_quasi(schema: Schema, attribute, raw: str, row_id: int):
    if attribute.kind is AttributeKind.QUASI_NUMERIC:
        try:
            return float(raw)
        except ValueError:
            raise DatasetError(
                f"row {row_id}, column {attribute.name!r}: "
                f"cannot parse {raw!r} as a number"
            ) from None
    if attribute.kind is AttributeKind.QUASI_DATE:
        try:
            return datetime.strptime(raw, schema.strptime_format()).date()
        except ValueError:
            raise DatasetError(
                f"row {row_id}, column {attribute.name!r}: "
                f"cannot parse {raw!r} as a {schema.date_format} date"
            ) from None
    return raw


def _build_dataset(schema: Schema, header: list[str], raw_rows: list[list[str]]) -> Dataset:
    report = validate_schema(schema, header)
    if not report.ok:
        raise DatasetError("schema/header mismatch: " + "; ".join(report.violations))

    direct = schema.direct_identifier.name
    rows: list[tuple[str, ...]] = []
    for row_id, raw in enumerate(raw_rows):
        if len(raw) != len(header):
            raise DatasetError(
                f"row {row_id}: expected {len(header)} cells, found {len(raw)}"
            )
        rows.append(tuple(cell.strip() for cell in raw))

    parsed: dict[str, list] = {}
    by_name = {name: i for i, name in enumerate(header)}
    for attribute in schema.attributes:
        if attribute.kind is AttributeKind.DIRECT_IDENTIFIER:
            for row_id, row in enumerate(rows):
                if row[by_name[direct]] == "":
                    raise DatasetError(f"row {row_id}: empty direct identifier cell")
        if not attribute.kind.is_quasi:
            continue
        column = by_name[attribute.name]
        values = []
        for row_id, row in enumerate(rows):
            raw = row[column]
            if raw == "":
                raise DatasetError(
                    f"row {row_id}: empty quasi cell in column {attribute.name!r}"
                )
            values.append(_parse_quasi(schema, attribute, raw, row_id))
        parsed[attribute.name] = values

    return Dataset(
        schema=schema,
        header=tuple(header),
        rows=tuple(rows),
        parsed={name: tuple(values) for name, values in parsed.items()},
    )


def load_dataset(path: str | Path, schema: Schema) -> Dataset:
    """Load a UTF-8 CSV whose header names exactly the schema attributes."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"dataset file {path} is empty (no header)") from None
        raw_rows = list(reader)
    return _build_dataset(schema, header, raw_rows)


def load_joined(person_path: str | Path, events_path: str | Path, schema: Schema) -> Dataset:
    """Join a person table and an event table on the direct identifier.

    Both files are CSV with headers; together their columns must equal
    the schema attributes, and both must contain the direct identifier.
    The join preserves event-file row order.
    """
    direct = schema.direct_identifier.name

    def read(path: str | Path) -> tuple[list[str], list[list[str]]]:
        with Path(path).open(newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise DatasetError(f"file {path} is empty (no header)") from None
            return header, list(reader)

    person_header, person_rows = read(person_path)
    event_header, event_rows = read(events_path)
    for name, header in ((str(person_path), person_header), (str(events_path), event_header)):
        if direct not in header:
            raise DatasetError(f"file {name} lacks the direct identifier column {direct!r}")

    persons: dict[str, list[str]] = {}
    for row in person_rows:
        pid = row[person_header.index(direct)].strip()
        if pid in persons:
            raise DatasetError(f"duplicate person row for {direct}={pid!r}")
        persons[pid] = row

    header = list(person_header) + [c for c in event_header if c != direct]
    rows = []
    for row_id, row in enumerate(event_rows):
        pid = row[event_header.index(direct)].strip()
        if pid not in persons:
            raise DatasetError(f"event row {row_id}: no person row for {direct}={pid!r}")
        merged = list(persons[pid])
        merged += [cell for i, cell in enumerate(row) if event_header[i] != direct]
        rows.append(merged)
    return _build_dataset(schema, header, rows)


def load_annotations(path: str | Path, dataset: Dataset) -> AnnotationSet:
    """Load JSON-lines term annotations and validate them against the dataset.

    Each line is an object {"row_id", "attribute", "start", "end",
    "text", "label"}; offsets are Unicode scalar-value indices into the
    referenced cell.
    """
    path = Path(path)
    if not path.exists():
        raise AnnotationError(f"annotations file not found: {path}")
    textual = {a.name for a in dataset.schema.textual_attributes}
    terms: list[SensitiveTerm] = []
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AnnotationError(f"line {line_no}: invalid JSON ({exc})") from exc
            try:
                term = SensitiveTerm(
                    row_id=int(obj["row_id"]),
                    attribute=str(obj["attribute"]),
                    start=int(obj["start"]),
                    end=int(obj["end"]),
                    text=str(obj["text"]),
                    entity_type=str(obj["label"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise AnnotationError(f"line {line_no}: malformed annotation ({exc})") from exc
            _check_term(term, dataset, textual, line_no)
            terms.append(term)

    terms.sort(key=lambda t: (t.row_id, t.attribute, t.start, t.end))
    for prev, cur in zip(terms, terms[1:]):
        if (
            prev.row_id == cur.row_id
            and prev.attribute == cur.attribute
            and cur.start < prev.end
        ):
            raise AnnotationError(
                f"overlapping spans in row {cur.row_id}, column {cur.attribute!r}: "
                f"[{prev.start},{prev.end}) and [{cur.start},{cur.end})"
            )
    return AnnotationSet(tuple(terms))


def _check_term(term: SensitiveTerm, dataset: Dataset, textual: set[str], line_no: int) -> None:
    if not 0 <= term.row_id < len(dataset):
        raise AnnotationError(f"line {line_no}: row_id {term.row_id} out of range")
    if term.attribute not in textual:
        raise AnnotationError(
            f"line {line_no}: attribute {term.attribute!r} is not a textual attribute"
        )
    cell = dataset.cell(term.row_id, term.attribute)
    if term.start >= term.end:
        raise AnnotationError(
            f"line {line_no}: empty span [{term.start},{term.end})"
        )
    if term.start < 0 or term.end > len(cell):
        raise AnnotationError(
            f"line {line_no}: span [{term.start},{term.end}) outside cell of length {len(cell)}"
        )
    if cell[term.start : term.end] != term.text:
        raise AnnotationError(
            f"line {line_no}: span text {term.text!r} does not match cell substring "
            f"{cell[term.start:term.end]!r}"
        )


def filter_annotations(annotations: AnnotationSet, entity_types: set[str] | None) -> AnnotationSet:
    """Keep only terms of the given entity types; None keeps everything."""
    if entity_types is None:
        return annotations
    return AnnotationSet(tuple(t for t in annotations.terms if t.entity_type in entity_types))


def _tokens(text: str) -> set[str]:
    return {t for t in _TOKEN_SPLIT.split(text.strip().casefold()) if t}


def term_matches_value(term_text: str, cell_text: str) -> bool:
    """True when a term and a relational cell express the same value.

    Case-insensitive after trimming; matches on equality or when either
    string contains the other as a whole token ("36 years old" matches
    "36"; "2004" matches "2004-01-19").
    """
    term = term_text.strip().casefold()
    value = cell_text.strip().casefold()
    if not term or not value:
        return False
    if term == value:
        return True
    return value in _tokens(term_text) or term in _tokens(cell_text)


def detect_redundant(dataset: Dataset, annotations: AnnotationSet) -> AnnotationSet:
    """Flag terms that duplicate the linked relational cell of their row."""
    flagged = []
    for term in annotations.terms:
        attribute = dataset.schema.attribute_for_entity_type(term.entity_type)
        redundant = attribute is not None and term_matches_value(
            term.text, dataset.cell(term.row_id, attribute.name)
        )
        flagged.append(replace(term, redundant=redundant) if redundant else term)
    return AnnotationSet(tuple(flagged))


def build_person_view(dataset: Dataset, annotations: AnnotationSet) -> list[PersonRecord]:
    """Group rows by the direct identifier into one record per person.

    Quasi cells aggregate as sorted tuples of distinct values; X' is the
    union of non-redundant (text, entity type) pairs over the person's
    rows. Output follows first appearance of each person.
    """
    direct = dataset.schema.direct_identifier.name
    id_column = dataset.header.index(direct)
    order: list[str] = []
    rows_of: dict[str, list[int]] = {}
    for row_id, row in enumerate(dataset.rows):
        pid = row[id_column]
        if pid not in rows_of:
            order.append(pid)
            rows_of[pid] = []
        rows_of[pid].append(row_id)

    terms_of: dict[int, set[TermKey]] = {}
    for term in annotations.terms:
        if not term.redundant:
            terms_of.setdefault(term.row_id, set()).add(term.key)

    records = []
    for pid in order:
        tuple_ids = tuple(rows_of[pid])
        cells = {
            attribute.name: tuple(
                sorted({dataset.parsed_cell(row_id, attribute.name) for row_id in tuple_ids})
            )
            for attribute in dataset.schema.quasi_attributes
        }
        terms: set[TermKey] = set()
        for row_id in tuple_ids:
            terms |= terms_of.get(row_id, set())
        records.append(
            PersonRecord(pid=pid, tuple_ids=tuple_ids, cells=cells, terms=frozenset(terms))
        )
    return records
