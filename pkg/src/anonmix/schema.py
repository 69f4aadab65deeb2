"""Column schema: attribute roles, entity-type links, and validation.

A schema declares, for every column of the input file, whether it is the
direct identifier, a quasi-identifier (numeric, categorical, or date), a
free-text column, or insensitive. Quasi attributes may carry an
``entity_type`` that links them to term annotations of the same type so
duplicated information can be detected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import SchemaError

DEFAULT_DATE_FORMAT = "YYYY-MM-DD"

_DATE_TOKENS = [("YYYY", "%Y"), ("MM", "%m"), ("DD", "%d")]


class AttributeKind(str, Enum):
    DIRECT_IDENTIFIER = "direct-identifier"
    QUASI_NUMERIC = "quasi-numeric"
    QUASI_CATEGORICAL = "quasi-categorical"
    QUASI_DATE = "quasi-date"
    TEXTUAL = "textual"
    INSENSITIVE = "insensitive"

    @property
    def is_quasi(self) -> bool:
        return self in (
            AttributeKind.QUASI_NUMERIC,
            AttributeKind.QUASI_CATEGORICAL,
            AttributeKind.QUASI_DATE,
        )


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: AttributeKind
    entity_type: str | None = None


@dataclass(frozen=True)
class Schema:
    """Ordered attribute declarations plus the date parse pattern."""

    attributes: tuple[Attribute, ...]
    date_format: str = DEFAULT_DATE_FORMAT

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(self.attributes))

    @property
    def direct_identifier(self) -> Attribute:
        direct = [a for a in self.attributes if a.kind is AttributeKind.DIRECT_IDENTIFIER]
        if len(direct) != 1:
            raise SchemaError(f"schema has {len(direct)} direct identifiers, expected exactly 1")
        return direct[0]

    @property
    def quasi_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if a.kind.is_quasi)

    @property
    def textual_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if a.kind is AttributeKind.TEXTUAL)

    def attribute(self, name: str) -> Attribute:
        for a in self.attributes:
            if a.name == name:
                return a
        raise SchemaError(f"unknown attribute {name!r}")

    def attribute_for_entity_type(self, entity_type: str) -> Attribute | None:
        """The quasi attribute linked to *entity_type*, if any."""
        for a in self.attributes:
            if a.kind.is_quasi and a.entity_type == entity_type:
                return a
        return None

    def strptime_format(self) -> str:
        """Translate the YYYY/MM/DD-style pattern to a strptime format."""
        fmt = self.date_format
        for token, directive in _DATE_TOKENS:
            fmt = fmt.replace(token, directive)
        if "%" not in fmt:
            raise SchemaError(f"date_format {self.date_format!r} contains no date tokens")
        return fmt


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def validate_schema(schema: Schema, header: list[str]) -> ValidationReport:
    """Check schema invariants against a dataset header.

    The report lists every violation found; it is empty iff the schema
    names exactly the header columns and all structural invariants hold.
    """
    report = ValidationReport()

    names = [a.name for a in schema.attributes]
    seen: set[str] = set()
    for name in names:
        if name in seen:
            report.add(f"duplicate attribute {name!r}")
        seen.add(name)

    direct = [a.name for a in schema.attributes if a.kind is AttributeKind.DIRECT_IDENTIFIER]
    if not direct:
        report.add("no direct identifier attribute")
    elif len(direct) > 1:
        report.add("multiple direct identifiers: " + ", ".join(repr(n) for n in direct))

    if not any(a.kind is AttributeKind.TEXTUAL for a in schema.attributes):
        report.add("no textual attribute")

    typed: dict[str, str] = {}
    for a in schema.attributes:
        if a.entity_type is None:
            continue
        if not a.kind.is_quasi:
            report.add(f"entity_type on non-quasi attribute {a.name!r} ({a.kind.value})")
        elif a.entity_type in typed:
            report.add(
                f"entity_type {a.entity_type!r} mapped by both "
                f"{typed[a.entity_type]!r} and {a.name!r}"
            )
        else:
            typed[a.entity_type] = a.name

    header_set = set(header)
    for name in names:
        if name not in header_set:
            report.add(f"attribute {name!r} missing from dataset header")
    for column in header:
        if column not in seen:
            report.add(f"dataset column {column!r} not declared in schema")

    return report


def schema_to_dict(schema: Schema) -> dict:
    attributes = []
    for a in schema.attributes:
        entry: dict = {"name": a.name, "kind": a.kind.value}
        if a.entity_type is not None:
            entry["entity_type"] = a.entity_type
        attributes.append(entry)
    return {"attributes": attributes, "date_format": schema.date_format}


def schema_from_dict(data: dict) -> Schema:
    if not isinstance(data, dict) or "attributes" not in data:
        raise SchemaError("schema document must be an object with an 'attributes' array")
    attributes = []
    for entry in data["attributes"]:
        try:
            kind = AttributeKind(entry["kind"])
        except (KeyError, ValueError):
            raise SchemaError(f"attribute entry {entry!r} has a missing or unknown kind")
        if "name" not in entry:
            raise SchemaError(f"attribute entry {entry!r} has no name")
        attributes.append(Attribute(entry["name"], kind, entry.get("entity_type")))
    return Schema(tuple(attributes), data.get("date_format", DEFAULT_DATE_FORMAT))


def load_schema(path: str | Path) -> Schema:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema file {path}: invalid JSON ({exc})") from exc
    return schema_from_dict(data)


def save_schema(schema: Schema, path: str | Path) -> None:
    Path(path).write_text(json.dumps(schema_to_dict(schema), indent=2) + "\n", encoding="utf-8")
