"""Core data model: annotated terms, person records, recoded cells.

Terms are compared by (case-folded text, entity type); two annotations
with the same surface form and type are one term for retention and
metric purposes, regardless of where they occur.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class TermKey:
    """Identity of a sensitive term: case-folded text plus entity type."""

    text: str
    entity_type: str

    @staticmethod
    def of(text: str, entity_type: str) -> "TermKey":
        return TermKey(text.casefold(), entity_type)


@dataclass(frozen=True)
class SensitiveTerm:
    """One annotated occurrence of a sensitive term inside a text cell."""

    row_id: int
    attribute: str
    start: int
    end: int
    text: str
    entity_type: str
    redundant: bool = False

    @property
    def key(self) -> TermKey:
        return TermKey.of(self.text, self.entity_type)


@dataclass(frozen=True)
class AnnotationSet:
    """All term occurrences of a dataset, in (row_id, attribute, start) order."""

    terms: tuple[SensitiveTerm, ...]

    def for_cell(self, row_id: int, attribute: str) -> list[SensitiveTerm]:
        return [t for t in self.terms if t.row_id == row_id and t.attribute == attribute]

    @property
    def entity_types(self) -> tuple[str, ...]:
        return tuple(sorted({t.entity_type for t in self.terms}))


@dataclass(frozen=True)
class PersonRecord:
    """One row of the person-centric view D*.

    ``cells`` maps each quasi attribute to the sorted tuple of distinct
    parsed values found across the person's rows. ``terms`` is X', the
    union of the person's non-redundant (text, entity type) pairs.
    """

    pid: str
    tuple_ids: tuple[int, ...]
    cells: dict[str, tuple]
    terms: frozenset[TermKey]


@dataclass(frozen=True)
class SplitStep:
    """One edge of the partition tree lineage."""

    kind: str  # "relational" or "textual"
    subject: str  # attribute name, or "text/ENTITY_TYPE" for a term
    side: str  # "left" or "right"


@dataclass(frozen=True)
class Partition:
    members: tuple[PersonRecord, ...]
    lineage: tuple[SplitStep, ...] = ()

    def __len__(self) -> int:
        return len(self.members)

    @property
    def pids(self) -> tuple[str, ...]:
        return tuple(r.pid for r in self.members)


@dataclass(frozen=True)
class NumericRange:
    low: float
    high: float

    def render(self) -> str:
        return f"[{render_number(self.low)}-{render_number(self.high)}]"


@dataclass(frozen=True)
class CategorySet:
    """Two or more categorical values, rendered in descending sort order."""

    values: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(sorted(set(self.values), reverse=True)))

    def render(self) -> str:
        return "(" + ",".join(self.values) + ")"


@dataclass(frozen=True)
class DateNode:
    """A date cell generalized to a node of the date hierarchy."""

    level: str  # "day" | "month" | "year" | "year-range"
    label: str
    leaf_count: int

    def render(self) -> str:
        return self.label


@dataclass(frozen=True)
class Scalar:
    value: object

    def render(self) -> str:
        if isinstance(self.value, (int, float)):
            return render_number(self.value)
        return str(self.value)


RecodedCell = NumericRange | CategorySet | DateNode | Scalar


def render_number(value: float) -> str:
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value))
