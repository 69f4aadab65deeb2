"""Global dataset statistics used by partitioning and loss metrics.

All figures are computed once over the person-centric view: numeric and
date extents, categorical domain sizes, the date hierarchies, and the
global sensitive-term vocabulary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dgh import DateHierarchy
from .records import PersonRecord, TermKey
from .schema import AttributeKind, Schema


@dataclass(frozen=True)
class GlobalContext:
    schema: Schema
    numeric_bounds: dict[str, tuple[float, float]]  # quasi-numeric: (min, max)
    date_bounds: dict[str, tuple]  # quasi-date: (min, max) as dates
    category_domains: dict[str, tuple[str, ...]]  # quasi-categorical: sorted values
    hierarchies: dict[str, DateHierarchy]  # quasi-date: auto-built DGH
    term_vocabulary: frozenset[TermKey]

    def numeric_width(self, attribute: str) -> float:
        low, high = self.numeric_bounds[attribute]
        return high - low

    def date_width_days(self, attribute: str) -> int:
        low, high = self.date_bounds[attribute]
        return (high - low).days

    def domain_size(self, attribute: str) -> int:
        return len(self.category_domains[attribute])


def build_context(schema: Schema, records: list[PersonRecord]) -> GlobalContext:
    numeric_bounds: dict[str, tuple[float, float]] = {}
    date_bounds: dict[str, tuple] = {}
    category_domains: dict[str, tuple[str, ...]] = {}
    hierarchies: dict[str, DateHierarchy] = {}

    for attribute in schema.quasi_attributes:
        values = [v for r in records for v in r.cells[attribute.name]]
        if not values:
            continue
        if attribute.kind is AttributeKind.QUASI_NUMERIC:
            numeric_bounds[attribute.name] = (min(values), max(values))
        elif attribute.kind is AttributeKind.QUASI_DATE:
            date_bounds[attribute.name] = (min(values), max(values))
            hierarchies[attribute.name] = DateHierarchy(
                tuple(values), schema.strptime_format()
            )
        else:
            category_domains[attribute.name] = tuple(sorted(set(values)))

    vocabulary = frozenset(key for r in records for key in r.terms)
    return GlobalContext(
        schema=schema,
        numeric_bounds=numeric_bounds,
        date_bounds=date_bounds,
        category_domains=category_domains,
        hierarchies=hierarchies,
        term_vocabulary=vocabulary,
    )
