"""Automatically generated date generalization hierarchy.

Four levels: exact dates (leaves), year-month, year, and a root range
spanning all years present in the data. Generalizing a set of dates
returns the deepest node covering every value, together with the number
of distinct dataset dates below that node (used by the loss metrics).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from .errors import DatasetError
from .records import DateNode


@dataclass(frozen=True)
class DateHierarchy:
    leaves: tuple[date, ...]  # sorted distinct dates of the dataset
    leaf_format: str  # strftime pattern for rendering leaf labels

    def __post_init__(self) -> None:
        if not self.leaves:
            raise DatasetError("date hierarchy needs at least one date")
        object.__setattr__(self, "leaves", tuple(sorted(set(self.leaves))))

    @property
    def total_leaves(self) -> int:
        return len(self.leaves)

    def month_leaf_count(self, year: int, month: int) -> int:
        return sum(1 for d in self.leaves if d.year == year and d.month == month)

    def year_leaf_count(self, year: int) -> int:
        return sum(1 for d in self.leaves if d.year == year)

    def root_label(self) -> str:
        return f"[{self.leaves[0].year}-{self.leaves[-1].year}]"

    def generalize(self, values) -> DateNode:
        """Deepest hierarchy node covering all the given dates."""
        distinct = sorted(set(values))
        if not distinct:
            raise DatasetError("cannot generalize an empty date set")
        known = set(self.leaves)
        for value in distinct:
            if value not in known:
                raise DatasetError(f"date {value.isoformat()} is not a hierarchy leaf")
        first, last = distinct[0], distinct[-1]
        if first == last:
            return DateNode("day", first.strftime(self.leaf_format), 1)
        if (first.year, first.month) == (last.year, last.month):
            return DateNode(
                "month",
                f"{first.year:04d}-{first.month:02d}",
                self.month_leaf_count(first.year, first.month),
            )
        if first.year == last.year:
            return DateNode("year", f"{first.year:04d}", self.year_leaf_count(first.year))
        return DateNode("year-range", self.root_label(), self.total_leaves)

    def node_for_label(self, label: str) -> DateNode:
        """Reconstruct the node a rendered label refers to."""
        if label == self.root_label():
            return DateNode("year-range", label, self.total_leaves)
        parts = label.split("-")
        if len(parts) == 1 and label.isdigit():
            return DateNode("year", label, self.year_leaf_count(int(label)))
        if len(parts) == 2 and all(p.isdigit() for p in parts):
            return DateNode("month", label, self.month_leaf_count(int(parts[0]), int(parts[1])))
        for leaf in self.leaves:
            if leaf.strftime(self.leaf_format) == label:
                return DateNode("day", label, 1)
        raise DatasetError(f"label {label!r} names no node of the date hierarchy")
