"""Recoding of partitions into equivalence classes and release rows.

Relational cells generalize to ranges, value sets, or date-hierarchy
nodes; terms present in every member's X' are retained in the texts,
all other term occurrences are rewritten (redundant ones to the recoded
cell of their linked attribute, the rest to an entity-type placeholder).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .context import GlobalContext
from .ingest import Dataset
from .records import (
    AnnotationSet,
    CategorySet,
    DateNode,
    NumericRange,
    Partition,
    RecodedCell,
    Scalar,
    SensitiveTerm,
    TermKey,
)
from .schema import AttributeKind

_SENTENCE_ENDS = (".", "!", "?")


@dataclass(frozen=True)
class EquivalenceClass:
    partition: Partition
    cells: dict[str, RecodedCell]  # per quasi attribute
    retained: frozenset[TermKey]
    suppressed: frozenset[TermKey]

    @property
    def pids(self) -> tuple[str, ...]:
        return self.partition.pids

    def rendered_cells(self) -> dict[str, str]:
        return {name: cell.render() for name, cell in self.cells.items()}


def recode_numeric(values) -> RecodedCell:
    distinct = sorted(set(values))
    if len(distinct) == 1:
        return Scalar(distinct[0])
    return NumericRange(distinct[0], distinct[-1])


def recode_categorical(values) -> RecodedCell:
    distinct = sorted(set(values))
    if len(distinct) == 1:
        return Scalar(distinct[0])
    return CategorySet(tuple(distinct))


def recode_date(values, hierarchy) -> DateNode:
    return hierarchy.generalize(values)


def decide_term_retention(partition: Partition) -> tuple[frozenset[TermKey], frozenset[TermKey]]:
    """Terms present in every member stay; all others are suppressed."""
    members = partition.members
    union: set[TermKey] = set()
    retained = set(members[0].terms) if members else set()
    for record in members:
        union |= record.terms
        retained &= record.terms
    return frozenset(retained), frozenset(union - retained)


def build_class(partition: Partition, ctx: GlobalContext) -> EquivalenceClass:
    cells: dict[str, RecodedCell] = {}
    for attribute in ctx.schema.quasi_attributes:
        values = [v for r in partition.members for v in r.cells[attribute.name]]
        if attribute.kind is AttributeKind.QUASI_NUMERIC:
            cells[attribute.name] = recode_numeric(values)
        elif attribute.kind is AttributeKind.QUASI_DATE:
            cells[attribute.name] = recode_date(values, ctx.hierarchies[attribute.name])
        else:
            cells[attribute.name] = recode_categorical(values)
    retained, suppressed = decide_term_retention(partition)
    return EquivalenceClass(partition, cells, retained, suppressed)


def _placeholder(entity_type: str, text_before: str) -> str:
    token = entity_type.lower()
    stripped = text_before.rstrip()
    if not stripped or stripped.endswith(_SENTENCE_ENDS):
        return token[0].upper() + token[1:]
    return token


def _redundant_replacement(term: SensitiveTerm, cell_value: str, rendered: str) -> str:
    """Rewrite one redundant occurrence with the recoded cell rendering.

    When the term merely contains the cell value as a token ("36 years
    old" vs "36"), only that token is replaced; when the rendering
    differs from the original span by letter case alone, the original
    casing is kept.
    """
    if term.text.strip().casefold() != cell_value.strip().casefold():
        replaced = _replace_token(term.text, cell_value, rendered)
        if replaced is not None:
            return replaced
    if rendered.casefold() == term.text.casefold():
        return term.text
    return rendered


def _replace_token(span_text: str, value: str, rendered: str) -> str | None:
    """Replace the whole-token occurrence of value inside span_text."""
    pattern = re.compile(re.escape(value.strip()), re.IGNORECASE)
    for match in pattern.finditer(span_text):
        before = span_text[: match.start()]
        after = span_text[match.end() :]
        if (not before or not before[-1].isalnum()) and (not after or not after[0].isalnum()):
            return before + rendered + after
    return None


def rewrite_text(
    text: str,
    spans: list[SensitiveTerm],
    cls: EquivalenceClass,
    dataset: Dataset,
) -> str:
    """Rewrite one text cell; characters outside spans are untouched."""
    result = text
    for term in sorted(spans, key=lambda t: t.start, reverse=True):
        if term.redundant:
            attribute = dataset.schema.attribute_for_entity_type(term.entity_type)
            cell_value = dataset.cell(term.row_id, attribute.name)
            replacement = _redundant_replacement(
                term, cell_value, cls.cells[attribute.name].render()
            )
        elif term.key in cls.retained:
            replacement = term.text
        else:
            replacement = _placeholder(term.entity_type, result[: term.start])
        result = result[: term.start] + replacement + result[term.end :]
    return result


def expand_release(
    classes: list[EquivalenceClass],
    dataset: Dataset,
    annotations: AnnotationSet,
    drop_direct_id: bool = False,
) -> tuple[tuple[str, ...], list[list[str]]]:
    """One release row per input row, original order and column layout.

    The direct identifier passes through unchanged unless dropped, in
    which case its cells are emptied (the header is preserved).
    """
    schema = dataset.schema
    class_of: dict[str, EquivalenceClass] = {}
    for cls in classes:
        for pid in cls.pids:
            class_of[pid] = cls

    direct = schema.direct_identifier.name
    spans_of: dict[tuple[int, str], list[SensitiveTerm]] = {}
    for term in annotations.terms:
        spans_of.setdefault((term.row_id, term.attribute), []).append(term)

    rows: list[list[str]] = []
    for row_id, row in enumerate(dataset.rows):
        pid = row[dataset.header.index(direct)]
        cls = class_of.get(pid)
        out: list[str] = []
        for column, value in zip(dataset.header, row):
            attribute = schema.attribute(column)
            if attribute.kind is AttributeKind.DIRECT_IDENTIFIER:
                out.append("" if drop_direct_id else value)
            elif attribute.kind.is_quasi:
                out.append(cls.cells[column].render())
            elif attribute.kind is AttributeKind.TEXTUAL:
                spans = spans_of.get((row_id, column), [])
                out.append(rewrite_text(value, spans, cls, dataset))
            else:
                out.append(value)
        rows.append(out)
    return dataset.header, rows
