"""Verification of a published release against the original inputs.

Reconstructs equivalence classes from the release alone (no
re-partitioning): for every person the released quasi renderings and
the set of terms still visible in the texts form a signature; persons
sharing a signature form a class, which is then audited for size and
retained-term soundness, and scored with the usual loss metrics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .audit import AuditResult, audit_classes
from .context import GlobalContext, build_context
from .errors import DatasetError
from .ingest import Dataset, build_person_view, detect_redundant, filter_annotations
from .metrics import LossReport, NcpWeights, ncp_dataset
from .records import (
    AnnotationSet,
    CategorySet,
    NumericRange,
    Partition,
    PersonRecord,
    RecodedCell,
    Scalar,
    SensitiveTerm,
    TermKey,
)
from .recode import EquivalenceClass
from .schema import AttributeKind


@dataclass
class EvalResult:
    audit: AuditResult
    report: LossReport
    classes: list[EquivalenceClass]


def _parse_numeric(text: str) -> tuple[float, float] | None:
    try:
        value = float(text)
        return value, value
    except ValueError:
        pass
    if not (text.startswith("[") and text.endswith("]")):
        return None
    body = text[1:-1]
    for index in range(1, len(body)):
        if body[index] != "-":
            continue
        try:
            return float(body[:index]), float(body[index + 1 :])
        except ValueError:
            continue
    return None


def _parse_categorical(text: str) -> tuple[str, ...]:
    if text.startswith("(") and text.endswith(")"):
        return tuple(text[1:-1].split(","))
    return (text,)


def _numeric_cell(text: str) -> RecodedCell | None:
    bounds = _parse_numeric(text)
    if bounds is None:
        return None
    low, high = bounds
    return Scalar(low) if low == high else NumericRange(low, high)


def _categorical_cell(text: str) -> RecodedCell:
    values = _parse_categorical(text)
    return Scalar(values[0]) if len(values) == 1 else CategorySet(values)


def _date_covers(node, value, leaf_format: str) -> bool:
    if node.level == "day":
        return value.strftime(leaf_format) == node.label
    if node.level == "month":
        return f"{value.year:04d}-{value.month:02d}" == node.label
    if node.level == "year":
        return f"{value.year:04d}" == node.label
    match = re.fullmatch(r"\[(\d+)-(\d+)\]", node.label)
    return bool(match) and int(match.group(1)) <= value.year <= int(match.group(2))


def _segment_pattern(text: str, spans: list[SensitiveTerm], constrained: bool) -> re.Pattern:
    """Match a rewritten text cell against its original span layout.

    In constrained form every non-redundant span may only become the
    original term or a placeholder variant, which pins the segmentation
    even when a neighbouring replacement contains the separator text.
    The lazy form accepts anything per span and serves to locate blame
    once the constrained match has failed.
    """
    parts = []
    cursor = 0
    for span in spans:
        parts.append(re.escape(text[cursor : span.start]))
        if constrained and not span.redundant:
            options = [span.text] + sorted(_placeholder_variants(span.entity_type) - {span.text})
            parts.append("(" + "|".join(re.escape(o) for o in options) + ")")
        else:
            parts.append("(.*?)")
        cursor = span.end
    parts.append(re.escape(text[cursor:]))
    return re.compile("".join(parts), re.DOTALL)


def _placeholder_variants(entity_type: str) -> set[str]:
    token = entity_type.lower()
    return {token, token[0].upper() + token[1:]}


def evaluate_release(
    dataset: Dataset,
    annotations: AnnotationSet,
    release_header: tuple[str, ...],
    release_rows: list[list[str]],
    k: int,
    weights: NcpWeights | None = None,
    entity_types: frozenset[str] | None = None,
    drop_direct_id: bool = False,
) -> EvalResult:
    """Audit a release and recompute its loss without re-partitioning."""
    weights = weights or NcpWeights()
    schema = dataset.schema
    if tuple(release_header) != dataset.header:
        raise DatasetError("release header does not match the dataset header")
    if len(release_rows) != len(dataset):
        raise DatasetError(
            f"release has {len(release_rows)} rows, dataset has {len(dataset)}"
        )

    annotations = filter_annotations(annotations, entity_types)
    annotations = detect_redundant(dataset, annotations)
    records = build_person_view(dataset, annotations)
    ctx = build_context(schema, records)
    by_pid = {record.pid: record for record in records}

    direct = schema.direct_identifier.name
    id_column = dataset.header.index(direct)
    violations: list[str] = []

    spans_of: dict[tuple[int, str], list[SensitiveTerm]] = {}
    for term in annotations.terms:
        spans_of.setdefault((term.row_id, term.attribute), []).append(term)

    rendered_of: dict[str, dict[str, str]] = {}
    shown_of: dict[str, dict[TermKey, set[bool]]] = {}

    for row_id, (original, released) in enumerate(zip(dataset.rows, release_rows)):
        if len(released) != len(dataset.header):
            raise DatasetError(f"release row {row_id}: wrong cell count")
        pid = original[id_column]
        shown = shown_of.setdefault(pid, {})
        for column, (old, new) in zip(dataset.header, zip(original, released)):
            attribute = schema.attribute(column)
            new = new.strip()
            if attribute.kind is AttributeKind.DIRECT_IDENTIFIER:
                expected = "" if drop_direct_id else old
                if new != expected:
                    violations.append(
                        f"row {row_id}: direct identifier changed from {expected!r} to {new!r}"
                    )
            elif attribute.kind.is_quasi:
                seen = rendered_of.setdefault(pid, {})
                if column in seen and seen[column] != new:
                    violations.append(
                        f"person {pid}: column {column!r} rendered both "
                        f"{seen[column]!r} and {new!r}"
                    )
                seen[column] = new
            elif attribute.kind is AttributeKind.TEXTUAL:
                spans = sorted(spans_of.get((row_id, column), []), key=lambda t: t.start)
                match = _segment_pattern(old, spans, constrained=True).fullmatch(new)
                if match is None:
                    match = _segment_pattern(old, spans, constrained=False).fullmatch(new)
                if match is None:
                    violations.append(
                        f"row {row_id}: text in column {column!r} was altered outside "
                        f"annotated spans"
                    )
                    continue
                for span, captured in zip(spans, match.groups()):
                    if span.redundant:
                        continue
                    if captured == span.text:
                        shown.setdefault(span.key, set()).add(True)
                    elif captured in _placeholder_variants(span.entity_type):
                        shown.setdefault(span.key, set()).add(False)
                    else:
                        violations.append(
                            f"row {row_id}: span {span.text!r} became {captured!r}, "
                            f"neither the original term nor its placeholder"
                        )
            else:
                if new != old:
                    violations.append(
                        f"row {row_id}: insensitive column {column!r} was altered"
                    )

    cells_of: dict[str, dict[str, RecodedCell]] = {}
    for record in records:
        rendered = rendered_of.get(record.pid, {})
        cells: dict[str, RecodedCell] = {}
        for attribute in schema.quasi_attributes:
            text = rendered.get(attribute.name, "")
            cell = _reconstruct_cell(text, attribute, ctx)
            if cell is None:
                violations.append(
                    f"person {record.pid}: cannot parse released cell {text!r} "
                    f"for column {attribute.name!r}"
                )
                cell = Scalar(text)
            elif not _covers(cell, record.cells[attribute.name], attribute, ctx):
                violations.append(
                    f"person {record.pid}: released cell {text!r} does not cover the "
                    f"original values of column {attribute.name!r}"
                )
            cells[attribute.name] = cell
        cells_of[record.pid] = cells

    retained_of: dict[str, frozenset[TermKey]] = {}
    for record in records:
        shown = shown_of.get(record.pid, {})
        keys = set()
        for key, states in shown.items():
            if len(states) > 1:
                violations.append(
                    f"person {record.pid}: term {key.text}/{key.entity_type} is shown "
                    f"in one occurrence and hidden in another"
                )
            if True in states:
                keys.add(key)
        retained_of[record.pid] = frozenset(keys)

    groups: dict[tuple, list[PersonRecord]] = {}
    for record in records:
        signature = (
            tuple(sorted((n, c.render()) for n, c in cells_of[record.pid].items())),
            tuple(sorted(retained_of[record.pid])),
        )
        groups.setdefault(signature, []).append(record)

    classes: list[EquivalenceClass] = []
    for signature in sorted(groups):
        members = groups[signature]
        retained = retained_of[members[0].pid]
        union: set[TermKey] = set()
        for record in members:
            union |= record.terms
        classes.append(
            EquivalenceClass(
                partition=Partition(tuple(members)),
                cells=cells_of[members[0].pid],
                retained=retained,
                suppressed=frozenset(union - retained),
            )
        )

    audit = audit_classes(classes, k)
    audit = AuditResult(
        k=k,
        group_sizes=audit.group_sizes,
        violations=tuple(violations) + audit.violations,
    )
    report = ncp_dataset(
        classes,
        weights,
        ctx,
        k=k,
        lam=None,
        strategy="evaluate",
        entity_types=annotations.entity_types,
    )
    return EvalResult(audit=audit, report=report, classes=classes)


def _reconstruct_cell(text: str, attribute, ctx: GlobalContext) -> RecodedCell | None:
    if attribute.kind is AttributeKind.QUASI_NUMERIC:
        return _numeric_cell(text)
    if attribute.kind is AttributeKind.QUASI_DATE:
        try:
            return ctx.hierarchies[attribute.name].node_for_label(text)
        except DatasetError:
            return None
    return _categorical_cell(text)


def _covers(cell: RecodedCell, values: tuple, attribute, ctx: GlobalContext) -> bool:
    if attribute.kind is AttributeKind.QUASI_NUMERIC:
        if isinstance(cell, Scalar):
            return all(v == cell.value for v in values)
        return all(cell.low <= v <= cell.high for v in values)
    if attribute.kind is AttributeKind.QUASI_DATE:
        fmt = ctx.hierarchies[attribute.name].leaf_format
        return all(_date_covers(cell, v, fmt) for v in values)
    if isinstance(cell, Scalar):
        return all(v == cell.value for v in values)
    return set(values) <= set(cell.values)
