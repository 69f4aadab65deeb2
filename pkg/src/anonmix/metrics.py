"""Information-loss scores and partition statistics.

The per-record loss is a weighted mean of a relational component (mean
per-attribute certainty penalty) and a textual component (share of the
record's terms that were suppressed); the dataset score averages over
person records. All components lie in [0,1].
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .context import GlobalContext
from .errors import ConfigError
from .records import (
    CategorySet,
    DateNode,
    NumericRange,
    PersonRecord,
    RecodedCell,
    Scalar,
)
from .recode import EquivalenceClass
from .schema import AttributeKind


@dataclass(frozen=True)
class NcpWeights:
    relational: float = 1.0
    textual: float = 1.0

    def __post_init__(self) -> None:
        if self.relational < 0 or self.textual < 0 or self.relational + self.textual <= 0:
            raise ConfigError(
                f"weights must be non-negative with a positive sum, "
                f"got ({self.relational}, {self.textual})"
            )


@dataclass
class LossReport:
    k: int
    lam: float | None
    strategy: str
    ncp_total: float
    ncp_relational: float
    ncp_textual: float
    per_attribute: dict[str, float]
    per_entity_type: dict[str, float]
    partitions: int
    mean_size: float
    std_size: float
    relational_splits: int | None = None
    textual_splits: int | None = None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lambda": self.lam,
            "strategy": self.strategy,
            "ncp_total": self.ncp_total,
            "ncp_relational": self.ncp_relational,
            "ncp_textual": self.ncp_textual,
            "per_attribute": dict(sorted(self.per_attribute.items())),
            "per_entity_type": dict(sorted(self.per_entity_type.items())),
            "partitions": self.partitions,
            "mean_size": self.mean_size,
            "std_size": self.std_size,
            "relational_splits": self.relational_splits,
            "textual_splits": self.textual_splits,
        }

    def csv_columns(self) -> list[str]:
        fixed = [
            "k",
            "lambda",
            "strategy",
            "ncp_total",
            "ncp_relational",
            "ncp_textual",
            "partitions",
            "mean_size",
            "std_size",
            "relational_splits",
            "textual_splits",
        ]
        return fixed + [f"ncp_{name}" for name in sorted(self.per_entity_type)]

    def csv_row(self) -> list[str]:
        def show(value) -> str:
            if value is None:
                return ""
            if isinstance(value, float):
                return repr(value)
            return str(value)

        row = [
            show(self.k),
            show(self.lam),
            show(self.strategy),
            show(self.ncp_total),
            show(self.ncp_relational),
            show(self.ncp_textual),
            show(self.partitions),
            show(self.mean_size),
            show(self.std_size),
            show(self.relational_splits),
            show(self.textual_splits),
        ]
        return row + [show(self.per_entity_type[name]) for name in sorted(self.per_entity_type)]


def ncp_num(cell: RecodedCell, width: float) -> float:
    if isinstance(cell, Scalar):
        return 0.0
    assert isinstance(cell, NumericRange)
    return (cell.high - cell.low) / width if width else 0.0


def ncp_cat(cell: RecodedCell, domain_size: int) -> float:
    if isinstance(cell, Scalar):
        return 0.0
    if isinstance(cell, DateNode):
        size = cell.leaf_count
    else:
        assert isinstance(cell, CategorySet)
        size = len(cell.values)
    if size == 1:
        return 0.0
    return size / domain_size


def ncp_attribute(cell: RecodedCell, attribute, ctx: GlobalContext) -> float:
    if attribute.kind is AttributeKind.QUASI_NUMERIC:
        return ncp_num(cell, ctx.numeric_width(attribute.name))
    if attribute.kind is AttributeKind.QUASI_DATE:
        return ncp_cat(cell, ctx.hierarchies[attribute.name].total_leaves)
    return ncp_cat(cell, ctx.domain_size(attribute.name))


def ncp_record_relational(cls: EquivalenceClass, ctx: GlobalContext) -> float:
    attributes = ctx.schema.quasi_attributes
    if not attributes:
        return 0.0
    total = math.fsum(ncp_attribute(cls.cells[a.name], a, ctx) for a in attributes)
    return total / len(attributes)


def ncp_record_textual(record: PersonRecord, cls: EquivalenceClass) -> float:
    if not record.terms:
        return 0.0
    suppressed = sum(1 for key in record.terms if key not in cls.retained)
    return suppressed / len(record.terms)


def ncp_record(
    record: PersonRecord, cls: EquivalenceClass, weights: NcpWeights, ctx: GlobalContext
) -> float:
    relational = ncp_record_relational(cls, ctx)
    textual = ncp_record_textual(record, cls)
    return (weights.relational * relational + weights.textual * textual) / (
        weights.relational + weights.textual
    )


def partition_stats(sizes: list[int]) -> tuple[int, float, float]:
    """Count, mean size, and population standard deviation of sizes."""
    if not sizes:
        return 0, 0.0, 0.0
    return len(sizes), statistics.fmean(sizes), statistics.pstdev(sizes)


def ncp_dataset(
    classes: list[EquivalenceClass],
    weights: NcpWeights,
    ctx: GlobalContext,
    *,
    k: int,
    lam: float | None,
    strategy: str,
    entity_types: tuple[str, ...] = (),
    relational_splits: int | None = None,
    textual_splits: int | None = None,
) -> LossReport:
    """Aggregate loss over all person records, in their D* order.

    Per-entity-type loss is occurrence weighted: suppressed (record,
    term) instances of that type over all instances of that type.
    """
    records: list[tuple[PersonRecord, EquivalenceClass]] = []
    for cls in classes:
        for record in cls.partition.members:
            records.append((record, cls))
    records.sort(key=lambda pair: pair[0].tuple_ids[0] if pair[0].tuple_ids else 0)

    count = len(records)
    totals = [ncp_record(r, c, weights, ctx) for r, c in records]
    relational = [ncp_record_relational(c, ctx) for _, c in records]
    textual = [ncp_record_textual(r, c) for r, c in records]

    per_attribute: dict[str, float] = {}
    for attribute in ctx.schema.quasi_attributes:
        values = [ncp_attribute(c.cells[attribute.name], attribute, ctx) for _, c in records]
        per_attribute[attribute.name] = math.fsum(values) / count if count else 0.0

    occurrences: dict[str, int] = {name: 0 for name in entity_types}
    suppressed: dict[str, int] = {name: 0 for name in entity_types}
    for record, cls in records:
        for key in sorted(record.terms):
            occurrences[key.entity_type] = occurrences.get(key.entity_type, 0) + 1
            if key not in cls.retained:
                suppressed[key.entity_type] = suppressed.get(key.entity_type, 0) + 1
    per_entity_type = {
        name: (suppressed.get(name, 0) / occurrences[name] if occurrences[name] else 0.0)
        for name in occurrences
    }

    sizes = [len(cls.partition) for cls in classes]
    partitions, mean_size, std_size = partition_stats(sizes)

    return LossReport(
        k=k,
        lam=lam,
        strategy=strategy,
        ncp_total=math.fsum(totals) / count if count else 0.0,
        ncp_relational=math.fsum(relational) / count if count else 0.0,
        ncp_textual=math.fsum(textual) / count if count else 0.0,
        per_attribute=per_attribute,
        per_entity_type=per_entity_type,
        partitions=partitions,
        mean_size=mean_size,
        std_size=std_size,
        relational_splits=relational_splits,
        textual_splits=textual_splits,
    )
