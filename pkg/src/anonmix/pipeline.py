"""End-to-end anonymization runs: ingest, partition, recode, audit, score."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .audit import AuditResult, audit_classes
from .context import GlobalContext, build_context
from .errors import ConfigError
from .ingest import Dataset, build_person_view, detect_redundant, filter_annotations
from .metrics import LossReport, NcpWeights, ncp_dataset
from .partition import SplitStats, TreeNode, gdf_partition, mondrian_partition
from .records import AnnotationSet, Partition, PersonRecord
from .recode import EquivalenceClass, build_class, expand_release

MONDRIAN = "mondrian"
GDF = "gdf"
STRATEGIES = (MONDRIAN, GDF)


@dataclass(frozen=True)
class RunConfig:
    k: int
    lam: float = 0.5
    strategy: str = MONDRIAN
    weights: NcpWeights = field(default_factory=NcpWeights)
    entity_types: frozenset[str] | None = None
    drop_direct_id: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError(f"lambda must lie in [0,1], got {self.lam}")
        if self.entity_types is not None and not self.entity_types:
            raise ConfigError("entity filter must name at least one entity type")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")


@dataclass
class RunResult:
    config: RunConfig
    records: list[PersonRecord]
    context: GlobalContext
    partitions: list[Partition]
    stats: SplitStats
    tree: TreeNode
    classes: list[EquivalenceClass]
    audit: AuditResult
    header: tuple[str, ...]
    rows: list[list[str]]
    report: LossReport
    annotations: AnnotationSet


def _build_classes(
    partitions: list[Partition], ctx: GlobalContext, jobs: int
) -> list[EquivalenceClass]:
    if jobs > 1 and len(partitions) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(build_class, partitions, [ctx] * len(partitions)))
    return [build_class(p, ctx) for p in partitions]


def run(dataset: Dataset, annotations: AnnotationSet, config: RunConfig) -> RunResult:
    annotations = filter_annotations(annotations, config.entity_types)
    annotations = detect_redundant(dataset, annotations)
    records = build_person_view(dataset, annotations)
    ctx = build_context(dataset.schema, records)

    if config.strategy == GDF:
        partitions, stats, tree = gdf_partition(records, config.k, ctx)
        lam_used: float | None = None
    else:
        partitions, stats, tree = mondrian_partition(records, config.k, config.lam, ctx)
        lam_used = config.lam

    classes = _build_classes(partitions, ctx, config.jobs)
    audit = audit_classes(classes, config.k)
    header, rows = expand_release(classes, dataset, annotations, config.drop_direct_id)
    report = ncp_dataset(
        classes,
        config.weights,
        ctx,
        k=config.k,
        lam=lam_used,
        strategy=config.strategy,
        entity_types=annotations.entity_types,
        relational_splits=stats.relational_splits,
        textual_splits=stats.textual_splits,
    )
    return RunResult(
        config=config,
        records=records,
        context=ctx,
        partitions=partitions,
        stats=stats,
        tree=tree,
        classes=classes,
        audit=audit,
        header=header,
        rows=rows,
        report=report,
        annotations=annotations,
    )
