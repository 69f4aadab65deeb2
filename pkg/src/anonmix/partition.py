"""Top-down partitioning of the person-centric view.

Two strategies produce k-valid partitions: a weighted multidimensional
partitioner that biases splits toward relational attributes or sensitive
terms via a weight in [0,1], and a greedy baseline that splits on the
presence of the most document-frequent term. Both stop a branch when no
cut leaves at least k records on each side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .context import GlobalContext
from .errors import ConfigError
from .records import Partition, PersonRecord, SplitStep, TermKey
from .schema import AttributeKind

LEFT = "left"
RIGHT = "right"


@dataclass
class SplitStats:
    relational_splits: int = 0
    textual_splits: int = 0
    by_attribute: dict[str, int] = field(default_factory=dict)
    by_entity_type: dict[str, int] = field(default_factory=dict)

    def record_relational(self, attribute: str) -> None:
        self.relational_splits += 1
        self.by_attribute[attribute] = self.by_attribute.get(attribute, 0) + 1

    def record_textual(self, entity_type: str) -> None:
        self.textual_splits += 1
        self.by_entity_type[entity_type] = self.by_entity_type.get(entity_type, 0) + 1


@dataclass(frozen=True)
class TreeNode:
    """Partition tree node; leaves carry members, internal nodes a split."""

    node_id: int
    members: tuple[str, ...]
    split: dict | None = None
    children: tuple["TreeNode", ...] = ()

    def to_dict(self) -> dict:
        if self.split is None:
            return {"id": self.node_id, "members": list(self.members)}
        return {
            "id": self.node_id,
            "split": self.split,
            "children": [c.to_dict() for c in self.children],
        }


@dataclass(frozen=True)
class SplitChoice:
    kind: str  # "relational" or "textual"
    subject: str  # attribute name or rendered term
    term: TermKey | None
    left: tuple[PersonRecord, ...]
    right: tuple[PersonRecord, ...]


def representative(record: PersonRecord, attribute: str):
    """Scalar stand-in for a set-valued cell: its minimum element."""
    return record.cells[attribute][0]


def find_median(representatives: list):
    """Median element used for the strict-less-than split."""
    ordered = sorted(representatives)
    return ordered[len(ordered) // 2]


def normalized_span(members, attribute: str, ctx: GlobalContext) -> float:
    """Width of the partition on one attribute, normalized to [0,1].

    Numeric and date attributes use range over global range (dates in
    days); categorical attributes use distinct-value counts. Set-valued
    cells contribute all their elements.
    """
    kind = ctx.schema.attribute(attribute).kind
    values = [v for r in members for v in r.cells[attribute]]
    if kind is AttributeKind.QUASI_NUMERIC:
        width = ctx.numeric_width(attribute)
        return (max(values) - min(values)) / width if width else 0.0
    if kind is AttributeKind.QUASI_DATE:
        width = ctx.date_width_days(attribute)
        return (max(values) - min(values)).days / width if width else 0.0
    return len(set(values)) / ctx.domain_size(attribute)


def textual_span(members, ctx: GlobalContext) -> float:
    """Distinct terms among members over the global term vocabulary."""
    if not ctx.term_vocabulary:
        return 0.0
    present = {key for r in members for key in r.terms}
    return len(present) / len(ctx.term_vocabulary)


def split_relational(members, attribute: str, ctx: GlobalContext):
    """Split on one attribute; returns (left, right) or None if unsplittable."""
    kind = ctx.schema.attribute(attribute).kind
    if kind is AttributeKind.QUASI_CATEGORICAL:
        return _split_categorical(members, attribute)
    representatives = [representative(r, attribute) for r in members]
    median = find_median(representatives)
    left = tuple(r for r in members if representative(r, attribute) < median)
    right = tuple(r for r in members if not representative(r, attribute) < median)
    if not left or not right:
        return None
    return left, right


def _split_categorical(members, attribute: str):
    """Frequency-balanced prefix split over the sorted distinct values."""
    counts: dict[str, int] = {}
    for r in members:
        counts[representative(r, attribute)] = counts.get(representative(r, attribute), 0) + 1
    values = sorted(counts)
    if len(values) < 2:
        return None
    half = len(members) / 2
    best_size = None
    cumulative = 0
    for value in values[:-1]:
        cumulative += counts[value]
        if best_size is None or abs(cumulative - half) < abs(best_size[0] - half):
            best_size = (cumulative, value)
    cutoff = best_size[1]
    left = tuple(r for r in members if representative(r, attribute) <= cutoff)
    right = tuple(r for r in members if representative(r, attribute) > cutoff)
    return left, right


def split_textual(members, term: TermKey):
    """Presence/absence split on one term."""
    left = tuple(r for r in members if term in r.terms)
    right = tuple(r for r in members if term not in r.terms)
    return left, right


def term_frequencies(members) -> dict[TermKey, int]:
    """Document frequency of each term within the partition."""
    frequencies: dict[TermKey, int] = {}
    for r in members:
        for key in r.terms:
            frequencies[key] = frequencies.get(key, 0) + 1
    return frequencies


def _terms_by_frequency(members, banned: frozenset[TermKey]) -> list[TermKey]:
    frequencies = term_frequencies(members)
    candidates = [key for key in frequencies if key not in banned]
    candidates.sort(key=lambda key: (-frequencies[key], key))
    return candidates


def _best_relational(members, k: int, ctx: GlobalContext):
    """Allowable relational split with the widest span; schema order breaks ties."""
    best = None
    for attribute in ctx.schema.quasi_attributes:
        parts = split_relational(members, attribute.name, ctx)
        if parts is None or len(parts[0]) < k or len(parts[1]) < k:
            continue
        span = normalized_span(members, attribute.name, ctx)
        if best is None or span > best[0]:
            best = (span, attribute.name, parts)
    return best


def _best_textual(members, k: int, ctx: GlobalContext, banned: frozenset[TermKey]):
    """First allowable term in (frequency desc, term) order."""
    for key in _terms_by_frequency(members, banned):
        left, right = split_textual(members, key)
        if len(left) >= k and len(right) >= k:
            return (textual_span(members, ctx), key, (left, right))
    return None


def choose_split(
    members,
    lam: float,
    k: int,
    ctx: GlobalContext,
    banned: frozenset[TermKey] = frozenset(),
) -> SplitChoice | None:
    """Pick the next cut under the relational/textual weight lam.

    Relational wins iff lam * s_r >= (1 - lam) * s_x where s_r is the
    widest allowable relational span and s_x the partition's term span.
    A weight of exactly 1 (or 0) never considers the textual (or
    relational) family, not even as a fallback.
    """
    relational = None if lam == 0.0 else _best_relational(members, k, ctx)
    textual = None if lam == 1.0 else _best_textual(members, k, ctx, banned)

    if relational is not None and textual is not None:
        use_relational = lam * relational[0] >= (1.0 - lam) * textual[0]
    elif relational is not None:
        use_relational = True
    elif textual is not None:
        use_relational = False
    else:
        return None

    if use_relational:
        _, attribute, (left, right) = relational
        return SplitChoice("relational", attribute, None, left, right)
    _, key, (left, right) = textual
    return SplitChoice("textual", f"{key.text}/{key.entity_type}", key, left, right)


class _TreeBuilder:
    def __init__(self) -> None:
        self.next_id = 0

    def node(self, members, split=None, children=()) -> TreeNode:
        node = TreeNode(
            node_id=self.next_id,
            members=tuple(r.pid for r in members),
            split=split,
            children=tuple(children),
        )
        self.next_id += 1
        return node


def _require_k(records: list[PersonRecord], k: int) -> None:
    if k < 2:
        raise ConfigError(f"k must be at least 2, got {k}")
    if len(records) < k:
        raise ConfigError(f"dataset has {len(records)} persons, fewer than k={k}")


def mondrian_partition(
    records: list[PersonRecord], k: int, lam: float, ctx: GlobalContext
) -> tuple[list[Partition], SplitStats, TreeNode]:
    """Recursive weighted partitioning (strict top-down, greedy)."""
    _require_k(records, k)
    if not 0.0 <= lam <= 1.0:
        raise ConfigError(f"lambda must lie in [0,1], got {lam}")
    stats = SplitStats()
    builder = _TreeBuilder()
    partitions: list[Partition] = []

    def recurse(members: tuple[PersonRecord, ...], lineage: tuple[SplitStep, ...]) -> TreeNode:
        if len(members) >= 2 * k:
            choice = choose_split(members, lam, k, ctx)
            if choice is not None:
                if choice.kind == "relational":
                    stats.record_relational(choice.subject)
                else:
                    stats.record_textual(choice.term.entity_type)
                step = lambda side: lineage + (SplitStep(choice.kind, choice.subject, side),)
                children = (
                    recurse(choice.left, step(LEFT)),
                    recurse(choice.right, step(RIGHT)),
                )
                return builder.node(
                    members,
                    split={"kind": choice.kind, "on": choice.subject},
                    children=children,
                )
        partitions.append(Partition(members, lineage))
        return builder.node(members)

    root = recurse(tuple(records), ())
    return partitions, stats, root


def gdf_partition(
    records: list[PersonRecord], k: int, ctx: GlobalContext
) -> tuple[list[Partition], SplitStats, TreeNode]:
    """Greedy document-frequency partitioning on term presence.

    At each node the most frequent unused term splits the partition into
    records containing it and the rest; terms whose split is not
    allowable are dropped for the entire subtree (a cut unallowable on a
    partition stays unallowable on all its subsets).
    """
    _require_k(records, k)
    stats = SplitStats()
    builder = _TreeBuilder()
    partitions: list[Partition] = []

    def recurse(
        members: tuple[PersonRecord, ...],
        banned: frozenset[TermKey],
        lineage: tuple[SplitStep, ...],
    ) -> TreeNode:
        if len(members) >= 2 * k:
            for key in _terms_by_frequency(members, banned):
                left, right = split_textual(members, key)
                banned = banned | {key}
                if len(left) >= k and len(right) >= k:
                    stats.record_textual(key.entity_type)
                    subject = f"{key.text}/{key.entity_type}"
                    children = (
                        recurse(left, banned, lineage + (SplitStep("textual", subject, LEFT),)),
                        recurse(right, banned, lineage + (SplitStep("textual", subject, RIGHT),)),
                    )
                    return builder.node(
                        members,
                        split={"kind": "textual", "on": subject},
                        children=children,
                    )
        partitions.append(Partition(members, lineage))
        return builder.node(members)

    root = recurse(tuple(records), frozenset(), ())
    return partitions, stats, root
