"""Detected spans and the overlap-resolution rule.

A span records half-open character offsets (Unicode code points, the
same indexing the annotations consumer uses), the covered text, the
entity label, and which source produced it. When spans from several
sources overlap, the longer span wins; between spans of equal length a
rule detector beats a model span, and remaining ties resolve by
position and label so the outcome never depends on detection order.
"""

from __future__ import annotations

from dataclasses import dataclass

RULE = "rule"
MODEL = "model"
_SOURCE_RANK = {RULE: 0, MODEL: 1}


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    text: str
    label: str
    source: str

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span offsets [{self.start}, {self.end})")
        if self.source not in _SOURCE_RANK:
            raise ValueError(f"unknown span source {self.source!r}")

    def __len__(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


def merge_spans(candidates: list[Span]) -> list[Span]:
    """Resolve overlaps across sources; returns spans sorted by start."""
    ranked = sorted(
        candidates,
        key=lambda s: (-len(s), _SOURCE_RANK[s.source], s.start, s.label),
    )
    kept: list[Span] = []
    for span in ranked:
        if not any(span.overlaps(other) for other in kept):
            kept.append(span)
    return sorted(kept, key=lambda s: s.start)
