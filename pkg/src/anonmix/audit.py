"""k-anonymity audit over recoded equivalence classes.

Groups person records by (rendered quasi cells, retained term set) and
verifies that every group has at least k members and that every
retained term occurs in every member's X'.
"""

from __future__ import annotations

from dataclasses import dataclass

from .recode import EquivalenceClass


@dataclass(frozen=True)
class AuditResult:
    k: int
    group_sizes: tuple[int, ...]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def verdict(self) -> str:
        if self.ok:
            return (
                f"k-anonymity audit passed: {len(self.group_sizes)} equivalence "
                f"classes, smallest size {min(self.group_sizes, default=0)}, k={self.k}"
            )
        return "k-anonymity audit FAILED:\n" + "\n".join(f"  - {v}" for v in self.violations)


def audit_classes(classes: list[EquivalenceClass], k: int) -> AuditResult:
    """Check class sizes and retained-term soundness after recoding."""
    groups: dict[tuple, list[str]] = {}
    violations: list[str] = []

    for cls in classes:
        rendered = tuple(sorted(cls.rendered_cells().items()))
        signature = (rendered, tuple(sorted(cls.retained)))
        groups.setdefault(signature, []).extend(cls.pids)
        for record in cls.partition.members:
            missing = cls.retained - record.terms
            if missing:
                shown = ", ".join(f"{key.text}/{key.entity_type}" for key in sorted(missing))
                violations.append(
                    f"retained terms absent from member {record.pid}: {shown}"
                )

    sizes = []
    for signature, pids in sorted(groups.items()):
        sizes.append(len(pids))
        if len(pids) < k:
            cells = ", ".join(f"{name}={value}" for name, value in signature[0])
            violations.append(
                f"equivalence class of size {len(pids)} < k={k} "
                f"(members {', '.join(sorted(pids))}; {cells})"
            )
    return AuditResult(k=k, group_sizes=tuple(sizes), violations=tuple(violations))
