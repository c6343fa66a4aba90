"""Canton assignment container shared by the partitioners and the objective."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class PartitionError(Exception):
    pass


@dataclass
class Partition:
    """Total assignment of municipalities to canton labels 0..achieved_K-1.

    ``K`` is the requested canton count; ``achieved_K`` is how many distinct
    labels actually occur (Louvain may land near, not on, the target).
    """

    assignment: dict[str, int]
    K: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.assignment:
            raise PartitionError("empty assignment")
        labels = set(self.assignment.values())
        if labels != set(range(len(labels))):
            raise PartitionError(f"labels must be contiguous integers from 0, got {sorted(labels)}")

    @property
    def achieved_K(self) -> int:
        return len(set(self.assignment.values()))

    @property
    def node_ids(self) -> list[str]:
        return sorted(self.assignment)

    def labels_for(self, ids: list[str]) -> np.ndarray:
        return np.array([self.assignment[m] for m in ids], dtype=int)

    def members(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.achieved_K)]
        for m in sorted(self.assignment):
            out[self.assignment[m]].append(m)
        return out

    @classmethod
    def from_labels(cls, ids: list[str], labels, K: int, relabel: bool = False, meta: dict | None = None) -> "Partition":
        """Build a partition from a parallel label sequence.

        With ``relabel`` the labels are renumbered by first appearance over
        ``ids``, which gives algorithms with arbitrary label identities a
        canonical output.
        """
        labels = [int(x) for x in labels]
        if relabel:
            remap: dict[int, int] = {}
            for lab in labels:
                if lab not in remap:
                    remap[lab] = len(remap)
            labels = [remap[lab] for lab in labels]
        return cls(dict(zip(ids, labels)), K, meta or {})
