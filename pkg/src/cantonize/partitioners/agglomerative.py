"""Average-linkage agglomerative clustering under a contiguity constraint.

Only graph-adjacent clusters may merge, so every intermediate clustering and
the final partition consist of connected cantons. Deterministic: ties are
broken by the lexicographically smallest (min-id, min-id) cluster pair.
"""

from __future__ import annotations

import numpy as np

from ..distances import DistanceMatrix
from ..geograph import ContiguityGraph
from ..partition import Partition, PartitionError
from .common import node_index


def agglomerative_partition(graph: ContiguityGraph, distance_matrix: DistanceMatrix, K: int) -> Partition:
    """Merge adjacent clusters with the smallest average pairwise distance
    until K remain.

    Average linkage is maintained with the Lance-Williams update; adjacency
    of merged clusters is the union of member adjacencies. Raises when K
    exceeds the node count or the graph has more components than K.
    """
    n = graph.n
    if K < 1 or K > n:
        raise PartitionError(f"K={K} out of range 1..{n}")
    ids = graph.nodes
    order = {m: i for i, m in enumerate(distance_matrix.row_ids)}
    missing = [m for m in ids if m not in order]
    if missing:
        raise PartitionError(f"distance matrix missing rows for: {missing[:5]}")
    perm = [order[m] for m in ids]
    D = np.asarray(distance_matrix.values, dtype=float)[np.ix_(perm, perm)].copy()

    A = np.zeros((n, n), dtype=bool)
    index = node_index(graph)
    for u, v in graph.edges:
        iu, iv = index[u], index[v]
        A[iu, iv] = A[iv, iu] = True

    # Cluster slots are indexed by their smallest member, so flat argmin over
    # the masked upper triangle realizes the (min-id, min-id) tie-break.
    active = np.ones(n, dtype=bool)
    sizes = np.ones(n, dtype=int)
    members: list[list[int]] = [[i] for i in range(n)]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)

    for _ in range(n - K):
        eligible = A & upper
        if not eligible.any():
            raise PartitionError(
                f"cannot reach K={K} clusters: graph has more components than K"
            )
        C = np.where(eligible, D, np.inf)
        flat = int(np.argmin(C))
        i, j = divmod(flat, n)
        if not np.isfinite(C[i, j]):
            raise PartitionError(
                f"cannot reach K={K} clusters: graph has more components than K"
            )
        # Lance-Williams average-linkage update of row/column i.
        si, sj = sizes[i], sizes[j]
        merged = (si * D[i] + sj * D[j]) / (si + sj)
        D[i, :] = merged
        D[:, i] = merged
        D[i, i] = 0.0
        A[i, :] |= A[j, :]
        A[:, i] |= A[:, j]
        A[i, i] = False
        sizes[i] += sizes[j]
        members[i].extend(members[j])
        active[j] = False
        A[j, :] = False
        A[:, j] = False
        D[j, :] = np.inf
        D[:, j] = np.inf

    labels = np.empty(n, dtype=int)
    for lab, slot in enumerate(np.flatnonzero(active)):
        labels[members[slot]] = lab
    return Partition({ids[i]: int(labels[i]) for i in range(n)}, K)
