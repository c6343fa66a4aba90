"""Shared helpers for the partitioning algorithms."""

from __future__ import annotations

import numpy as np

from ..features import FeatureMatrix
from ..geograph import ContiguityGraph
from ..partition import Partition, PartitionError


def node_index(graph: ContiguityGraph) -> dict[str, int]:
    return {m: i for i, m in enumerate(graph.nodes)}


def adjacency_lists(graph: ContiguityGraph) -> list[list[int]]:
    index = node_index(graph)
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        iu, iv = index[u], index[v]
        adj[iu].append(iv)
        adj[iv].append(iu)
    return [sorted(a) for a in adj]


def feature_rows(features: FeatureMatrix, ids: list[str]) -> np.ndarray:
    """Feature values reordered to ``ids``; every id must have a row."""
    order = {m: i for i, m in enumerate(features.row_ids)}
    missing = [m for m in ids if m not in order]
    if missing:
        raise PartitionError(f"features missing rows for: {missing[:5]}")
    return np.asarray(features.values, dtype=float)[[order[m] for m in ids]]


def is_contiguous(partition: Partition, graph: ContiguityGraph) -> int:
    """Number of cantons that are disconnected in the graph.

    Each canton's induced subgraph is traversed breadth-first; cantons
    splitting into more than one component are counted.
    """
    missing = [u for u in graph.nodes if u not in partition.assignment]
    if missing:
        raise PartitionError(f"partition does not cover nodes: {missing[:5]}")
    adj = adjacency_lists(graph)
    index = node_index(graph)
    labels = np.array([partition.assignment[u] for u in graph.nodes])
    disconnected = 0
    for k in range(partition.achieved_K):
        members = np.flatnonzero(labels == k)
        if members.size == 0:
            continue
        member_set = set(members.tolist())
        seen = {int(members[0])}
        stack = [int(members[0])]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j in member_set and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != members.size:
            disconnected += 1
    return disconnected


def subset_connected(members: set[int], adj: list[list[int]], skip: int | None = None) -> bool:
    """Whether ``members`` (optionally minus ``skip``) induce a connected subgraph."""
    remaining = members - {skip} if skip is not None else set(members)
    if len(remaining) <= 1:
        return True
    start = next(iter(remaining))
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j in remaining and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(remaining)
