"""Partition quality metrics, partition-agreement indices, and cross-election
stability analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distances import DistanceMatrix
from .features import FeatureMatrix
from .geograph import ContiguityGraph
from .ingest import AlignedPanel, BlocMapping
from .objective import CostWeights, PartitionCost, balance, total_cost
from .partition import Partition, PartitionError
from .partitioners import is_contiguous


@dataclass
class EvaluationReport:
    silhouette: float | None
    wcss: float
    population_cv: float
    disconnected_cantons: int
    cost: PartitionCost

    def as_dict(self) -> dict:
        return {
            "silhouette": self.silhouette,
            "wcss": self.wcss,
            "pop_cv": self.population_cv,
            "disconnected": self.disconnected_cantons,
            "cost": self.cost.as_dict(),
        }


def silhouette(partition: Partition, distance_matrix: DistanceMatrix) -> float | None:
    """Mean silhouette score under a precomputed distance matrix.

    Undefined (None) outside 2 <= achieved_K <= n-1. Points in singleton
    cantons score 0, as does the degenerate a = b = 0 case.
    """
    ids = distance_matrix.row_ids
    n = len(ids)
    K = partition.achieved_K
    if K < 2 or K > n - 1:
        return None
    labels = partition.labels_for(ids)
    D = distance_matrix.values
    scores = np.zeros(n)
    cluster_members = [np.flatnonzero(labels == k) for k in range(K)]
    for i in range(n):
        own = cluster_members[labels[i]]
        if own.size == 1:
            continue
        a = D[i, own].sum() / (own.size - 1)
        b = min(
            D[i, cluster_members[k]].mean()
            for k in range(K)
            if k != labels[i]
        )
        denom = max(a, b)
        scores[i] = (b - a) / denom if denom > 0 else 0.0
    return float(scores.mean())


def wcss(partition: Partition, features: FeatureMatrix) -> float:
    """Sum of squared Euclidean deviations from canton centroids."""
    labels = partition.labels_for(features.row_ids)
    total = 0.0
    for k in range(partition.achieved_K):
        rows = features.values[labels == k]
        if rows.size:
            total += float(((rows - rows.mean(axis=0)) ** 2).sum())
    return total


def _contingency(a: Partition, b: Partition) -> tuple[np.ndarray, int]:
    if set(a.assignment) != set(b.assignment):
        raise PartitionError("partitions cover different node sets")
    ids = sorted(a.assignment)
    la = a.labels_for(ids)
    lb = b.labels_for(ids)
    table = np.zeros((la.max() + 1, lb.max() + 1), dtype=np.int64)
    for x, y in zip(la, lb):
        table[x, y] += 1
    return table, len(ids)


def ari(partition_a: Partition, partition_b: Partition) -> float:
    """Adjusted Rand Index from the contingency table.

    1 for identical partitions up to relabeling; 0 expectation under
    independent random labelings. Degenerate cases where the correction
    denominator vanishes (both trivial in the same way) return 1.
    """
    table, n = _contingency(partition_a, partition_b)

    def comb2(x):
        return x * (x - 1) / 2.0

    sum_ij = comb2(table).sum()
    sum_a = comb2(table.sum(axis=1)).sum()
    sum_b = comb2(table.sum(axis=0)).sum()
    total = comb2(n)
    expected = sum_a * sum_b / total if total > 0 else 0.0
    maximum = 0.5 * (sum_a + sum_b)
    if maximum == expected:
        return 1.0
    return float((sum_ij - expected) / (maximum - expected))


def nmi(partition_a: Partition, partition_b: Partition) -> float:
    """Normalized mutual information, arithmetic-mean normalization.

    In [0, 1]; exactly 1 iff the partitions agree up to relabeling. Two
    single-cluster partitions are identical, hence 1 by convention.
    """
    table, n = _contingency(partition_a, partition_b)
    if ((table > 0).sum(axis=0) == 1).all() and ((table > 0).sum(axis=1) == 1).all():
        return 1.0  # identical up to relabeling, exactly
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    h_a = -sum(p * math.log(p) for p in pa if p > 0)
    h_b = -sum(p * math.log(p) for p in pb if p > 0)
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    mi = 0.0
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            if table[i, j] > 0:
                pij = table[i, j] / n
                mi += pij * math.log(pij / (pa[i] * pb[j]))
    value = mi / (0.5 * (h_a + h_b))
    return float(min(max(value, 0.0), 1.0))


def evaluate(
    partition: Partition,
    features: FeatureMatrix,
    distance_matrix: DistanceMatrix,
    voter_weights: dict[str, float],
    graph: ContiguityGraph,
    weights: CostWeights = CostWeights(),
) -> EvaluationReport:
    """All quality metrics for one partition."""
    return EvaluationReport(
        silhouette=silhouette(partition, distance_matrix),
        wcss=wcss(partition, features),
        population_cv=balance(partition, voter_weights),
        disconnected_cantons=is_contiguous(partition, graph),
        cost=total_cost(partition, features, voter_weights, graph, weights),
    )


@dataclass
class StabilityReport:
    election_ids: list[int]
    pairwise_ari: np.ndarray
    pairwise_nmi: np.ndarray
    mean_ari: float
    std_ari: float
    mean_nmi: float
    std_nmi: float

    def as_dict(self) -> dict:
        return {
            "election_ids": self.election_ids,
            "pairwise_ari": self.pairwise_ari.tolist(),
            "pairwise_nmi": self.pairwise_nmi.tolist(),
            "mean_ari": self.mean_ari,
            "std_ari": self.std_ari,
            "mean_nmi": self.mean_nmi,
            "std_nmi": self.std_nmi,
        }


def stability_from_partitions(election_ids: list[int], partitions: list[Partition]) -> StabilityReport:
    """Pairwise ARI/NMI matrices over per-election partitions.

    Means and stds aggregate the distinct off-diagonal pairs (population
    std); diagonals are 1 by construction.
    """
    k = len(partitions)
    A = np.eye(k)
    N = np.eye(k)
    pairs_a, pairs_n = [], []
    for i in range(k):
        for j in range(i + 1, k):
            A[i, j] = A[j, i] = ari(partitions[i], partitions[j])
            N[i, j] = N[j, i] = nmi(partitions[i], partitions[j])
            pairs_a.append(A[i, j])
            pairs_n.append(N[i, j])
    return StabilityReport(
        election_ids=list(election_ids),
        pairwise_ari=A,
        pairwise_nmi=N,
        mean_ari=float(np.mean(pairs_a)),
        std_ari=float(np.std(pairs_a)),
        mean_nmi=float(np.mean(pairs_n)),
        std_nmi=float(np.std(pairs_n)),
    )


def stability_analysis(
    config,
    per_election_panels: list[AlignedPanel],
    graph: ContiguityGraph,
    mapping: BlocMapping,
) -> StabilityReport:
    """Run one configuration independently on each election and compare.

    Every panel must cover the same municipality set; the shared augmented
    graph is reused across elections.
    """
    from .experiments import run_partitioner  # deferred: experiments builds on this module

    base = set(per_election_panels[0].municipality_ids)
    for panel in per_election_panels[1:]:
        if set(panel.municipality_ids) != base:
            raise PartitionError("per-election panels cover different municipality sets")
    partitions = [run_partitioner(config, panel, mapping, graph) for panel in per_election_panels]
    election_ids = [panel.election_ids[0] for panel in per_election_panels]
    return stability_from_partitions(election_ids, partitions)
