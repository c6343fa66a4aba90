"""Simulated annealing over contiguous partitions with the multi-objective cost.

Moves reassign a border municipality to an adjacent canton; moves that would
empty or disconnect the donor canton are rejected outright, worse moves pass
through the Metropolis criterion, and the best-cost partition ever seen is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..features import FeatureMatrix
from ..geograph import ContiguityGraph
from ..ingest import BLOCS
from ..objective import CostState, CostWeights
from ..partition import Partition, PartitionError
from .common import adjacency_lists, feature_rows, subset_connected


@dataclass(frozen=True)
class SAParams:
    initial_temperature: float = 1.0
    cooling_rate: float = 0.9995
    iterations: int = 5000
    seed: int | None = None
    cost_weights: CostWeights = field(default_factory=CostWeights)

    def __post_init__(self):
        if not (0.0 < self.cooling_rate < 1.0):
            raise PartitionError("cooling_rate must be in (0, 1)")
        if self.iterations < 1:
            raise PartitionError("iterations must be >= 1")


def _select_seeds(
    ids: list[str],
    X: np.ndarray,
    bloc_shares: dict[str, tuple[float, ...]],
    K: int,
) -> list[int]:
    """Canton seed nodes: bloc-share argmax per bloc, then farthest-first.

    The first min(K, 5) seeds take, per bloc in fixed bloc order, the
    municipality with the highest share of that bloc (ties by id; a
    municipality already seeded falls through to the next best). Extra seats
    are filled by farthest-first traversal in feature space.
    """
    seeds: list[int] = []
    taken: set[int] = set()
    for b in range(min(K, len(BLOCS))):
        ranked = sorted(range(len(ids)), key=lambda i: (-bloc_shares[ids[i]][b], ids[i]))
        for i in ranked:
            if i not in taken:
                seeds.append(i)
                taken.add(i)
                break
    while len(seeds) < K:
        chosen = np.array(seeds)
        dists = np.sqrt(((X[:, None, :] - X[chosen][None, :, :]) ** 2).sum(axis=2)).min(axis=1)
        dists[chosen] = -np.inf
        best = int(np.argmax(dists))
        seeds.append(best)
        taken.add(best)
    return seeds


def _grow_initial(
    seeds: list[int],
    adj: list[list[int]],
    X: np.ndarray,
    n: int,
) -> np.ndarray:
    """Round-robin multi-source growth: each canton in turn claims its
    unassigned neighbor closest to the canton seed in feature space."""
    labels = np.full(n, -1, dtype=int)
    for k, s in enumerate(seeds):
        labels[s] = k
    assigned = len(seeds)
    K = len(seeds)
    while assigned < n:
        progress = False
        for k in range(K):
            if assigned == n:
                break
            frontier = {
                j
                for i in np.flatnonzero(labels == k)
                for j in adj[i]
                if labels[j] == -1
            }
            if not frontier:
                continue
            seed_row = X[seeds[k]]
            best = min(frontier, key=lambda j: (float(np.linalg.norm(X[j] - seed_row)), j))
            labels[best] = k
            assigned += 1
            progress = True
        if not progress:
            raise PartitionError("initial growth stalled; graph must be connected")
    return labels


def sa_partition(
    graph: ContiguityGraph,
    features: FeatureMatrix,
    voter_weights: dict[str, float],
    bloc_shares: dict[str, tuple[float, ...]],
    K: int,
    params: SAParams = SAParams(),
) -> Partition:
    """Anneal a contiguous K-canton partition minimizing the weighted cost.

    Deterministic given ``params.seed``. Every returned canton induces a
    connected subgraph, and the returned cost never exceeds the initial
    partition's cost (best-seen semantics).
    """
    n = graph.n
    if K < 2 or K > n:
        raise PartitionError(f"K={K} out of range 2..{n}")
    if not graph.is_connected():
        raise PartitionError("simulated annealing requires a connected graph")
    ids = graph.nodes
    X = feature_rows(features, ids)
    adj = adjacency_lists(graph)
    rng = np.random.default_rng(params.seed)

    if list(features.row_ids) != ids:
        features = FeatureMatrix(
            features.representation, ids, X, list(features.column_names),
            standardized=features.standardized,
        )

    seeds = _select_seeds(ids, X, bloc_shares, K)
    labels = _grow_initial(seeds, adj, X, n)
    state = CostState(features, voter_weights, graph, labels, K, params.cost_weights)

    members: list[set[int]] = [set(np.flatnonzero(labels == k).tolist()) for k in range(K)]
    cnt_diff = np.zeros(n, dtype=int)
    for i in range(n):
        cnt_diff[i] = sum(1 for j in adj[i] if labels[j] != labels[i])

    current = state.cost().total
    initial_cost = current
    best_cost = current
    best_labels = labels.copy()

    T = params.initial_temperature
    tail_start = params.iterations - max(1, params.iterations // 10)
    tail_worse_proposed = 0
    tail_worse_accepted = 0

    for it in range(params.iterations):
        border = np.flatnonzero(cnt_diff > 0)
        if border.size == 0:
            break
        u = int(border[rng.integers(border.size)])
        old = int(labels[u])
        neighbor_cantons = sorted({int(labels[j]) for j in adj[u]} - {old})
        if not neighbor_cantons:
            T *= params.cooling_rate
            continue
        target = neighbor_cantons[int(rng.integers(len(neighbor_cantons)))]

        feasible = len(members[old]) > 1 and subset_connected(members[old], adj, skip=u)
        if feasible:
            candidate = state.move_cost(u, target).total
            delta = candidate - current
            accept = delta <= 0 or rng.random() < math.exp(-delta / T)
            if it >= tail_start and delta > 0:
                tail_worse_proposed += 1
                if accept:
                    tail_worse_accepted += 1
            if accept:
                state.apply_move(u, target)
                members[old].discard(u)
                members[target].add(u)
                labels[u] = target
                for j in adj[u]:
                    lj = int(labels[j])
                    if lj == old:
                        cnt_diff[j] += 1
                    elif lj == target:
                        cnt_diff[j] -= 1
                cnt_diff[u] = sum(1 for j in adj[u] if labels[j] != target)
                current = candidate
                if current < best_cost:
                    best_cost = current
                    best_labels = labels.copy()
        T *= params.cooling_rate

    assignment = {ids[i]: int(best_labels[i]) for i in range(n)}
    return Partition(
        assignment,
        K,
        meta={
            "initial_cost": initial_cost,
            "best_cost": best_cost,
            "seeds": [ids[s] for s in seeds],
            "tail_worse_proposed": tail_worse_proposed,
            "tail_worse_accepted": tail_worse_accepted,
        },
    )
