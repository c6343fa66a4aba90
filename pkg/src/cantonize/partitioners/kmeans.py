"""K-Means baseline: feature space only, no geographic constraint."""

from __future__ import annotations

import numpy as np

from ..features import FeatureMatrix
from ..partition import Partition, PartitionError


def _sq_dists(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - centers[None, :, :]
    return (diff * diff).sum(axis=2)


def _kmeans_pp(X: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding (D^2 sampling)."""
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < K:
        total = d2.sum()
        if total <= 0:
            remaining = [i for i in range(n) if i not in set(chosen)]
            chosen.append(remaining[0])
        else:
            chosen.append(int(rng.choice(n, p=d2 / total)))
        d2 = np.minimum(d2, ((X - X[chosen[-1]]) ** 2).sum(axis=1))
    return X[chosen].copy()


def lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Lloyd iterations; returns (labels, centers, per-iteration WCSS).

    The WCSS sequence is non-increasing. Empty clusters are refilled with the
    point farthest from its current center.
    """
    K = centers.shape[0]
    labels = np.full(X.shape[0], -1, dtype=int)
    history: list[float] = []
    for _ in range(max_iter):
        d2 = _sq_dists(X, centers)
        new_labels = d2.argmin(axis=1)
        for k in range(K):
            if not (new_labels == k).any():
                assigned = d2[np.arange(X.shape[0]), new_labels]
                farthest = int(assigned.argmax())
                new_labels[farthest] = k
                centers[k] = X[farthest]
                d2 = _sq_dists(X, centers)
                assigned = d2[np.arange(X.shape[0]), new_labels]
        history.append(float(((X - centers[new_labels]) ** 2).sum()))
        if (new_labels == labels).all():
            break
        labels = new_labels
        for k in range(K):
            centers[k] = X[labels == k].mean(axis=0)
    return labels, centers, history


def kmeans_partition(
    features: FeatureMatrix,
    K: int,
    seed: int | None = None,
    n_init: int = 10,
    max_iter: int = 300,
) -> Partition:
    """Best-of-n_init K-Means by within-cluster sum of squares.

    Cantons may be geographically disconnected; that is the point of the
    baseline. Labels are renumbered by first appearance over the row order
    for stable output.
    """
    order = np.argsort(np.asarray(features.row_ids, dtype=object), kind="stable")
    ids = [features.row_ids[i] for i in order]
    X = np.asarray(features.values, dtype=float)[order]
    n = X.shape[0]
    if K < 1 or K > n:
        raise PartitionError(f"K={K} out of range 1..{n}")
    if K == n:
        return Partition.from_labels(ids, list(range(n)), K, meta={"wcss": 0.0})
    rng = np.random.default_rng(seed)
    best_labels = None
    best_wcss = np.inf
    for _ in range(n_init):
        centers = _kmeans_pp(X, K, rng)
        labels, _, history = lloyd(X, centers, max_iter)
        if history[-1] < best_wcss:
            best_wcss = history[-1]
            best_labels = labels
    return Partition.from_labels(ids, best_labels, K, relabel=True, meta={"wcss": best_wcss})
