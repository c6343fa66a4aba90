"""Political dissimilarity kernels and pairwise distance matrices."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .features import FeatureMatrix


class DistanceError(Exception):
    pass


class Metric(str, Enum):
    EUCLIDEAN = "Euclidean"
    COSINE = "Cosine"
    JENSEN_SHANNON = "JensenShannon"

    @classmethod
    def parse(cls, name: str) -> "Metric":
        key = name.strip().lower().replace("-", "").replace("_", "")
        for metric in cls:
            if metric.value.lower() == key:
                return metric
        if key in ("jsd", "jensenshannondivergence"):
            return cls.JENSEN_SHANNON
        raise DistanceError(f"unknown metric '{name}'")


@dataclass
class DistanceMatrix:
    metric: Metric
    row_ids: list[str]
    values: np.ndarray  # (n, n) symmetric, zero diagonal

    @property
    def n(self) -> int:
        return len(self.row_ids)


def _jsd_sqrt(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Square root of the base-2 Jensen-Shannon divergence for rows already
    normalized to the simplex; broadcasting-friendly. 0*log(0) taken as 0."""
    M = 0.5 * (P + Q)
    with np.errstate(divide="ignore", invalid="ignore"):
        kl_p = np.where(P > 0, P * np.log2(P / M), 0.0)
        kl_q = np.where(Q > 0, Q * np.log2(Q / M), 0.0)
    jsd = 0.5 * kl_p.sum(axis=-1) + 0.5 * kl_q.sum(axis=-1)
    return np.sqrt(np.clip(jsd, 0.0, 1.0))


def _simplex(p: np.ndarray, label: str) -> np.ndarray:
    if (p < 0).any():
        raise DistanceError(f"Jensen-Shannon requires non-negative entries ({label} has negatives)")
    s = p.sum()
    if s <= 0:
        raise DistanceError(f"Jensen-Shannon requires a positive sum ({label} sums to {s})")
    return p / s


def distance(metric: Metric, p, q) -> float:
    """Dissimilarity between two feature vectors under one metric.

    Jensen-Shannon renormalizes its inputs to the simplex and uses base-2
    logs, so it lies in [0, 1] and rejects negative entries.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise DistanceError(f"incompatible shapes {p.shape} and {q.shape}")
    if metric is Metric.EUCLIDEAN:
        return float(np.linalg.norm(p - q))
    if metric is Metric.COSINE:
        np_, nq = np.linalg.norm(p), np.linalg.norm(q)
        if np_ == 0 or nq == 0:
            raise DistanceError("cosine distance undefined for a zero vector")
        return float(1.0 - np.dot(p, q) / (np_ * nq))
    if metric is Metric.JENSEN_SHANNON:
        return float(_jsd_sqrt(_simplex(p, "p"), _simplex(q, "q")))
    raise DistanceError(f"unknown metric {metric!r}")


def pairwise_matrix(metric: Metric, features: FeatureMatrix) -> DistanceMatrix:
    """Full symmetric distance matrix over the feature rows.

    The upper triangle is computed and mirrored, so D[i, j] == D[j, i]
    bit-exactly and the diagonal is exactly zero.
    """
    X = np.asarray(features.values, dtype=float)
    n = X.shape[0]
    D = np.zeros((n, n))

    if metric is Metric.EUCLIDEAN:
        for i in range(n - 1):
            D[i, i + 1:] = np.linalg.norm(X[i + 1:] - X[i], axis=1)
    elif metric is Metric.COSINE:
        norms = np.linalg.norm(X, axis=1)
        zero = np.flatnonzero(norms == 0)
        if zero.size:
            raise DistanceError(
                f"cosine distance undefined for zero-vector rows: "
                f"{[features.row_ids[i] for i in zero[:5]]}"
            )
        N = X / norms[:, None]
        C = N @ N.T
        full = 1.0 - np.clip(C, -1.0, 1.0)
        for i in range(n - 1):
            D[i, i + 1:] = full[i, i + 1:]
    elif metric is Metric.JENSEN_SHANNON:
        if (X < 0).any():
            raise DistanceError(
                f"Jensen-Shannon is incompatible with representation "
                f"'{features.representation}': negative feature values"
            )
        sums = X.sum(axis=1)
        zero = np.flatnonzero(sums <= 0)
        if zero.size:
            raise DistanceError(
                f"Jensen-Shannon undefined for zero-sum rows: "
                f"{[features.row_ids[i] for i in zero[:5]]}"
            )
        P = X / sums[:, None]
        for i in range(n - 1):
            D[i, i + 1:] = _jsd_sqrt(P[i], P[i + 1:])
    else:
        raise DistanceError(f"unknown metric {metric!r}")

    D = D + D.T
    return DistanceMatrix(metric, list(features.row_ids), D)
