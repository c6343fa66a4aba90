"""The four municipality feature representations (BlocShares, RawParty,
PCA_5, NMF_5) and column standardization."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .ingest import BLOCS, AlignedPanel, BlocMapping, bloc_vote_shares

REPRESENTATIONS = ("BlocShares", "RawParty", "PCA_5", "NMF_5")

_STD_FLOOR = 1e-12


class FeatureError(Exception):
    pass


@dataclass
class FeatureMatrix:
    representation: str
    row_ids: list[str]
    values: np.ndarray
    column_names: list[str]
    standardized: bool = False
    column_means: np.ndarray | None = field(default=None, repr=False)
    column_stds: np.ndarray | None = field(default=None, repr=False)
    constant_columns: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise FeatureError("feature values must be a 2-D matrix")
        if self.values.shape != (len(self.row_ids), len(self.column_names)):
            raise FeatureError(
                f"shape {self.values.shape} does not match "
                f"{len(self.row_ids)} rows x {len(self.column_names)} columns"
            )
        if not np.isfinite(self.values).all():
            raise FeatureError("feature matrix contains non-finite entries")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def row(self, municipality_id: str) -> np.ndarray:
        return self.values[self.row_ids.index(municipality_id)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("municipality," + ",".join(self.column_names) + "\n")
        for m, row in zip(self.row_ids, self.values):
            buf.write(m + "," + ",".join(repr(x) for x in row) + "\n")
        return buf.getvalue()


def bloc_shares_features(panel: AlignedPanel, mapping: BlocMapping) -> FeatureMatrix:
    """11-column profile: per-bloc mean and std of vote share across the
    panel's elections, plus the average eligible-voter count.

    Stds are population stds; single-election panels get zero std columns.
    """
    per_election = np.array(
        [
            [bloc_vote_shares(panel, mapping, e)[m] for e in panel.election_ids]
            for m in panel.municipality_ids
        ]
    )  # (n, elections, 5)
    means = per_election.mean(axis=1)
    stds = per_election.std(axis=1)
    weights = panel.voter_weight
    voters = np.array([weights[m] for m in panel.municipality_ids])
    values = np.column_stack([means, stds, voters])
    names = [f"mean_{b}" for b in BLOCS] + [f"std_{b}" for b in BLOCS] + ["avg_voters"]
    return FeatureMatrix("BlocShares", list(panel.municipality_ids), values, names)


def raw_party_features(panel: AlignedPanel) -> FeatureMatrix:
    """Party-level vote shares averaged across elections.

    One column per party appearing in any election; a party absent from an
    election contributes share 0 to that election's term of the average.
    """
    parties = panel.party_symbols()
    col = {p: j for j, p in enumerate(parties)}
    n_elections = len(panel.election_ids)
    values = np.zeros((panel.n, len(parties)))
    for i, m in enumerate(panel.municipality_ids):
        for e in panel.election_ids:
            pv = panel.votes[(m, e)]
            denom = sum(pv.values())
            if denom == 0:
                raise FeatureError(f"municipality '{m}' has zero total votes in election {e}")
            for p, count in pv.items():
                values[i, col[p]] += count / denom
    values /= n_elections
    return FeatureMatrix("RawParty", list(panel.municipality_ids), values, parties)


@dataclass
class PCAResult:
    projections: np.ndarray   # (n, k)
    components: np.ndarray    # (d, k), orthonormal columns
    explained_variance: np.ndarray  # (k,), non-increasing
    mean: np.ndarray          # (d,)

    def reconstruct(self) -> np.ndarray:
        return self.projections @ self.components.T + self.mean


def pca(values: np.ndarray, k: int) -> PCAResult:
    """Exact PCA via eigendecomposition of the column-centered covariance.

    Components are ordered by descending eigenvalue; each component's
    largest-magnitude loading is made positive to fix the sign.
    """
    X = np.asarray(values, dtype=float)
    n, d = X.shape
    if k > min(n, d):
        raise FeatureError(f"k={k} exceeds min(n, d)={min(n, d)}")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = (Xc.T @ Xc) / n
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:k]
    comps = eigvecs[:, order]
    for j in range(k):
        i = int(np.argmax(np.abs(comps[:, j])))
        if comps[i, j] < 0:
            comps[:, j] = -comps[:, j]
    return PCAResult(Xc @ comps, comps, np.maximum(eigvals[order], 0.0), mean)


def pca_features(raw: FeatureMatrix, k: int = 5, seed: int | None = None) -> FeatureMatrix:
    """Top-k principal component projections of a representation.

    The decomposition is exact, so ``seed`` is accepted only for interface
    uniformity with the other representations.
    """
    result = pca(raw.values, k)
    names = [f"pc{j + 1}" for j in range(k)]
    return FeatureMatrix("PCA_5", list(raw.row_ids), result.projections, names)


@dataclass
class NMFResult:
    W: np.ndarray             # (n, k)
    H: np.ndarray             # (k, d)
    errors: list[float]       # Frobenius error, index 0 = before any update
    iterations: int

    def relative_error(self, values: np.ndarray) -> float:
        denom = np.linalg.norm(values)
        return self.errors[-1] / denom if denom > 0 else 0.0


def nmf(
    values: np.ndarray,
    k: int,
    seed: int | None = None,
    max_iter: int = 500,
    tol: float = 1e-5,
) -> NMFResult:
    """Multiplicative-update NMF minimizing squared Frobenius error.

    Factors are initialized uniform on [0, 1) scaled by sqrt(mean(V)/k).
    Stops after ``max_iter`` iterations or when the relative error
    improvement of one iteration drops below ``tol``.
    """
    V = np.asarray(values, dtype=float)
    if (V < 0).any():
        raise FeatureError("NMF input contains negative entries")
    n, d = V.shape
    rng = np.random.default_rng(seed)
    scale = np.sqrt(V.mean() / k) if V.size else 1.0
    W = rng.uniform(0.0, 1.0, (n, k)) * scale
    H = rng.uniform(0.0, 1.0, (k, d)) * scale

    eps = 1e-12
    errors = [float(np.linalg.norm(V - W @ H))]
    iterations = 0
    for _ in range(max_iter):
        H *= (W.T @ V) / (W.T @ W @ H + eps)
        W *= (V @ H.T) / (W @ (H @ H.T) + eps)
        err = float(np.linalg.norm(V - W @ H))
        errors.append(err)
        iterations += 1
        prev = errors[-2]
        if prev > 0 and (prev - err) / prev < tol:
            break
        if prev == 0.0:
            break
    return NMFResult(W, H, errors, iterations)


def nmf_features(
    raw: FeatureMatrix,
    k: int = 5,
    seed: int | None = None,
    max_iter: int = 500,
    tol: float = 1e-5,
) -> FeatureMatrix:
    """Non-negative archetype weights (the W factor) for each municipality."""
    result = nmf(raw.values, k, seed=seed, max_iter=max_iter, tol=tol)
    names = [f"nmf{j + 1}" for j in range(k)]
    return FeatureMatrix("NMF_5", list(raw.row_ids), result.W, names)


def standardize(matrix: FeatureMatrix) -> FeatureMatrix:
    """Zero-mean, unit-variance columns (population std).

    Zero-variance columns are set to 0 and flagged in ``constant_columns``.
    Already-standardized matrices are returned unchanged.
    """
    if matrix.standardized:
        return matrix
    means = matrix.values.mean(axis=0)
    stds = matrix.values.std(axis=0)
    constant = stds < _STD_FLOOR
    safe = np.where(constant, 1.0, stds)
    values = (matrix.values - means) / safe
    values[:, constant] = 0.0
    return FeatureMatrix(
        matrix.representation,
        list(matrix.row_ids),
        values,
        list(matrix.column_names),
        standardized=True,
        column_means=means,
        column_stds=stds,
        constant_columns=constant,
    )
