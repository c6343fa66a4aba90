"""Configuration grid enumeration and execution, stability and seed-sweep
suites, result persistence, and partition export."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distances import DistanceMatrix, Metric, pairwise_matrix
from .evaluation import EvaluationReport, StabilityReport, evaluate, stability_analysis
from .features import (
    FeatureMatrix,
    bloc_shares_features,
    nmf_features,
    pca_features,
    raw_party_features,
    standardize,
)
from .geograph import (
    BoundaryPolygon,
    ContiguityGraph,
    augment_graph,
    build_adjacency,
    edge_similarity_weights,
    parse_geojson,
    subset_graph,
)
from .ingest import (
    BLOCS,
    AlignedPanel,
    BlocMapping,
    align_panel,
    mean_bloc_shares,
    parse_alias_table,
    parse_bloc_mapping,
    parse_election_file,
)
from .objective import CostWeights, PartitionCost
from .partition import Partition
from .partitioners import (
    LouvainParams,
    SAParams,
    agglomerative_partition,
    kmeans_partition,
    louvain_partition,
    sa_partition,
)

ALGORITHMS = ("SA", "Agglomerative", "Louvain", "KMeans")
GRID_KS = (3, 5, 7, 10, 15, 20)

_REPR_ALIASES = {
    "blocshares": "BlocShares",
    "rawparty": "RawParty",
    "pca": "PCA_5", "pca5": "PCA_5", "pca_5": "PCA_5",
    "nmf": "NMF_5", "nmf5": "NMF_5", "nmf_5": "NMF_5",
}
_ALGO_ALIASES = {
    "sa": "SA", "simulatedannealing": "SA",
    "agglomerative": "Agglomerative", "agglom": "Agglomerative",
    "louvain": "Louvain",
    "kmeans": "KMeans", "k-means": "KMeans",
}


class ConfigError(Exception):
    pass


def parse_representation(name: str) -> str:
    key = name.strip().lower()
    if key not in _REPR_ALIASES:
        raise ConfigError(f"unknown representation '{name}'")
    return _REPR_ALIASES[key]


def parse_algorithm(name: str) -> str:
    key = name.strip().lower()
    if key not in _ALGO_ALIASES:
        raise ConfigError(f"unknown algorithm '{name}'")
    return _ALGO_ALIASES[key]


def is_valid_combo(representation: str, metric: Metric) -> bool:
    """PCA projections take negative values, which Jensen-Shannon rejects."""
    return not (representation == "PCA_5" and metric is Metric.JENSEN_SHANNON)


def config_seed(representation: str, metric: Metric, algorithm: str, K: int) -> int:
    """Stable per-configuration seed, independent of grid order and resumes."""
    digest = hashlib.sha256(f"{representation}|{metric.value}|{algorithm}|{K}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


@dataclass(frozen=True)
class ExperimentConfig:
    representation: str
    metric: Metric
    algorithm: str
    K: int
    seed: int = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.representation not in _REPR_ALIASES.values():
            raise ConfigError(f"unknown representation '{self.representation}'")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm '{self.algorithm}'")
        if self.K < 1:
            raise ConfigError(f"K must be positive, got {self.K}")
        if not is_valid_combo(self.representation, self.metric):
            raise ConfigError("PCA_5 with JensenShannon is an invalid combination")
        if self.seed is None:
            object.__setattr__(
                self, "seed", config_seed(self.representation, self.metric, self.algorithm, self.K)
            )

    def key(self) -> tuple:
        return (self.representation, self.metric.value, self.algorithm, self.K)

    def label(self) -> str:
        return f"{self.representation}_{self.metric.value}_{self.algorithm}_K{self.K}"

    def as_dict(self) -> dict:
        return {
            "representation": self.representation,
            "metric": self.metric.value,
            "algorithm": self.algorithm,
            "K": self.K,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(
            representation=d["representation"],
            metric=Metric.parse(d["metric"]),
            algorithm=d["algorithm"],
            K=int(d["K"]),
            seed=d.get("seed"),
        )


def enumerate_grid(
    representations=None,
    metrics=None,
    algorithms=None,
    ks=None,
) -> list[ExperimentConfig]:
    """All valid configurations in deterministic (repr, metric, algo, K) order."""
    from .features import REPRESENTATIONS

    reps = representations or REPRESENTATIONS
    mets = metrics or list(Metric)
    algos = algorithms or ALGORITHMS
    kvals = ks or GRID_KS
    out = []
    for r in reps:
        for m in mets:
            if not is_valid_combo(r, m):
                continue
            for a in algos:
                for k in kvals:
                    out.append(ExperimentConfig(r, m, a, int(k)))
    return out


@dataclass
class FeatureBundle:
    base: FeatureMatrix          # representation values as produced
    standardized: FeatureMatrix  # zero-mean unit-variance view for cost/geometry


def build_feature_matrices(
    representation: str, panel: AlignedPanel, mapping: BlocMapping, seed: int
) -> FeatureBundle:
    if representation == "BlocShares":
        base = bloc_shares_features(panel, mapping)
    elif representation == "RawParty":
        base = raw_party_features(panel)
    elif representation == "PCA_5":
        base = pca_features(raw_party_features(panel), k=5, seed=seed)
    elif representation == "NMF_5":
        base = nmf_features(raw_party_features(panel), k=5, seed=seed)
    else:
        raise ConfigError(f"unknown representation '{representation}'")
    return FeatureBundle(base, standardize(base))


def distance_matrix_for(metric: Metric, bundle: FeatureBundle) -> DistanceMatrix:
    """Jensen-Shannon runs on the raw non-negative feature values; the other
    metrics run on the standardized view."""
    if metric is Metric.JENSEN_SHANNON:
        return pairwise_matrix(metric, bundle.base)
    return pairwise_matrix(metric, bundle.standardized)


def run_partitioner(
    config: ExperimentConfig,
    panel: AlignedPanel,
    mapping: BlocMapping,
    graph: ContiguityGraph,
    weights: CostWeights | None = None,
    sa_iterations: int | None = None,
) -> Partition:
    """Build the configured inputs and dispatch to the right algorithm."""
    bundle = build_feature_matrices(config.representation, panel, mapping, config.seed)
    if config.algorithm == "SA":
        params = SAParams(
            seed=config.seed,
            cost_weights=weights or CostWeights(),
            iterations=sa_iterations or SAParams().iterations,
        )
        return sa_partition(
            graph,
            bundle.standardized,
            panel.voter_weight,
            mean_bloc_shares(panel, mapping),
            config.K,
            params,
        )
    if config.algorithm == "Agglomerative":
        return agglomerative_partition(graph, distance_matrix_for(config.metric, bundle), config.K)
    if config.algorithm == "Louvain":
        weighted = edge_similarity_weights(graph, distance_matrix_for(config.metric, bundle))
        return louvain_partition(weighted, config.K, LouvainParams(seed=config.seed))
    if config.algorithm == "KMeans":
        return kmeans_partition(bundle.standardized, config.K, seed=config.seed)
    raise ConfigError(f"unknown algorithm '{config.algorithm}'")


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    partition: Partition | None
    report: EvaluationReport | None
    runtime_s: float
    status: str  # "ok" | "failed"
    error: str | None = None

    def as_dict(self) -> dict:
        out = {
            "config": self.config.as_dict(),
            "runtime_s": self.runtime_s,
            "status": self.status,
        }
        if self.partition is not None:
            out["assignment"] = self.partition.assignment
            out["achieved_K"] = self.partition.achieved_K
        if self.report is not None:
            out["metrics"] = self.report.as_dict()
        if self.error is not None:
            out["error"] = self.error
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        config = ExperimentConfig.from_dict(d["config"])
        partition = None
        if "assignment" in d:
            partition = Partition({m: int(v) for m, v in d["assignment"].items()}, config.K)
        report = None
        if "metrics" in d:
            m = d["metrics"]
            cost = PartitionCost(**m["cost"])
            report = EvaluationReport(
                silhouette=m["silhouette"],
                wcss=m["wcss"],
                population_cv=m["pop_cv"],
                disconnected_cantons=m["disconnected"],
                cost=cost,
            )
        return cls(config, partition, report, d["runtime_s"], d["status"], d.get("error"))


def run_config(
    config: ExperimentConfig,
    panel: AlignedPanel,
    mapping: BlocMapping,
    graph: ContiguityGraph,
    weights: CostWeights | None = None,
    sa_iterations: int | None = None,
) -> ExperimentResult:
    """Execute one configuration; failures are captured, never raised."""
    start = time.perf_counter()
    try:
        partition = run_partitioner(config, panel, mapping, graph, weights, sa_iterations)
        bundle = build_feature_matrices(config.representation, panel, mapping, config.seed)
        dmat = distance_matrix_for(config.metric, bundle)
        report = evaluate(
            partition,
            bundle.standardized,
            dmat,
            panel.voter_weight,
            graph,
            weights or CostWeights(),
        )
        return ExperimentResult(config, partition, report, time.perf_counter() - start, "ok")
    except Exception as exc:  # noqa: BLE001 - grid runs must never abort
        return ExperimentResult(config, None, None, time.perf_counter() - start, "failed", f"{type(exc).__name__}: {exc}")


SUMMARY_COLUMNS = (
    "repr,metric,algorithm,K,silhouette,wcss,pop_cv,disconnected,cost_total,runtime_s,status"
)


def summary_row(result: ExperimentResult) -> str:
    c = result.config
    if result.report is not None:
        r = result.report
        sil = "" if r.silhouette is None else repr(r.silhouette)
        fields = [sil, repr(r.wcss), repr(r.population_cv), str(r.disconnected_cantons), repr(r.cost.total)]
    else:
        fields = ["", "", "", "", ""]
    return ",".join(
        [c.representation, c.metric.value, c.algorithm, str(c.K)]
        + fields
        + [f"{result.runtime_s:.3f}", result.status]
    )


def write_summary(results: list[ExperimentResult], path: Path) -> None:
    ordered = sorted(results, key=lambda r: r.config.key())
    lines = [SUMMARY_COLUMNS] + [summary_row(r) for r in ordered]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _grid_worker(args) -> dict:
    config, panel, mapping, graph = args
    return run_config(config, panel, mapping, graph).as_dict()


def run_grid(
    panel: AlignedPanel,
    mapping: BlocMapping,
    graph: ContiguityGraph,
    out_dir: str | Path,
    parallelism: int = 1,
    configs: list[ExperimentConfig] | None = None,
) -> list[ExperimentResult]:
    """Run the configuration grid, persisting incrementally.

    Results append to ``results.jsonl`` as they complete, so interrupted runs
    resume by skipping configurations already present. ``summary.csv`` is
    rewritten at the end in deterministic configuration order.
    """
    if parallelism < 1:
        raise ConfigError("parallelism must be >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results_path = out / "results.jsonl"

    configs = configs if configs is not None else enumerate_grid()
    done: dict[tuple, ExperimentResult] = {}
    if results_path.exists():
        for line in results_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                result = ExperimentResult.from_dict(json.loads(line))
                done[result.config.key()] = result
    todo = [c for c in configs if c.key() not in done]

    with results_path.open("a", encoding="utf-8") as sink:
        if parallelism == 1 or len(todo) <= 1:
            for config in todo:
                result = run_config(config, panel, mapping, graph)
                done[config.key()] = result
                sink.write(json.dumps(result.as_dict()) + "\n")
                sink.flush()
        else:
            with ProcessPoolExecutor(max_workers=parallelism) as pool:
                jobs = [(c, panel, mapping, graph) for c in todo]
                for payload in pool.map(_grid_worker, jobs):
                    result = ExperimentResult.from_dict(payload)
                    done[result.config.key()] = result
                    sink.write(json.dumps(payload) + "\n")
                    sink.flush()

    results = [done[c.key()] for c in configs]
    write_summary(results, out / "summary.csv")
    return results


def sa_seed_sweep(
    config: ExperimentConfig,
    panel: AlignedPanel,
    mapping: BlocMapping,
    graph: ContiguityGraph,
    n_seeds: int = 30,
    iterations: int = 50_000,
) -> dict:
    """Seed-sensitivity sweep for one SA configuration.

    Runs seeds 0..n_seeds-1 at the given iteration budget and aggregates the
    silhouette and population CV.
    """
    if config.algorithm != "SA":
        raise ConfigError("seed sweep applies to SA configurations only")
    bundle = build_feature_matrices(config.representation, panel, mapping, config.seed)
    dmat = distance_matrix_for(config.metric, bundle)
    shares = mean_bloc_shares(panel, mapping)
    weights = panel.voter_weight
    per_seed = []
    for seed in range(n_seeds):
        params = SAParams(seed=seed, iterations=iterations)
        partition = sa_partition(graph, bundle.standardized, weights, shares, config.K, params)
        report = evaluate(partition, bundle.standardized, dmat, weights, graph)
        per_seed.append({"seed": seed, "silhouette": report.silhouette, "pop_cv": report.population_cv})

    def agg(key):
        vals = np.array([row[key] for row in per_seed], dtype=float)
        return {
            "mean": float(vals.mean()),
            "std": float(vals.std()),
            "min": float(vals.min()),
            "max": float(vals.max()),
        }

    return {
        "config": config.as_dict(),
        "n_seeds": n_seeds,
        "iterations": iterations,
        "silhouette": agg("silhouette"),
        "pop_cv": agg("pop_cv"),
        "per_seed": per_seed,
    }


def canton_profiles(partition: Partition, bloc_means: dict[str, tuple[float, ...]]) -> list[dict]:
    """Per-canton political profile rows: municipality count and mean bloc
    vote share in percent."""
    rows = []
    for k, members in enumerate(partition.members()):
        shares = np.array([bloc_means[m] for m in members])
        mean = shares.mean(axis=0) * 100.0
        row = {"canton": k, "munis": len(members)}
        row.update({bloc: float(mean[j]) for j, bloc in enumerate(BLOCS)})
        rows.append(row)
    return rows


def export_partition_geojson(
    partition: Partition,
    polygons: dict[str, BoundaryPolygon],
    bloc_means: dict[str, tuple[float, ...]],
    display_names: dict[str, str],
) -> bytes:
    """GeoJSON FeatureCollection of the partition, one Feature per
    municipality with name, canton, and bloc-share properties."""
    missing = sorted(m for m in partition.assignment if m not in polygons)
    if missing:
        raise ConfigError(f"no polygon for municipalities: {missing[:10]}")
    features = []
    for m in sorted(partition.assignment):
        poly = polygons[m]
        features.append({
            "type": "Feature",
            "properties": {
                "name": display_names.get(m, m),
                "municipality_id": m,
                "canton": partition.assignment[m],
                "bloc_means": {bloc: bloc_means[m][j] for j, bloc in enumerate(BLOCS)},
            },
            "geometry": {
                "type": "Polygon",
                "coordinates": [[list(pt) for pt in ring] for ring in poly.rings],
            },
        })
    return json.dumps({"type": "FeatureCollection", "features": features}).encode("utf-8")


STABILITY_PRESETS = {
    "representative": [
        ("BlocShares", Metric.EUCLIDEAN, "Louvain"),
        ("BlocShares", Metric.COSINE, "Agglomerative"),
        ("NMF_5", Metric.EUCLIDEAN, "SA"),
        ("BlocShares", Metric.EUCLIDEAN, "SA"),
        ("RawParty", Metric.COSINE, "SA"),
        ("PCA_5", Metric.EUCLIDEAN, "SA"),
    ],
}
_PRESET_ALIASES = {"default": "representative", "table7": "representative"}
STABILITY_PRESET_K = 5


def stability_preset(name: str) -> list[ExperimentConfig]:
    key = _PRESET_ALIASES.get(name.strip().lower(), name.strip().lower())
    if key not in STABILITY_PRESETS:
        raise ConfigError(f"unknown stability preset '{name}'")
    return [
        ExperimentConfig(rep, metric, algo, STABILITY_PRESET_K)
        for rep, metric, algo in STABILITY_PRESETS[key]
    ]


def run_stability(
    preset: str,
    panel: AlignedPanel,
    mapping: BlocMapping,
    graph: ContiguityGraph,
) -> list[tuple[ExperimentConfig, StabilityReport]]:
    """Cross-election stability for every configuration in a preset."""
    per_election = [panel.restrict(e) for e in panel.election_ids]
    out = []
    for config in stability_preset(preset):
        report = stability_analysis(config, per_election, graph, mapping)
        out.append((config, report))
    return out


@dataclass
class DataBundle:
    """Everything loaded from one data directory, ready for experiments."""

    panel: AlignedPanel
    mapping: BlocMapping
    aliases: dict[str, str]
    polygons: dict[str, BoundaryPolygon]
    raw_graph: ContiguityGraph
    graph: ContiguityGraph            # subset to the panel, then augmented
    mean_shares: dict[str, tuple[float, ...]] = field(repr=False, default=None)  # type: ignore[assignment]


def load_data_dir(data_dir: str | Path, geo_path: str | Path | None = None) -> DataBundle:
    """Load election files, bloc mapping, aliases, and boundary polygons from
    a directory, align the panel, and build the augmented contiguity graph.

    Expected files: ``election_1.csv`` .. ``election_5.csv``, ``blocs.csv``,
    ``municipalities.geojson``, and optionally ``aliases.csv``.
    """
    data = Path(data_dir)
    alias_path = data / "aliases.csv"
    aliases = parse_alias_table(alias_path.read_text(encoding="utf-8")) if alias_path.exists() else {}
    mapping = parse_bloc_mapping((data / "blocs.csv").read_text(encoding="utf-8"))
    datasets = [
        parse_election_file((data / f"election_{e}.csv").read_bytes(), e, aliases)
        for e in range(1, 6)
    ]
    panel = align_panel(datasets)

    geo = Path(geo_path) if geo_path else data / "municipalities.geojson"
    polygons = parse_geojson(geo.read_text(encoding="utf-8"), aliases)
    poly_map = {p.municipality_id: p for p in polygons}

    raw_graph = build_adjacency(polygons)
    sub = subset_graph(raw_graph, panel.municipality_ids)
    bloc_feats = standardize(bloc_shares_features(panel, mapping))
    mean_shares = mean_bloc_shares(panel, mapping)
    graph = augment_graph(sub, bloc_feats, mean_shares)

    return DataBundle(panel, mapping, aliases, poly_map, raw_graph, graph, mean_shares)
