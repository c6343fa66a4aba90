import json

import pytest

from cantonize.distances import Metric
from cantonize.experiments import (
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    canton_profiles,
    config_seed,
    enumerate_grid,
    export_partition_geojson,
    is_valid_combo,
    run_config,
    run_grid,
    run_partitioner,
    sa_seed_sweep,
    stability_preset,
)
from cantonize.ingest import BLOCS
from cantonize.partition import Partition


class TestGridEnumeration:
    def test_grid_has_264_configs(self):
        assert len(enumerate_grid()) == 264

    def test_24_exclusions(self):
        full = 4 * 3 * 4 * 6
        excluded = full - len(enumerate_grid())
        assert excluded == 24
        assert all(
            not (c.representation == "PCA_5" and c.metric is Metric.JENSEN_SHANNON)
            for c in enumerate_grid()
        )

    def test_single_k_restriction(self):
        assert len(enumerate_grid(ks=[5])) == 44

    def test_per_algorithm_counts(self):
        grid = enumerate_grid()
        for algo in ("SA", "Agglomerative", "Louvain", "KMeans"):
            assert sum(1 for c in grid if c.algorithm == algo) == 66

    def test_repeated_calls_identical(self):
        assert enumerate_grid() == enumerate_grid()

    def test_deterministic_order(self):
        grid = enumerate_grid()
        keys = [c.key() for c in grid]
        assert keys == sorted(keys, key=lambda k: (
            ["BlocShares", "RawParty", "PCA_5", "NMF_5"].index(k[0]),
            ["Euclidean", "Cosine", "JensenShannon"].index(k[1]),
            ["SA", "Agglomerative", "Louvain", "KMeans"].index(k[2]),
            k[3],
        ))

    def test_invalid_combo_constructor_rejected(self):
        with pytest.raises(ConfigError, match="invalid combination"):
            ExperimentConfig("PCA_5", Metric.JENSEN_SHANNON, "SA", 3)
        assert not is_valid_combo("PCA_5", Metric.JENSEN_SHANNON)

    def test_seed_derivation_stable(self):
        a = config_seed("BlocShares", Metric.EUCLIDEAN, "SA", 3)
        b = config_seed("BlocShares", Metric.EUCLIDEAN, "SA", 3)
        c = config_seed("BlocShares", Metric.EUCLIDEAN, "SA", 5)
        assert a == b != c
        assert ExperimentConfig("BlocShares", Metric.EUCLIDEAN, "SA", 3).seed == a


class TestRunConfig:
    def test_contiguous_algorithms_have_zero_disconnected(self, lattice):
        for algo in ("SA", "Agglomerative", "Louvain"):
            config = ExperimentConfig("NMF_5", Metric.COSINE, algo, 3)
            result = run_config(config, lattice.panel, lattice.mapping, lattice.graph)
            assert result.status == "ok"
            assert result.report.disconnected_cantons == 0

    def test_failure_captured_not_raised(self, lattice):
        config = ExperimentConfig("BlocShares", Metric.EUCLIDEAN, "KMeans", 999)
        result = run_config(config, lattice.panel, lattice.mapping, lattice.graph)
        assert result.status == "failed"
        assert "out of range" in result.error
        assert result.partition is None

    def test_result_roundtrip(self, lattice):
        config = ExperimentConfig("RawParty", Metric.EUCLIDEAN, "KMeans", 4)
        result = run_config(config, lattice.panel, lattice.mapping, lattice.graph)
        back = ExperimentResult.from_dict(json.loads(json.dumps(result.as_dict())))
        assert back.config == result.config
        assert back.partition.assignment == result.partition.assignment
        assert back.report == result.report
        assert back.status == result.status

    def test_jsd_runs_on_nonnegative_representations(self, lattice):
        for rep in ("BlocShares", "RawParty", "NMF_5"):
            config = ExperimentConfig(rep, Metric.JENSEN_SHANNON, "Agglomerative", 3)
            result = run_config(config, lattice.panel, lattice.mapping, lattice.graph)
            assert result.status == "ok", result.error


class TestRunGrid:
    def small_grid(self):
        return enumerate_grid(
            representations=["BlocShares", "NMF_5"],
            metrics=[Metric.EUCLIDEAN],
            algorithms=["Agglomerative", "KMeans"],
            ks=[3, 5],
        )

    def test_writes_results_and_summary(self, lattice, tmp_path):
        configs = self.small_grid()
        results = run_grid(lattice.panel, lattice.mapping, lattice.graph, tmp_path, configs=configs)
        assert len(results) == 8
        assert all(r.status == "ok" for r in results)
        lines = (tmp_path / "results.jsonl").read_text().strip().splitlines()
        assert len(lines) == 8
        summary = (tmp_path / "summary.csv").read_text().strip().splitlines()
        assert summary[0].startswith("repr,metric,algorithm,K,silhouette")
        assert len(summary) == 9

    def test_resume_skips_completed(self, lattice, tmp_path):
        configs = self.small_grid()
        run_grid(lattice.panel, lattice.mapping, lattice.graph, tmp_path, configs=configs[:3])
        first = (tmp_path / "results.jsonl").read_text().strip().splitlines()
        run_grid(lattice.panel, lattice.mapping, lattice.graph, tmp_path, configs=configs)
        second = (tmp_path / "results.jsonl").read_text().strip().splitlines()
        assert second[:3] == first  # untouched rows, not recomputed
        assert len(second) == 8

    def test_parallelism_matches_serial(self, lattice, tmp_path):
        configs = self.small_grid()
        run_grid(lattice.panel, lattice.mapping, lattice.graph, tmp_path / "p1", parallelism=1, configs=configs)
        run_grid(lattice.panel, lattice.mapping, lattice.graph, tmp_path / "p4", parallelism=4, configs=configs)

        def rows_without_runtime(path):
            lines = (path / "summary.csv").read_text().strip().splitlines()
            header = lines[0].split(",")
            drop = header.index("runtime_s")
            return sorted(",".join(x for i, x in enumerate(r.split(",")) if i != drop) for r in lines[1:])

        assert rows_without_runtime(tmp_path / "p1") == rows_without_runtime(tmp_path / "p4")


class TestSeedSweep:
    def test_aggregates_ordered(self, lattice):
        config = ExperimentConfig("BlocShares", Metric.EUCLIDEAN, "SA", 3)
        summary = sa_seed_sweep(config, lattice.panel, lattice.mapping, lattice.graph, n_seeds=3, iterations=400)
        for key in ("silhouette", "pop_cv"):
            agg = summary[key]
            assert agg["min"] <= agg["mean"] <= agg["max"]
        assert len(summary["per_seed"]) == 3

    def test_single_seed_zero_std(self, lattice):
        config = ExperimentConfig("BlocShares", Metric.EUCLIDEAN, "SA", 3)
        summary = sa_seed_sweep(config, lattice.panel, lattice.mapping, lattice.graph, n_seeds=1, iterations=300)
        assert summary["silhouette"]["std"] == 0.0
        assert summary["pop_cv"]["std"] == 0.0

    def test_non_sa_rejected(self, lattice):
        config = ExperimentConfig("BlocShares", Metric.EUCLIDEAN, "KMeans", 3)
        with pytest.raises(ConfigError, match="SA"):
            sa_seed_sweep(config, lattice.panel, lattice.mapping, lattice.graph, n_seeds=1, iterations=10)


class TestExport:
    def test_geojson_has_distinct_cantons_and_profiles(self, lattice):
        config = ExperimentConfig("BlocShares", Metric.EUCLIDEAN, "Agglomerative", 3)
        part = run_partitioner(config, lattice.panel, lattice.mapping, lattice.graph)
        payload = export_partition_geojson(
            part, lattice.polygons, lattice.mean_shares, lattice.panel.names
        )
        geo = json.loads(payload.decode("utf-8"))
        assert len(geo["features"]) == lattice.panel.n
        cantons = {f["properties"]["canton"] for f in geo["features"]}
        assert cantons == {0, 1, 2}
        profiles = canton_profiles(part, lattice.mean_shares)
        assert len(profiles) == 3
        assert sum(row["munis"] for row in profiles) == lattice.panel.n
        for row in profiles:
            assert sum(row[b] for b in BLOCS) <= 100.0 + 1e-9

    def test_single_municipality_export(self, lattice):
        m = lattice.panel.municipality_ids[0]
        part = Partition({m: 0}, 1)
        payload = export_partition_geojson(part, lattice.polygons, lattice.mean_shares, lattice.panel.names)
        geo = json.loads(payload.decode("utf-8"))
        assert len(geo["features"]) == 1
        assert geo["features"][0]["properties"]["canton"] == 0

    def test_missing_polygon_listed(self, lattice):
        part = Partition({"nowhere town": 0}, 1)
        with pytest.raises(ConfigError, match="nowhere town"):
            export_partition_geojson(part, lattice.polygons, {"nowhere town": (0,) * 5}, {})


class TestStabilityPreset:
    def test_six_configs_at_k5(self):
        configs = stability_preset("representative")
        assert len(configs) == 6
        assert all(c.K == 5 for c in configs)
        assert configs[0].algorithm == "Louvain"

    def test_aliases_accepted(self):
        assert stability_preset("default") == stability_preset("representative")
        assert stability_preset("table7") == stability_preset("representative")

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError):
            stability_preset("nonsense")
