import numpy as np
import pytest
from fastapi.testclient import TestClient

from cantonize.experiments import enumerate_grid, run_grid
from cantonize.service import _WhatIfGate, create_app


@pytest.fixture(scope="module")
def served(lattice_dir, lattice, tmp_path_factory):
    results_dir = tmp_path_factory.mktemp("results")
    configs = enumerate_grid(
        representations=["BlocShares"], metrics=None, algorithms=["Agglomerative", "Louvain"], ks=[3, 5]
    )
    run_grid(lattice.panel, lattice.mapping, lattice.graph, results_dir, configs=configs)
    app = create_app(lattice_dir, results_dir)
    return TestClient(app), results_dir


class TestStartup:
    def test_missing_data_refuses_to_start(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            create_app(tmp_path, tmp_path)

    def test_corrupt_data_refuses_to_start(self, tmp_path, lattice_dir):
        for name in ("blocs.csv", "municipalities.geojson", "aliases.csv"):
            (tmp_path / name).write_text((lattice_dir / name).read_text())
        for e in range(1, 6):
            (tmp_path / f"election_{e}.csv").write_text("name,eligible,total\n")
        with pytest.raises(Exception):
            create_app(tmp_path, tmp_path)


class TestReadEndpoints:
    def test_geo_serves_all_municipalities(self, served, lattice):
        client, _ = served
        payload = client.get("/api/geo").json()
        assert payload["type"] == "FeatureCollection"
        assert len(payload["features"]) == lattice.panel.n
        props = payload["features"][0]["properties"]
        assert {"name", "municipality_id", "bloc_means"} <= set(props)

    def test_configs_lists_precomputed(self, served):
        client, _ = served
        payload = client.get("/api/configs").json()
        assert payload["grid_size"] == 264
        assert len(payload["configs"]) == 6 * 2  # 3 metrics x 2 algos x 2 K
        assert all(row["status"] == "ok" for row in payload["configs"])

    def test_partition_found(self, served):
        client, _ = served
        r = client.get("/api/partition", params={"repr": "blocshares", "metric": "euclidean", "algo": "louvain", "k": 3})
        assert r.status_code == 200
        body = r.json()
        assert body["achieved_K"] == 3
        assert len(body["geojson"]["features"]) == 24
        assert len(body["profiles"]) == 3
        assert body["report"]["disconnected"] == 0

    def test_partition_unknown_404(self, served):
        client, _ = served
        r = client.get("/api/partition", params={"repr": "nmf_5", "metric": "cosine", "algo": "sa", "k": 7})
        assert r.status_code == 404

    def test_partition_invalid_combo_400(self, served):
        client, _ = served
        r = client.get("/api/partition", params={"repr": "pca_5", "metric": "jensenshannon", "algo": "sa", "k": 3})
        assert r.status_code == 400


class TestWhatIf:
    def post(self, client, **overrides):
        body = {
            "representation": "blocshares", "metric": "euclidean",
            "algorithm": "sa", "k": 3, "sa_iterations": 400, "seed": 1,
        }
        body.update(overrides)
        return client.post("/api/whatif", json=body)

    def test_valid_request_computes(self, served):
        client, _ = served
        r = self.post(client)
        assert r.status_code == 200
        body = r.json()
        assert body["achieved_K"] == 3
        assert body["config"]["weights"] == {"alpha": 0.4, "beta": 0.4, "gamma": 0.2}
        assert body["report"]["disconnected"] == 0

    def test_same_seed_identical_responses(self, served):
        client, _ = served
        a = self.post(client, alpha=1.0, beta=0.0, gamma=0.0).json()
        b = self.post(client, alpha=1.0, beta=0.0, gamma=0.0).json()
        a.pop("elapsed_s"), b.pop("elapsed_s")
        a.pop("runtime_s"), b.pop("runtime_s")
        assert a == b

    def test_invalid_combo_400(self, served):
        client, _ = served
        assert self.post(client, representation="pca_5", metric="jensenshannon").status_code == 400

    def test_unknown_names_400(self, served):
        client, _ = served
        assert self.post(client, representation="umap").status_code == 400
        assert self.post(client, metric="manhattan").status_code == 400
        assert self.post(client, algorithm="spectral").status_code == 400

    def test_negative_weight_422_validation(self, served):
        client, _ = served
        assert self.post(client, alpha=-0.5).status_code == 422

    def test_computation_failure_422(self, served):
        client, _ = served
        r = self.post(client, k=999)
        assert r.status_code == 422
        assert "failed" in r.json()["detail"]

    def test_custom_weights_steer_compactness(self, served):
        client, _ = served
        low = self.post(client, algorithm="sa", gamma=0.05, alpha=0.55, beta=0.4, seed=11).json()
        high = self.post(client, algorithm="sa", gamma=3.0, alpha=0.05, beta=0.05, seed=11).json()
        assert high["report"]["cost"]["compactness"] <= low["report"]["cost"]["compactness"] + 1e-9


class TestStabilityEndpoint:
    def test_louvain_preset_uniform_unit_matrix(self, served):
        client, results_dir = served
        r = client.get("/api/stability", params={"preset": "representative"})
        assert r.status_code == 200
        payload = r.json()
        louvain_rows = [
            row for row in payload["reports"]
            if row["config"]["algorithm"] == "Louvain"
        ]
        assert louvain_rows
        matrix = np.array(louvain_rows[0]["report"]["pairwise_ari"])
        assert np.allclose(matrix, 1.0)
        cached = list(results_dir.glob("stability_*.json"))
        assert cached  # persisted for subsequent requests

    def test_cache_reused(self, served):
        client, results_dir = served
        first = client.get("/api/stability", params={"preset": "representative"}).json()
        again = client.get("/api/stability", params={"preset": "representative"}).json()
        assert first == again

    def test_unknown_preset_400(self, served):
        client, _ = served
        assert client.get("/api/stability", params={"preset": "bogus"}).status_code == 400


class TestWhatIfGate:
    def test_capacity_enforced(self):
        gate = _WhatIfGate(workers=1, queue_length=1)
        assert gate.try_enter()
        assert gate.try_enter()
        assert not gate.try_enter()  # workers + queue exhausted
        gate.leave()
        assert gate.try_enter()
