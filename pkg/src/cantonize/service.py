"""HTTP API serving partitions, metrics, stability reports, and what-if runs
to the map-explorer UI."""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.gzip import GZipMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .distances import Metric
from .ingest import BLOCS
from .experiments import (
    DataBundle,
    ExperimentConfig,
    ExperimentResult,
    canton_profiles,
    enumerate_grid,
    export_partition_geojson,
    is_valid_combo,
    load_data_dir,
    parse_algorithm,
    parse_representation,
    run_config,
    run_stability,
    stability_preset,
)
from .objective import CostWeights


class WhatIfRequest(BaseModel):
    representation: str
    metric: str
    algorithm: str
    k: int = Field(ge=1)
    alpha: float = Field(default=0.4, ge=0)
    beta: float = Field(default=0.4, ge=0)
    gamma: float = Field(default=0.2, ge=0)
    sa_iterations: int | None = Field(default=None, ge=1)
    seed: int | None = None


class _WhatIfGate:
    """Bounded worker pool with a bounded wait queue for heavy computations."""

    def __init__(self, workers: int, queue_length: int):
        self._workers = threading.Semaphore(workers)
        self._lock = threading.Lock()
        self._pending = 0
        self._capacity = workers + queue_length

    def try_enter(self) -> bool:
        with self._lock:
            if self._pending >= self._capacity:
                return False
            self._pending += 1
            return True

    def leave(self):
        with self._lock:
            self._pending -= 1

    def __enter__(self):
        self._workers.acquire()
        return self

    def __exit__(self, *exc):
        self._workers.release()


def _parse_config(representation: str, metric: str, algorithm: str, k: int, seed=None) -> ExperimentConfig:
    try:
        rep = parse_representation(representation)
        met = Metric.parse(metric)
        algo = parse_algorithm(algorithm)
        if not is_valid_combo(rep, met):
            raise HTTPException(400, "PCA_5 with JensenShannon is an invalid combination")
        return ExperimentConfig(rep, met, algo, k, seed)
    except HTTPException:
        raise
    except Exception as exc:
        raise HTTPException(400, str(exc)) from None


def _partition_payload(bundle: DataBundle, result: ExperimentResult) -> dict:
    geojson = export_partition_geojson(
        result.partition, bundle.polygons, bundle.mean_shares, bundle.panel.names
    )
    return {
        "config": result.config.as_dict(),
        "achieved_K": result.partition.achieved_K,
        "report": result.report.as_dict() if result.report else None,
        "runtime_s": result.runtime_s,
        "profiles": canton_profiles(result.partition, bundle.mean_shares),
        "geojson": json.loads(geojson),
    }


def create_app(
    data_dir: str | Path,
    results_dir: str | Path,
    whatif_workers: int = 2,
    whatif_queue: int = 8,
    frontend_dir: str | Path | None = None,
    geo_path: str | Path | None = None,
) -> FastAPI:
    """Assemble the API server.

    Data files are loaded and validated up front; a broken data directory
    refuses to start. Results are read from ``results_dir`` (written by the
    grid/stability commands); what-if requests compute fresh partitions on a
    bounded worker pool.
    """
    bundle = load_data_dir(data_dir, geo_path)
    results_path = Path(results_dir) / "results.jsonl"
    stability_dir = Path(results_dir)
    gate = _WhatIfGate(whatif_workers, whatif_queue)
    app = FastAPI(title="canton explorer api")
    app.add_middleware(GZipMiddleware, minimum_size=1024)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def load_results() -> dict[tuple, ExperimentResult]:
        out: dict[tuple, ExperimentResult] = {}
        if results_path.exists():
            for line in results_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    result = ExperimentResult.from_dict(json.loads(line))
                    out[result.config.key()] = result
        return out

    @app.get("/api/health")
    def health():
        return {"status": "ok", "municipalities": bundle.panel.n}

    @app.get("/api/geo")
    def geo():
        features = []
        for m in bundle.panel.municipality_ids:
            poly = bundle.polygons[m]
            features.append({
                "type": "Feature",
                "properties": {
                    "name": bundle.panel.names[m],
                    "municipality_id": m,
                    "bloc_means": {
                        bloc: bundle.mean_shares[m][j] for j, bloc in enumerate(BLOCS)
                    },
                },
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[list(pt) for pt in ring] for ring in poly.rings],
                },
            })
        return {"type": "FeatureCollection", "features": features}

    @app.get("/api/configs")
    def configs():
        results = load_results()
        rows = []
        for result in sorted(results.values(), key=lambda r: r.config.key()):
            row = result.config.as_dict()
            row["status"] = result.status
            if result.report:
                row["silhouette"] = result.report.silhouette
                row["pop_cv"] = result.report.population_cv
                row["disconnected"] = result.report.disconnected_cantons
                row["cost_total"] = result.report.cost.total
            rows.append(row)
        return {"configs": rows, "grid_size": len(enumerate_grid())}

    @app.get("/api/partition")
    def partition(
        repr: str = Query(...),
        metric: str = Query(...),
        algo: str = Query(...),
        k: int = Query(..., ge=1),
    ):
        config = _parse_config(repr, metric, algo, k)
        results = load_results()
        result = results.get(config.key())
        if result is None or result.partition is None:
            raise HTTPException(404, f"no precomputed result for {config.label()}")
        return _partition_payload(bundle, result)

    @app.post("/api/whatif")
    def whatif(request: WhatIfRequest):
        config = _parse_config(
            request.representation, request.metric, request.algorithm, request.k, request.seed
        )
        weights = CostWeights(request.alpha, request.beta, request.gamma)
        if not gate.try_enter():
            raise HTTPException(503, "what-if queue is full; retry shortly")
        try:
            with gate:
                start = time.perf_counter()
                result = run_config(
                    config,
                    bundle.panel,
                    bundle.mapping,
                    bundle.graph,
                    weights=weights,
                    sa_iterations=request.sa_iterations,
                )
                elapsed = time.perf_counter() - start
        finally:
            gate.leave()
        if result.status != "ok":
            raise HTTPException(422, f"what-if computation failed: {result.error}")
        payload = _partition_payload(bundle, result)
        payload["config"]["weights"] = {
            "alpha": request.alpha, "beta": request.beta, "gamma": request.gamma,
        }
        payload["config"]["sa_iterations"] = request.sa_iterations
        payload["elapsed_s"] = elapsed
        return payload

    @app.get("/api/stability")
    def stability(preset: str = Query("representative")):
        try:
            configs = stability_preset(preset)
        except Exception as exc:
            raise HTTPException(400, str(exc)) from None
        cache = stability_dir / f"stability_{configs[0].K}_{preset.strip().lower()}.json"
        if cache.exists():
            return json.loads(cache.read_text(encoding="utf-8"))
        rows = run_stability(preset, bundle.panel, bundle.mapping, bundle.graph)
        payload = {
            "preset": preset,
            "reports": [
                {"config": config.as_dict(), "report": report.as_dict()}
                for config, report in rows
            ],
        }
        stability_dir.mkdir(parents=True, exist_ok=True)
        cache.write_text(json.dumps(payload), encoding="utf-8")
        return payload

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
