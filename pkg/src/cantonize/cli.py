"""Command-line entry points for the full pipeline."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .distances import Metric
from .experiments import (
    ExperimentConfig,
    export_partition_geojson,
    canton_profiles,
    load_data_dir,
    parse_algorithm,
    parse_representation,
    run_config,
    run_grid,
    run_stability,
    sa_seed_sweep,
    summary_row,
    SUMMARY_COLUMNS,
)
from .ingest import panel_to_json
from .objective import CostWeights


def _config_from_flags(repr_, metric, algo, k, seed=None) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            parse_representation(repr_), Metric.parse(metric), parse_algorithm(algo), k, seed
        )
    except Exception as exc:
        raise click.UsageError(str(exc)) from None


def _load(data, geo):
    try:
        return load_data_dir(data, geo)
    except FileNotFoundError as exc:
        raise click.UsageError(f"missing data file: {exc}") from None
    except Exception as exc:
        raise click.ClickException(str(exc)) from None


data_opt = click.option("--data", required=True, type=click.Path(exists=True, file_okay=False), help="Data directory with election CSVs, blocs.csv, municipalities.geojson.")
geo_opt = click.option("--geo", type=click.Path(exists=True, dir_okay=False), default=None, help="Override path to the boundary GeoJSON.")
out_opt = click.option("--out", required=True, type=click.Path(file_okay=False), help="Output directory.")


@click.group()
def main():
    """Partition municipalities into contiguous political cantons."""


@main.command()
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--kind", type=click.Choice(["full", "lattice"]), default="full", show_default=True)
@click.option("--seed", type=int, default=None)
def fixtures(out, kind, seed):
    """Generate a synthetic dataset in the artifact's input formats."""
    from . import fixtures as fx

    if kind == "full":
        fx.generate_dataset(out, seed=seed if seed is not None else 7)
    else:
        fx.generate_lattice(out, seed=seed if seed is not None else 11)
    click.echo(f"wrote {kind} dataset to {out}")


@main.command()
@data_opt
@geo_opt
@out_opt
def ingest(data, geo, out):
    """Parse and align the election panel; write panel.json."""
    bundle = _load(data, geo)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "panel.json").write_text(panel_to_json(bundle.panel), encoding="utf-8")
    click.echo(
        f"aligned {bundle.panel.n} municipalities across elections "
        f"{bundle.panel.election_ids}; wrote {out_dir / 'panel.json'}"
    )


@main.command()
@data_opt
@geo_opt
@out_opt
def graph(data, geo, out):
    """Build the contiguity graph, augment it, and write graph.json."""
    bundle = _load(data, geo)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "graph.json").write_text(bundle.graph.to_json(), encoding="utf-8")
    kinds = {}
    for e in bundle.graph.edges.values():
        kinds[e.kind] = kinds.get(e.kind, 0) + 1
    click.echo(
        f"graph: {bundle.graph.n} nodes, {len(bundle.graph.edges)} edges "
        f"({', '.join(f'{k}={v}' for k, v in sorted(kinds.items()))}), "
        f"connected={bundle.graph.is_connected()}; wrote {out_dir / 'graph.json'}"
    )


@main.command()
@data_opt
@geo_opt
@out_opt
@click.option("--repr", "repr_", required=True, help="blocshares | rawparty | pca_5 | nmf_5")
@click.option("--metric", required=True, help="euclidean | cosine | jensenshannon")
@click.option("--algo", required=True, help="sa | agglomerative | louvain | kmeans")
@click.option("--k", required=True, type=int)
@click.option("--alpha", type=float, default=0.4, show_default=True)
@click.option("--beta", type=float, default=0.4, show_default=True)
@click.option("--gamma", type=float, default=0.2, show_default=True)
@click.option("--iterations", type=int, default=None, help="SA iteration override.")
@click.option("--seed", type=int, default=None)
def run(data, geo, out, repr_, metric, algo, k, alpha, beta, gamma, iterations, seed):
    """Run a single configuration and append its result row."""
    bundle = _load(data, geo)
    config = _config_from_flags(repr_, metric, algo, k, seed)
    result = run_config(
        config, bundle.panel, bundle.mapping, bundle.graph,
        weights=CostWeights(alpha, beta, gamma), sa_iterations=iterations,
    )
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "results.jsonl").open("a", encoding="utf-8") as sink:
        sink.write(json.dumps(result.as_dict()) + "\n")
    click.echo(SUMMARY_COLUMNS)
    click.echo(summary_row(result))
    if result.status != "ok":
        raise click.ClickException(f"configuration failed: {result.error}")


@main.command()
@data_opt
@geo_opt
@out_opt
@click.option("--parallelism", type=int, default=1, show_default=True)
def grid(data, geo, out, parallelism):
    """Run the full configuration grid; write results.jsonl and summary.csv."""
    bundle = _load(data, geo)
    results = run_grid(bundle.panel, bundle.mapping, bundle.graph, out, parallelism=parallelism)
    failed = [r for r in results if r.status != "ok"]
    click.echo(f"{len(results)} configurations, {len(failed)} failed; wrote {Path(out) / 'summary.csv'}")
    if failed:
        for r in failed[:10]:
            click.echo(f"  failed: {r.config.label()}: {r.error}")
        raise click.ClickException("grid had failures")


@main.command()
@data_opt
@geo_opt
@out_opt
@click.option("--preset", default="representative", show_default=True)
def stability(data, geo, out, preset):
    """Cross-election stability for a preset of configurations."""
    bundle = _load(data, geo)
    try:
        rows = run_stability(preset, bundle.panel, bundle.mapping, bundle.graph)
    except Exception as exc:
        raise click.ClickException(str(exc)) from None
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "preset": preset,
        "reports": [
            {"config": config.as_dict(), "report": report.as_dict()}
            for config, report in rows
        ],
    }
    path = out_dir / f"stability_{rows[0][0].K}_{preset.strip().lower()}.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    click.echo("repr,metric,algorithm,K,mean_ari,std_ari,mean_nmi,std_nmi")
    for config, report in rows:
        click.echo(
            f"{config.representation},{config.metric.value},{config.algorithm},{config.K},"
            f"{report.mean_ari:.3f},{report.std_ari:.3f},{report.mean_nmi:.3f},{report.std_nmi:.3f}"
        )
    click.echo(f"wrote {path}")


@main.command()
@data_opt
@geo_opt
@out_opt
@click.option("--repr", "repr_", required=True)
@click.option("--metric", required=True)
@click.option("--k", required=True, type=int)
@click.option("--seeds", "n_seeds", type=int, default=30, show_default=True)
@click.option("--iterations", type=int, default=50_000, show_default=True)
def sweep(data, geo, out, repr_, metric, k, n_seeds, iterations):
    """SA seed-sensitivity sweep for one configuration."""
    bundle = _load(data, geo)
    config = _config_from_flags(repr_, metric, "sa", k)
    summary = sa_seed_sweep(
        config, bundle.panel, bundle.mapping, bundle.graph,
        n_seeds=n_seeds, iterations=iterations,
    )
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"sweep_{config.label()}.json"
    path.write_text(json.dumps(summary), encoding="utf-8")
    sil, cv = summary["silhouette"], summary["pop_cv"]
    click.echo(
        f"{n_seeds} seeds x {iterations} iterations: "
        f"silhouette mean={sil['mean']:.3f} std={sil['std']:.3f} range=[{sil['min']:.3f}, {sil['max']:.3f}]; "
        f"pop CV mean={cv['mean']:.3f} std={cv['std']:.3f}"
    )
    click.echo(f"wrote {path}")


@main.command()
@data_opt
@geo_opt
@out_opt
@click.option("--repr", "repr_", required=True)
@click.option("--metric", required=True)
@click.option("--algo", required=True)
@click.option("--k", required=True, type=int)
def export(data, geo, out, repr_, metric, algo, k):
    """Export a partition as GeoJSON plus a canton-profile sidecar."""
    bundle = _load(data, geo)
    config = _config_from_flags(repr_, metric, algo, k)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    result = None
    results_path = out_dir / "results.jsonl"
    if results_path.exists():
        from .experiments import ExperimentResult

        for line in results_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                row = ExperimentResult.from_dict(json.loads(line))
                if row.config.key() == config.key():
                    result = row
                    break
    if result is None or result.partition is None:
        result = run_config(config, bundle.panel, bundle.mapping, bundle.graph)
        if result.status != "ok":
            raise click.ClickException(f"configuration failed: {result.error}")

    geojson = export_partition_geojson(
        result.partition, bundle.polygons, bundle.mean_shares, bundle.panel.names
    )
    geo_path = out_dir / f"partition_{config.label()}.geojson"
    geo_path.write_bytes(geojson)
    profiles = canton_profiles(result.partition, bundle.mean_shares)
    profile_path = out_dir / f"partition_{config.label()}_profiles.json"
    profile_path.write_text(json.dumps(profiles), encoding="utf-8")
    click.echo(f"wrote {geo_path} and {profile_path}")


@main.command()
@data_opt
@geo_opt
@click.option("--out", "results_dir", required=True, type=click.Path(file_okay=False), help="Results directory (precomputed grid/stability output).")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--frontend", type=click.Path(file_okay=False), default=None, help="Built UI directory to serve at /.")
@click.option("--whatif-workers", type=int, default=2, show_default=True)
def serve(data, geo, results_dir, port, host, frontend, whatif_workers):
    """Serve the HTTP API (and optionally the built UI)."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(
            data, results_dir,
            whatif_workers=whatif_workers, frontend_dir=frontend, geo_path=geo,
        )
    except Exception as exc:
        raise click.ClickException(f"refusing to start: {exc}") from None
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
