import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cantonize.experiments import load_data_dir
from cantonize.features import FeatureMatrix
from cantonize.fixtures import generate_dataset, generate_lattice
from cantonize.geograph import ContiguityGraph, Edge
from cantonize.partition import Partition


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "full"
    generate_dataset(out)
    return out


@pytest.fixture(scope="session")
def bundle(dataset_dir):
    return load_data_dir(dataset_dir)


@pytest.fixture(scope="session")
def lattice_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "lattice"
    generate_lattice(out)
    return out


@pytest.fixture(scope="session")
def lattice(lattice_dir):
    return load_data_dir(lattice_dir)


def make_graph(nodes, edges, kind="boundary", weights=None):
    edge_map = {}
    for i, (u, v) in enumerate(edges):
        key = (u, v) if u < v else (v, u)
        edge_map[key] = Edge(kind, None if weights is None else weights[i])
    return ContiguityGraph(list(nodes), edge_map)


def make_features(values, ids=None, standardized=False, representation="BlocShares"):
    values = np.asarray(values, dtype=float)
    ids = ids or [f"m{i:02d}" for i in range(values.shape[0])]
    cols = [f"c{j}" for j in range(values.shape[1])]
    return FeatureMatrix(representation, list(ids), values, cols, standardized=standardized)


def make_partition(labels, ids=None, K=None):
    ids = ids or [f"m{i:02d}" for i in range(len(labels))]
    return Partition(dict(zip(ids, labels)), K or len(set(labels)))


def random_geometric_graph(rng, n, p=0.25, isolate_count=0):
    """Random undirected graph over n nodes; optionally force isolates."""
    ids = [f"m{i:02d}" for i in range(n)]
    isolates = set(rng.choice(n, size=isolate_count, replace=False).tolist()) if isolate_count else set()
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if i in isolates or j in isolates:
                continue
            if rng.random() < p:
                edges[(ids[i], ids[j])] = Edge("boundary")
    return ContiguityGraph(ids, edges)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
    print(f"\n[criterion] {status}: {name}", flush=True)
