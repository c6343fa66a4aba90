"""Municipality contiguity graph: polygon adjacency plus the three-step
augmentation (isolate k-NN edges, dominant-bloc enclave cliques, component
bridges) that guarantees a connected graph."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from shapely import STRtree
from shapely.geometry import MultiLineString

from .distances import Metric, pairwise_matrix
from .features import FeatureMatrix
from .ingest import BLOCS, normalize_name

EDGE_KINDS = ("boundary", "virtual", "enclave", "bridge")

# Coordinates are snapped to this grid before the shared-boundary test so that
# digitization noise below it cannot create or destroy adjacency.
SNAP_GRID_DEGREES = 1e-6


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class BoundaryPolygon:
    municipality_id: str
    rings: list[list[tuple[float, float]]]

    def __post_init__(self):
        for ring in self.rings:
            if len(ring) < 4:
                raise GraphError(f"{self.municipality_id}: ring with fewer than 4 points")
            if tuple(ring[0]) != tuple(ring[-1]):
                raise GraphError(f"{self.municipality_id}: ring is not closed")


@dataclass(frozen=True)
class Edge:
    kind: str
    weight: float | None = None


@dataclass
class ContiguityGraph:
    """Undirected graph over municipality ids with typed edges.

    Edges are keyed by the ordered pair (min(u,v), max(u,v)); no self-loops.
    """

    nodes: list[str]
    edges: dict[tuple[str, str], Edge] = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = sorted(self.nodes)
        node_set = set(self.nodes)
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop on '{u}'")
            if (u, v) != self._key(u, v):
                raise GraphError(f"edge ({u}, {v}) not in canonical order")
            if u not in node_set or v not in node_set:
                raise GraphError(f"edge ({u}, {v}) references unknown node")

    @staticmethod
    def _key(u: str, v: str) -> tuple[str, str]:
        return (u, v) if u < v else (v, u)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def has_edge(self, u: str, v: str) -> bool:
        return self._key(u, v) in self.edges

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {u: [] for u in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for u in adj:
            adj[u].sort()
        return adj

    def components(self) -> list[list[str]]:
        """Connected components, each sorted, ordered by (size desc, min id)."""
        adj = self.adjacency()
        seen: set[str] = set()
        comps = []
        for start in self.nodes:
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        comps.sort(key=lambda c: (-len(c), c[0]))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def to_json(self) -> str:
        payload = {
            "nodes": self.nodes,
            "edges": [
                {"u": u, "v": v, "kind": e.kind, "weight": e.weight}
                for (u, v), e in sorted(self.edges.items())
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "ContiguityGraph":
        payload = json.loads(text)
        edges = {
            cls._key(e["u"], e["v"]): Edge(e["kind"], e.get("weight"))
            for e in payload["edges"]
        }
        return cls(payload["nodes"], edges)


def parse_geojson(text: str, aliases: dict[str, str] | None = None) -> list[BoundaryPolygon]:
    """Read a GeoJSON FeatureCollection into boundary polygons.

    The ``name`` property is the municipality identity, matched through
    normalize_name. Polygon and MultiPolygon geometries are supported; all
    rings (exterior and holes) are kept as boundary lines.
    """
    data = json.loads(text)
    if data.get("type") != "FeatureCollection":
        raise GraphError("expected a GeoJSON FeatureCollection")
    polygons = []
    for feature in data.get("features", []):
        props = feature.get("properties") or {}
        if "name" not in props:
            raise GraphError("feature missing 'name' property")
        name = normalize_name(str(props["name"]), aliases)
        geom = feature.get("geometry") or {}
        gtype = geom.get("type")
        if gtype == "Polygon":
            parts = [geom["coordinates"]]
        elif gtype == "MultiPolygon":
            parts = geom["coordinates"]
        else:
            raise GraphError(f"'{name}': unsupported geometry type {gtype!r}")
        rings = [[(float(x), float(y)) for x, y in ring] for part in parts for ring in part]
        polygons.append(BoundaryPolygon(name, rings))
    return polygons


def _snapped_boundary(polygon: BoundaryPolygon) -> MultiLineString:
    rings = [[(round(x, 6), round(y, 6)) for x, y in ring] for ring in polygon.rings]
    return MultiLineString(rings)


def build_adjacency(polygons: list[BoundaryPolygon]) -> ContiguityGraph:
    """Boundary-sharing adjacency graph.

    Two municipalities are adjacent iff their snapped boundaries intersect in
    a set of positive total length; touching at isolated points does not
    count.
    """
    if not polygons:
        raise GraphError("no polygons given")
    ids = [p.municipality_id for p in polygons]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise GraphError(f"duplicate municipality ids: {dupes}")

    boundaries = [_snapped_boundary(p) for p in polygons]
    tree = STRtree(boundaries)
    edges: dict[tuple[str, str], Edge] = {}
    for i, boundary in enumerate(boundaries):
        for j in tree.query(boundary):
            j = int(j)
            if j <= i:
                continue
            shared = boundary.intersection(boundaries[j])
            if shared.length > 0.0:
                edges[ContiguityGraph._key(ids[i], ids[j])] = Edge("boundary")
    return ContiguityGraph(ids, edges)


def subset_graph(graph: ContiguityGraph, ids: list[str]) -> ContiguityGraph:
    """Induced subgraph on ``ids`` (may be disconnected)."""
    unknown = sorted(set(ids) - set(graph.nodes))
    if unknown:
        raise GraphError(f"unknown municipality ids: {unknown}")
    keep = set(ids)
    edges = {(u, v): e for (u, v), e in graph.edges.items() if u in keep and v in keep}
    return ContiguityGraph(sorted(keep), edges)


def augment_graph(
    graph: ContiguityGraph,
    features: FeatureMatrix,
    bloc_shares: dict[str, tuple[float, ...]],
    dominance_threshold: float = 0.70,
    knn: int = 3,
    metric: Metric = Metric.EUCLIDEAN,
) -> ContiguityGraph:
    """Three-step augmentation producing a connected graph.

    1. Each isolated node gains ``knn`` virtual edges to its nearest
       neighbors (Euclidean in feature space).
    2. Municipalities where one bloc exceeds ``dominance_threshold`` are
       pairwise connected per bloc with enclave edges.
    3. Every remaining component gets one bridge edge to the largest
       component, between the closest cross-component pair under ``metric``.

    Existing edges are never removed or retyped.
    """
    if graph.n < 2:
        return graph

    order = {m: i for i, m in enumerate(features.row_ids)}
    missing = [u for u in graph.nodes if u not in order]
    if missing:
        raise GraphError(f"features missing rows for: {missing[:5]}")
    idx = np.array([order[u] for u in graph.nodes])
    values = np.asarray(features.values, dtype=float)[idx]

    edges = dict(graph.edges)
    nodes = graph.nodes
    pos = {u: i for i, u in enumerate(nodes)}

    # 1. virtual edges for isolates. Each isolate must end with exactly knn
    # virtual edges, so edges received from earlier isolates count toward the
    # quota and isolates that already reached it stop being candidates.
    degree = dict.fromkeys(nodes, 0)
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    isolates = [u for u in nodes if degree[u] == 0]
    if isolates:
        isolate_set = set(isolates)
        virtual_degree = dict.fromkeys(nodes, 0)
        diffs = values[:, None, :] - values[None, :, :]
        euclid = np.sqrt((diffs * diffs).sum(axis=2))
        quota = min(knn, graph.n - 1)
        for u in isolates:
            i = pos[u]
            ranked = sorted(
                (
                    v for v in nodes
                    if v != u
                    and ContiguityGraph._key(u, v) not in edges
                    and not (v in isolate_set and virtual_degree[v] >= quota)
                ),
                key=lambda v: (euclid[i, pos[v]], v),
            )
            for v in ranked[: max(quota - virtual_degree[u], 0)]:
                edges[ContiguityGraph._key(u, v)] = Edge("virtual")
                virtual_degree[u] += 1
                virtual_degree[v] += 1

    # 2. enclave cliques per dominant bloc
    for b, bloc in enumerate(BLOCS):
        dominant = [u for u in nodes if u in bloc_shares and bloc_shares[u][b] > dominance_threshold]
        for i, u in enumerate(dominant):
            for v in dominant[i + 1:]:
                edges.setdefault(ContiguityGraph._key(u, v), Edge("enclave"))

    # 3. bridge each remaining component to the largest one
    work = ContiguityGraph(nodes, edges)
    comps = work.components()
    if len(comps) > 1:
        dist = pairwise_matrix(metric, features).values
        largest = comps[0]
        li = np.array([order[u] for u in largest])
        for comp in sorted(comps[1:], key=lambda c: c[0]):
            ci = np.array([order[u] for u in comp])
            sub = dist[np.ix_(ci, li)]
            flat = int(np.argmin(sub))
            a, b = divmod(flat, sub.shape[1])
            edges.setdefault(ContiguityGraph._key(comp[a], largest[b]), Edge("bridge"))
        work = ContiguityGraph(nodes, edges)

    return work


def edge_similarity_weights(graph: ContiguityGraph, distance_matrix) -> ContiguityGraph:
    """Annotate every edge with w = 1 - d/d_max, d_max over graph edges.

    Degenerate d_max = 0 puts every weight at 1.
    """
    order = {m: i for i, m in enumerate(distance_matrix.row_ids)}
    missing = [u for u in graph.nodes if u not in order]
    if missing:
        raise GraphError(f"distance matrix missing rows for: {missing[:5]}")
    dvals = distance_matrix.values
    dists = {key: float(dvals[order[key[0]], order[key[1]]]) for key in graph.edges}
    d_max = max(dists.values(), default=0.0)
    edges = {
        key: Edge(e.kind, 1.0 if d_max == 0.0 else 1.0 - dists[key] / d_max)
        for key, e in graph.edges.items()
    }
    return ContiguityGraph(list(graph.nodes), edges)
