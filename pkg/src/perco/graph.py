"""Random connection graphs on sampled point clouds.

Each unordered pair (i, j) carries a uniform variate keyed by (seed, id_i,
id_j); the edge is present iff that variate falls below the pair's connection
probability.  Because the variate depends on inherited point ids rather than
array order, a thinned sub-cloud reproduces exactly the induced subgraph of
its parent (see the coupling module).

Two enumeration paths produce identical edge sets: an exact blocked O(n^2)
sweep, and a kd-tree candidate search for models with a finite connection
range.  Both are deterministic and thread-schedule independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from .errors import ConfigurationError, ResourceError
from .models import ModelSpec, max_range, pairwise_prob
from .ppp import PointCloud
from .rng import pair_uniforms

DEFAULT_PAIR_BUDGET = 200_000_000
_CHUNK = 2_000_000  # pair-array block size, bounds peak memory


@dataclass(frozen=True)
class Region:
    """A ball, or the complement of a ball, used as a connectivity endpoint set."""

    kind: str  # "ball" | "ball_complement"
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.kind not in ("ball", "ball_complement"):
            raise ConfigurationError(f"unknown region kind {self.kind!r}")
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        if self.radius <= 0 or not math.isfinite(self.radius):
            raise ConfigurationError(f"region radius must be positive, got {self.radius}")
        center.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, positions: np.ndarray) -> np.ndarray:
        positions = np.atleast_2d(np.asarray(positions, dtype=float))
        d2 = np.sum((positions - self.center) ** 2, axis=1)
        if self.kind == "ball":
            return d2 <= self.radius**2
        return d2 > self.radius**2


def ball_region(center, radius: float) -> Region:
    return Region(kind="ball", center=center, radius=radius)


def complement_region(center, radius: float) -> Region:
    """Everything strictly outside the closed ball (within the window)."""
    return Region(kind="ball_complement", center=center, radius=radius)


@dataclass(frozen=True)
class GeomGraph:
    """Immutable graph on a cloud: edges, adjacency, component labels."""

    cloud: PointCloud
    seed: int
    edges: np.ndarray  # (m, 2) int64, i < j, lexicographically sorted
    component_labels: np.ndarray  # (n,)
    adjacency: sparse.csr_matrix  # symmetric boolean

    def __post_init__(self):
        for arr in (self.edges, self.component_labels):
            arr.flags.writeable = False

    @property
    def n_vertices(self) -> int:
        return len(self.cloud)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def edge_lengths(self) -> np.ndarray:
        pos = self.cloud.positions
        if self.n_edges == 0:
            return np.empty(0)
        diff = pos[self.edges[:, 0]] - pos[self.edges[:, 1]]
        return np.sqrt(np.sum(diff * diff, axis=1))


def _finalize_graph(cloud: PointCloud, seed: int, ii: np.ndarray, jj: np.ndarray) -> GeomGraph:
    n = len(cloud)
    edges = np.stack([ii, jj], axis=1).astype(np.int64) if ii.size else np.empty((0, 2), dtype=np.int64)
    if edges.shape[0]:
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges = edges[order]
    if edges.shape[0]:
        data = np.ones(edges.shape[0], dtype=np.int8)
        coo = sparse.coo_matrix((data, (edges[:, 0], edges[:, 1])), shape=(n, n))
        adj = (coo + coo.T).tocsr()
        _, labels = csgraph.connected_components(adj, directed=False)
    else:
        adj = sparse.csr_matrix((n, n), dtype=np.int8)
        labels = np.arange(n)
    return GeomGraph(cloud=cloud, seed=seed, edges=edges, component_labels=labels, adjacency=adj)


def _screen_pairs(cloud, model, seed, ii, jj, context_tree):
    """Resolve candidate pairs to kept edges; exact for every model variant."""
    pos = cloud.positions
    diff = pos[ii] - pos[jj]
    dists = np.sqrt(np.sum(diff * diff, axis=1))
    probs = np.asarray(pairwise_prob(model, cloud.marks[ii], cloud.marks[jj], dists))
    u = pair_uniforms(seed, cloud.ids[ii], cloud.ids[jj])
    keep = u < probs
    if model.variant == "generalized" and np.any(keep):
        # damping only lowers probabilities, so the base screen is a superset
        ki, kj, ku, kd = ii[keep], jj[keep], u[keep], dists[keep]
        mids = 0.5 * (pos[ki] + pos[kj])
        counts = context_tree.query_ball_point(mids, model.damping_radius, return_length=True)
        endpoints_in = (0.5 * kd <= model.damping_radius).astype(np.int64)
        ctx = np.asarray(counts, dtype=np.int64) - 2 * endpoints_in
        damped = probs[keep] * model.damping_factor**ctx
        final = ku < damped
        return ki[final], kj[final]
    return ii[keep], jj[keep]


def build_graph(
    cloud: PointCloud,
    model: ModelSpec,
    seed: int,
    method: str = "auto",
    pair_budget: int | None = None,
) -> GeomGraph:
    """Build the connection graph; deterministic given (cloud, model, seed).

    method "exact" sweeps all pairs; "grid" enumerates kd-tree candidates
    within the model's finite range; "auto" picks per model.  Both paths give
    identical edge sets whenever "grid" applies.
    """
    if model.d != cloud.dimension:
        raise ConfigurationError("model dimension does not match cloud dimension")
    if method not in ("auto", "exact", "grid"):
        raise ConfigurationError(f"unknown build method {method!r}")
    budget = DEFAULT_PAIR_BUDGET if pair_budget is None else int(pair_budget)
    n = len(cloud)
    cutoff = max_range(model)
    if method == "auto":
        method = "grid" if (math.isfinite(cutoff) and n > 2000) else "exact"
    if method == "grid" and not math.isfinite(cutoff):
        raise ConfigurationError("grid enumeration requires a model with finite connection range")

    context_tree = None
    if model.variant == "generalized" and n:
        context_tree = cKDTree(cloud.positions)

    kept_i: list[np.ndarray] = []
    kept_j: list[np.ndarray] = []

    if method == "exact":
        total = n * (n - 1) // 2
        if total > budget:
            raise ResourceError(
                f"exact pair sweep needs {total} pair evaluations, budget is {budget}; "
                "shrink the window, lower the intensity, or raise pair_budget"
            )
        i0 = 0
        while i0 < n - 1:
            rows = max(1, min(n - 1 - i0, _CHUNK // max(1, n - 1 - i0)))
            i1 = i0 + rows
            counts = n - 1 - np.arange(i0, i1)
            ii = np.repeat(np.arange(i0, i1), counts)
            jj = np.concatenate([np.arange(i + 1, n) for i in range(i0, i1)])
            if math.isfinite(cutoff):
                pos = cloud.positions
                diff = pos[ii] - pos[jj]
                near = np.sum(diff * diff, axis=1) <= cutoff * cutoff
                ii, jj = ii[near], jj[near]
            if ii.size:
                ki, kj = _screen_pairs(cloud, model, seed, ii, jj, context_tree)
                kept_i.append(ki)
                kept_j.append(kj)
            i0 = i1
    else:
        tree = context_tree if context_tree is not None else (cKDTree(cloud.positions) if n else None)
        if n:
            ordered = int(tree.count_neighbors(tree, cutoff))
            n_candidates = (ordered - n) // 2
            if n_candidates > budget:
                raise ResourceError(
                    f"range search finds {n_candidates} candidate pairs, budget is {budget}; "
                    "shrink the window, lower the intensity, or raise pair_budget"
                )
            pairs = tree.query_pairs(cutoff, output_type="ndarray")
            for k0 in range(0, pairs.shape[0], _CHUNK):
                block = pairs[k0 : k0 + _CHUNK]
                ki, kj = _screen_pairs(cloud, model, seed, block[:, 0], block[:, 1], context_tree)
                kept_i.append(ki)
                kept_j.append(kj)

    ii = np.concatenate(kept_i) if kept_i else np.empty(0, dtype=np.int64)
    jj = np.concatenate(kept_j) if kept_j else np.empty(0, dtype=np.int64)
    return _finalize_graph(cloud, seed, ii, jj)


def connected_regions(graph: GeomGraph, region_a: Region, region_b: Region) -> bool:
    """Whether some component holds a vertex in each region."""
    pos = graph.cloud.positions
    if graph.n_vertices == 0:
        return False
    in_a = region_a.contains(pos)
    in_b = region_b.contains(pos)
    if not (in_a.any() and in_b.any()):
        return False
    labels_a = np.unique(graph.component_labels[in_a])
    labels_b = np.unique(graph.component_labels[in_b])
    return bool(np.intersect1d(labels_a, labels_b, assume_unique=True).size > 0)


def connected_regions_restricted(
    graph: GeomGraph, region_a: Region, region_b: Region, through: Region
) -> bool:
    """Whether a path from region_a to region_b exists using only vertices in ``through``."""
    pos = graph.cloud.positions
    if graph.n_vertices == 0:
        return False
    in_s = through.contains(pos)
    if not in_s.any():
        return False
    in_a = region_a.contains(pos) & in_s
    in_b = region_b.contains(pos) & in_s
    if not (in_a.any() and in_b.any()):
        return False
    sub = graph.adjacency[in_s][:, in_s]
    _, sub_labels = csgraph.connected_components(sub, directed=False)
    labels_a = np.unique(sub_labels[in_a[in_s]])
    labels_b = np.unique(sub_labels[in_b[in_s]])
    return bool(np.intersect1d(labels_a, labels_b, assume_unique=True).size > 0)


def dump_graph(graph: GeomGraph, stream) -> None:
    """Plain-text dump: a point table then one edge per line.

    Header documents the columns; floats carry 17 significant digits so the
    dump round-trips bit-exactly.
    """
    d = graph.cloud.dimension
    stream.write("# geometric graph dump\n")
    stream.write(f"# points {graph.n_vertices} dim {d} (columns: index, {d} coordinates, mark)\n")
    for i in range(graph.n_vertices):
        coords = " ".join(f"{c:.17g}" for c in graph.cloud.positions[i])
        stream.write(f"{i} {coords} {graph.cloud.marks[i]:.17g}\n")
    stream.write(f"# edges {graph.n_edges} (columns: index i, index j)\n")
    for i, j in graph.edges:
        stream.write(f"{i} {j}\n")
