"""Exact event detection on built graphs, plus the window policy.

Events at scale r:

* long edge: some edge with an endpoint at |x| < r and length > c*r.
* crossing: the ball B(0,r) connects to the complement of B(0,2r).
* local crossing: the same crossing around a center x, using only vertices
  inside B(x,3r) (no dependence on anything farther away, hence no
  truncation bias).
* renorm long edge: an edge with an endpoint in B(0,20r) and length > r;
  identical to the long-edge event at (20r, 1/20).

Windows are balls with an additive safety margin; evaluating an event on a
graph whose window is too small raises WindowCoverageError rather than
silently returning a biased answer.  Truncation (edges to points beyond any
finite window) biases probabilities downward; the estimators module reports a
Campbell-formula bound on the expected number of such edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, WindowCoverageError
from .graph import GeomGraph, ball_region, complement_region, connected_regions, connected_regions_restricted
from .ppp import Window, ball_window, unit_ball_volume

WINDOW_MARGIN = 0.05

LONG_EDGE = "long_edge"
CROSSING = "crossing"
LOCAL_CROSSING = "local_crossing"
RENORM_LONG_EDGE = "renorm_long_edge"

_KINDS = (LONG_EDGE, CROSSING, LOCAL_CROSSING, RENORM_LONG_EDGE)


@dataclass(frozen=True)
class EventSpec:
    """An event kind with its scale r, length ratio c, and optional center."""

    kind: str
    r: float
    c: float = 1.0
    center: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigurationError(f"unknown event kind {self.kind!r}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ConfigurationError(f"event scale r must be positive, got {self.r}")
        if self.kind == LONG_EDGE and not (self.c > 0 and math.isfinite(self.c)):
            raise ConfigurationError(f"length ratio c must be positive, got {self.c}")
        if self.center is not None:
            center = np.atleast_1d(np.asarray(self.center, dtype=float))
            center.flags.writeable = False
            object.__setattr__(self, "center", center)

    def window(self, d: int, margin: float = WINDOW_MARGIN) -> Window:
        """Simulation window implied by the policy for this event."""
        if self.kind == LONG_EDGE:
            radius = (1.0 + self.c + margin) * self.r
        elif self.kind == CROSSING:
            radius = (2.0 + margin) * self.r
        elif self.kind == LOCAL_CROSSING:
            shift = float(np.linalg.norm(self.center)) if self.center is not None else 0.0
            radius = shift + (3.0 + margin) * self.r
        else:
            radius = (21.0 + margin) * self.r
        return ball_window(radius, d=d)

    def truncation_radius(self) -> float:
        """Radius of the ball whose edges to the window exterior can bias the event.

        Zero means the event is decided entirely inside its policy window
        (the local crossing reads only B(x,3r), which the window contains).
        """
        if self.kind == LONG_EDGE:
            return self.r
        if self.kind == CROSSING:
            return 2.0 * self.r
        if self.kind == LOCAL_CROSSING:
            return 0.0
        return 20.0 * self.r

    def evaluate(self, graph: GeomGraph) -> bool:
        if self.kind == LONG_EDGE:
            return long_edge_event(graph, self.r, self.c)
        if self.kind == CROSSING:
            return crossing_event(graph, self.r)
        if self.kind == LOCAL_CROSSING:
            return local_crossing_event(graph, self.r, center=self.center)
        return renorm_long_edge_event(graph, self.r)


def long_edge_spec(r: float, c: float) -> EventSpec:
    return EventSpec(kind=LONG_EDGE, r=r, c=c)


def crossing_spec(r: float) -> EventSpec:
    return EventSpec(kind=CROSSING, r=r)


def local_crossing_spec(r: float, center=None) -> EventSpec:
    return EventSpec(kind=LOCAL_CROSSING, r=r, center=center)


def renorm_long_edge_spec(r: float) -> EventSpec:
    return EventSpec(kind=RENORM_LONG_EDGE, r=r)


def _require_ball(graph: GeomGraph, center, radius: float, what: str) -> None:
    if center is None:
        center = np.zeros(graph.cloud.dimension)
    if not graph.cloud.window.contains_ball(center, radius):
        raise WindowCoverageError(
            f"{what} needs the window to contain the ball of radius {radius:g} "
            f"around {np.asarray(center).tolist()}; the cloud's window is too small"
        )


def _require_exterior(graph: GeomGraph, radius: float, what: str) -> None:
    window = graph.cloud.window
    d = window.dimension
    if window.volume() <= unit_ball_volume(d) * radius**d * (1 + 1e-12):
        raise WindowCoverageError(
            f"{what} needs window volume beyond the ball of radius {radius:g}; "
            "the complement region would be empty"
        )


def long_edge_event(graph: GeomGraph, r: float, c: float) -> bool:
    """Some edge has an endpoint with |x| < r and length > c*r."""
    _require_ball(graph, None, (1.0 + c) * r, "long-edge event")
    if graph.n_edges == 0:
        return False
    lengths = graph.edge_lengths()
    long_mask = lengths > c * r
    if not long_mask.any():
        return False
    pos = graph.cloud.positions
    e = graph.edges[long_mask]
    n0 = np.sum(pos[e[:, 0]] ** 2, axis=1) < r * r
    n1 = np.sum(pos[e[:, 1]] ** 2, axis=1) < r * r
    return bool(np.any(n0 | n1))


def crossing_event(graph: GeomGraph, r: float) -> bool:
    """B(0,r) connects to the window part of the complement of B(0,2r)."""
    _require_ball(graph, None, 2.0 * r, "crossing event")
    _require_exterior(graph, 2.0 * r, "crossing event")
    d = graph.cloud.dimension
    origin = np.zeros(d)
    return connected_regions(graph, ball_region(origin, r), complement_region(origin, 2.0 * r))


def local_crossing_event(graph: GeomGraph, r: float, center=None) -> bool:
    """Crossing around ``center`` using only vertices within B(center, 3r)."""
    d = graph.cloud.dimension
    center = np.zeros(d) if center is None else np.atleast_1d(np.asarray(center, dtype=float))
    _require_ball(graph, center, 3.0 * r, "local crossing event")
    return connected_regions_restricted(
        graph,
        ball_region(center, r),
        complement_region(center, 2.0 * r),
        ball_region(center, 3.0 * r),
    )


def renorm_long_edge_event(graph: GeomGraph, r: float) -> bool:
    """Some edge has an endpoint in B(0, 20r) and length > r.

    Deliberately implemented endpoint-first (not by delegating to
    long_edge_event) so the identity with the (20r, 1/20) long-edge event is a
    meaningful cross-check.
    """
    _require_ball(graph, None, 21.0 * r, "renorm long-edge event")
    if graph.n_edges == 0:
        return False
    pos = graph.cloud.positions
    e = graph.edges
    near = (np.sum(pos[e[:, 0]] ** 2, axis=1) < (20.0 * r) ** 2) | (
        np.sum(pos[e[:, 1]] ** 2, axis=1) < (20.0 * r) ** 2
    )
    if not near.any():
        return False
    sel = e[near]
    diff = pos[sel[:, 0]] - pos[sel[:, 1]]
    return bool(np.any(np.sum(diff * diff, axis=1) > r * r))
