"""Event semantics: constructed instances, coverage guards, exact inclusions."""

import numpy as np
import pytest

from perco.errors import ConfigurationError, WindowCoverageError
from perco.events import (
    EventSpec,
    crossing_event,
    crossing_spec,
    local_crossing_event,
    local_crossing_spec,
    long_edge_event,
    long_edge_spec,
    renorm_long_edge_event,
    renorm_long_edge_spec,
)
from perco.graph import build_graph
from perco.models import RadiusLaw, boolean_model, catalog
from perco.ppp import PointCloud, ball_window, sample_ppp


def fixed_boolean(d, radius):
    return boolean_model(d=d, radius_law=RadiusLaw(kind="constant", radius=radius))


def make_cloud(positions, radius):
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    marks = np.full(n, 0.5)
    return PointCloud(
        positions=positions,
        marks=marks,
        window=ball_window(radius, d=positions.shape[1]),
        intensity=1.0,
        seed=0,
    )


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        EventSpec(kind="nope", r=1.0)
    with pytest.raises(ConfigurationError):
        EventSpec(kind="crossing", r=0.0)
    with pytest.raises(ConfigurationError):
        EventSpec(kind="long_edge", r=1.0, c=-2.0)


def test_window_policy_radii():
    assert long_edge_spec(2.0, 3.0).window(2).radius == pytest.approx(2.0 * 4.05)
    assert crossing_spec(1.5).window(3).radius == pytest.approx(1.5 * 2.05)
    assert renorm_long_edge_spec(0.5).window(1).radius == pytest.approx(0.5 * 21.05)
    shifted = local_crossing_spec(1.0, center=[3.0, 4.0])
    assert shifted.window(2).radius == pytest.approx(5.0 + 3.05)
    assert local_crossing_spec(1.0).window(2).radius == pytest.approx(3.05)


def test_truncation_radii():
    assert long_edge_spec(2.0, 3.0).truncation_radius() == 2.0
    assert crossing_spec(2.0).truncation_radius() == 4.0
    assert local_crossing_spec(2.0).truncation_radius() == 0.0
    assert renorm_long_edge_spec(2.0).truncation_radius() == 40.0


def test_long_edge_constructed():
    # boolean R=0.5 connects strictly below distance 1
    model = fixed_boolean(2, 0.5)
    cloud = make_cloud([[0.0, 0.0], [0.9, 0.0]], radius=1.5)
    graph = build_graph(cloud, model, seed=1)
    assert graph.n_edges == 1
    # edge of length 0.9 with an endpoint at the origin
    assert long_edge_event(graph, r=0.2, c=1.0)
    # same edge is too short once c asks for length > 1.0
    assert not long_edge_event(graph, r=0.2, c=5.0)
    # endpoint must be strictly inside B(0, r)
    far_cloud = make_cloud([[0.5, 0.0], [1.4, 0.0]], radius=2.0)
    far_graph = build_graph(far_cloud, model, seed=1)
    assert far_graph.n_edges == 1
    assert not long_edge_event(far_graph, r=0.5, c=0.5)
    assert long_edge_event(far_graph, r=0.51, c=0.5)


def test_crossing_constructed():
    model = fixed_boolean(2, 0.5)
    chain = make_cloud([[0.0, 0.0], [0.6, 0.0], [1.2, 0.0]], radius=1.5)
    graph = build_graph(chain, model, seed=3)
    assert crossing_event(graph, r=0.5)
    broken = make_cloud([[0.0, 0.0], [0.6, 0.0]], radius=1.5)
    assert not crossing_event(build_graph(broken, model, seed=3), r=0.5)


def test_local_crossing_ignores_detours_outside_locality():
    # s connects to the shell vertex t only through m, and m sits outside
    # B(0, 3r); the local event must not see that detour.
    model = fixed_boolean(2, 0.49)
    s = [0.38, 0.0]
    m = [1.0825, 0.625]
    t = [0.486, 1.042]
    graph = build_graph(make_cloud([s, m, t], radius=2.0), model, seed=5)
    assert graph.n_edges == 2  # s-m and m-t; s-t is 1.047 > 0.98 apart
    r = 0.4
    assert not local_crossing_event(graph, r)
    # the unrestricted crossing does count the detour
    assert crossing_event(graph, r)


def test_local_crossing_direct_path_counts():
    model = fixed_boolean(2, 0.49)
    graph = build_graph(make_cloud([[0.0, 0.0], [0.9, 0.0]], radius=2.0), model, seed=5)
    assert local_crossing_event(graph, 0.4)
    # same event around a shifted center that the pair does not straddle
    assert not local_crossing_event(graph, 0.4, center=[0.45, 0.0])


def test_renorm_long_edge_constructed():
    model = fixed_boolean(2, 0.5)
    cloud = make_cloud([[0.0, 0.0], [0.9, 0.0]], radius=25.0)
    graph = build_graph(cloud, model, seed=2)
    assert renorm_long_edge_event(graph, 0.04)  # length 0.9 > r
    assert not renorm_long_edge_event(graph, 0.95)  # length 0.9 too short


def test_window_coverage_errors():
    model = fixed_boolean(2, 0.5)
    small = build_graph(make_cloud([[0.0, 0.0]], radius=1.0), model, seed=0)
    with pytest.raises(WindowCoverageError):
        long_edge_event(small, r=0.6, c=1.0)
    with pytest.raises(WindowCoverageError):
        crossing_event(small, r=0.6)
    with pytest.raises(WindowCoverageError):
        local_crossing_event(small, r=0.5)
    with pytest.raises(WindowCoverageError):
        renorm_long_edge_event(small, r=0.1)
    with pytest.raises(WindowCoverageError):
        local_crossing_event(small, r=0.2, center=[0.5, 0.0])
    # window equal to B(0, 2r) leaves no room for the target region
    snug = build_graph(make_cloud([[0.0, 0.0]], radius=1.0), model, seed=0)
    with pytest.raises(WindowCoverageError):
        crossing_event(snug, r=0.5)


def test_empty_graph_events_false():
    model = fixed_boolean(2, 0.5)
    cloud = sample_ppp(intensity=1e-12, window=ball_window(25.0, d=2), seed=11)
    graph = build_graph(cloud, model, seed=11)
    assert graph.n_vertices == 0
    assert not long_edge_event(graph, 1.0, 1.0)
    assert not crossing_event(graph, 1.0)
    assert not local_crossing_event(graph, 1.0)
    assert not renorm_long_edge_event(graph, 1.0)


def test_bounded_range_never_long():
    # boolean with constant radius R never makes edges of length >= 2R
    model = fixed_boolean(2, 0.5)
    window = ball_window(3.15, d=2)
    hits = 0
    for rep in range(50):
        cloud = sample_ppp(intensity=3.0, window=window, seed=900 + rep)
        graph = build_graph(cloud, model, seed=900 + rep)
        hits += graph.n_edges > 0
        assert not long_edge_event(graph, r=1.5, c=1.0)
    assert hits > 30  # edges did occur; the events were false on merit


def sampled_graphs(model, radius, lam, seeds):
    window = ball_window(radius, d=model.d)
    for seed in seeds:
        cloud = sample_ppp(intensity=lam, window=window, seed=seed)
        yield build_graph(cloud, model, seed=seed)


def test_inclusion_long_edge_implies_crossing():
    # window sized for L(r, 3), which also covers C(r)
    r = 1.0
    positives = 0
    for name, lam in [("boolean-heavy", 1.2), ("plain-poly", 1.2)]:
        model = catalog(d=2)[name]
        for graph in sampled_graphs(model, 4.05 * r, lam, range(3000, 3120)):
            le = long_edge_event(graph, r, 3.0)
            if le:
                positives += 1
                assert crossing_event(graph, r)
    assert positives > 5


def test_inclusion_local_implies_crossing():
    r = 1.0
    positives = 0
    for name, lam in [("plain-indicator", 1.0), ("boolean-heavy", 0.8)]:
        model = catalog(d=2)[name]
        for graph in sampled_graphs(model, 3.05 * r, lam, range(4000, 4120)):
            loc = local_crossing_event(graph, r)
            if loc:
                positives += 1
                assert crossing_event(graph, r)
    assert positives > 5


def test_renorm_event_equals_scaled_long_edge():
    # two independent implementations of the same event must agree exactly
    r = 0.15
    positives = 0
    for name, lam in [("boolean-heavy", 1.5), ("plain-poly", 1.5)]:
        model = catalog(d=2)[name]
        for graph in sampled_graphs(model, 21.05 * r, lam, range(5000, 5075)):
            f = renorm_long_edge_event(graph, r)
            le = long_edge_event(graph, 20.0 * r, 1.0 / 20.0)
            assert f == le
            positives += f
    assert positives > 5


def test_long_edge_monotone_in_length_ratio():
    r = 0.8
    cs = [0.3, 0.6, 1.0, 2.0, 4.0]
    model = catalog(d=2)["boolean-heavy"]
    for graph in sampled_graphs(model, (1 + cs[-1] + 0.05) * r, 1.2, range(6000, 6040)):
        vals = [long_edge_event(graph, r, c) for c in cs]
        # indicator can only switch from True to False as c grows
        for a, b in zip(vals, vals[1:]):
            assert a or not b


def test_eventspec_evaluate_dispatch():
    model = fixed_boolean(2, 0.5)
    graph = build_graph(make_cloud([[0.0, 0.0], [0.9, 0.0]], radius=25.0), model, seed=7)
    assert EventSpec(kind="long_edge", r=0.2, c=1.0).evaluate(graph)
    assert EventSpec(kind="crossing", r=0.3).evaluate(graph)
    assert EventSpec(kind="local_crossing", r=0.35).evaluate(graph)
    assert EventSpec(kind="renorm_long_edge", r=0.04).evaluate(graph)
    assert not EventSpec(kind="crossing", r=1.0).evaluate(graph)
