"""Monotone coupling across intensities via thinning.

A lower-intensity process is realized as an independent Bernoulli-retained
subset of a higher-intensity one.  Because point ids are inherited by the
retained sub-cloud and edge randomness is keyed by id pairs, the low graph is
exactly the subgraph of the high graph induced by the retained points, on
every run.  That makes the monotone events (long edge, crossing, renorm long
edge) pathwise monotone in the intensity for models whose edge probabilities
ignore the surrounding configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, ContractError
from .events import long_edge_spec
from .graph import GeomGraph, build_graph
from .models import ModelSpec
from .ppp import PointCloud, Window, sample_ppp
from .rng import mix, point_uniforms

from .estimators import Estimate, make_estimate, replicate_seed, run_replicates


@dataclass(frozen=True)
class CoupledPair:
    """A PPP at lam_high and its Bernoulli(lam_low/lam_high)-thinned subset."""

    window: Window
    lam_low: float
    lam_high: float
    high: PointCloud
    retained: np.ndarray
    low: PointCloud

    def __post_init__(self):
        self.retained.flags.writeable = False


def thin_pair(window: Window, lam_low: float, lam_high: float, seed: int) -> CoupledPair:
    """Sample the high-intensity cloud and retain each point independently.

    Retention uses per-point uniforms keyed by point id, so the same id is
    retained or dropped consistently across any nested thinnings with
    decreasing ratios and the same seed.
    """
    if lam_low < 0 or lam_high < 0:
        raise ConfigurationError("intensities must be nonnegative")
    if lam_low > lam_high:
        raise ConfigurationError(f"thinning needs lam_low <= lam_high, got {lam_low} > {lam_high}")
    high = sample_ppp(intensity=lam_high, window=window, seed=seed)
    if lam_high == 0.0:
        ratio = 0.0
    else:
        ratio = lam_low / lam_high
    u = point_uniforms(mix(seed, "thin"), high.ids)
    retained = u < ratio
    low = replace(high.subset(retained), intensity=lam_low)
    return CoupledPair(
        window=window, lam_low=lam_low, lam_high=lam_high, high=high, retained=retained, low=low
    )


def coupled_graphs(pair: CoupledPair, model: ModelSpec, seed: int):
    """Build both graphs with shared pair-indexed randomness.

    Returns (low graph, high graph).  The low graph equals the subgraph of
    the high graph induced by the retained points -- exactly, because both
    builds draw the same uniform for any pair of inherited ids.
    """
    if model.variant == "generalized":
        raise ContractError(
            "coupling is only exact when edge probabilities ignore the surrounding "
            "configuration; context-dependent models are not supported"
        )
    low_graph = build_graph(pair.low, model, seed=seed)
    high_graph = build_graph(pair.high, model, seed=seed)
    return low_graph, high_graph


def induced_edges(high_graph: GeomGraph, retained: np.ndarray) -> np.ndarray:
    """Edges of the high graph with both endpoints retained, in low-graph indexing."""
    e = high_graph.edges
    if len(e) == 0:
        return e.copy()
    keep = retained[e[:, 0]] & retained[e[:, 1]]
    sub = e[keep]
    new_index = np.cumsum(retained) - 1
    remapped = new_index[sub]
    remapped.sort(axis=1)
    order = np.lexsort((remapped[:, 1], remapped[:, 0]))
    return remapped[order]


@dataclass(frozen=True)
class ThinningReport:
    """Two-sided intensity-monotonicity check on the long-edge event L(r, 1)."""

    lam_low: float
    lam_high: float
    r: float
    low: Estimate
    high: Estimate
    exact_upper_violations: int
    lower_violated: bool
    upper_violated: bool

    @property
    def violated(self) -> bool:
        return self.lower_violated or self.upper_violated or self.exact_upper_violations > 0

    def lines(self):
        ratio_sq = (self.lam_low / self.lam_high) ** 2 if self.lam_high > 0 else 0.0
        return [
            f"intensities: {self.lam_low:g} <= {self.lam_high:g}, event scale r={self.r:g}",
            f"low  p={self.low.p_hat:.6g} ci=[{self.low.ci_low:.6g}, {self.low.ci_high:.6g}]",
            f"high p={self.high.p_hat:.6g} ci=[{self.high.ci_low:.6g}, {self.high.ci_high:.6g}]",
            f"lower bound ratio^2*p_high = {ratio_sq * self.high.p_hat:.6g}: "
            + ("VIOLATED" if self.lower_violated else "not violated"),
            f"upper bound, exact per-replicate violations: {self.exact_upper_violations}"
            + ("" if self.exact_upper_violations == 0 else " (VIOLATED)"),
            "upper bound, statistical: " + ("VIOLATED" if self.upper_violated else "not violated"),
        ]


def check_thinning_bounds(
    model: ModelSpec,
    lam_low: float,
    lam_high: float,
    r: float,
    n: int,
    seed: int,
    threads: int = 1,
) -> ThinningReport:
    """Estimate P(L(r,1)) at both intensities on coupled replicates.

    Checks ratio^2 * P_high <= P_low <= P_high: the upper bound exactly per
    replicate (subgraph monotonicity), both bounds statistically via the
    Wilson intervals.
    """
    if not (0 < lam_low < lam_high):
        raise ConfigurationError("need 0 < lam_low < lam_high")
    event = long_edge_spec(r, 1.0)
    window = event.window(model.d)

    def one(i: int):
        rep_seed = replicate_seed(seed, i)
        pair = thin_pair(window, lam_low, lam_high, rep_seed)
        low_graph, high_graph = coupled_graphs(pair, model, rep_seed)
        # a low-only hit would contradict the induced-subgraph construction;
        # it is counted, not raised, so full runs report every violation
        return event.evaluate(low_graph), event.evaluate(high_graph)

    rows = run_replicates(one, n, threads)
    low_est = make_estimate(sum(row[0] for row in rows), n)
    high_est = make_estimate(sum(row[1] for row in rows), n)
    exact_violations = sum(1 for lo, hi in rows if lo and not hi)
    ratio_sq = (lam_low / lam_high) ** 2
    lower_violated = ratio_sq * high_est.ci_low > low_est.ci_high
    upper_violated = low_est.ci_low > high_est.ci_high
    return ThinningReport(
        lam_low=lam_low,
        lam_high=lam_high,
        r=r,
        low=low_est,
        high=high_est,
        exact_upper_violations=exact_violations,
        lower_violated=lower_violated,
        upper_violated=upper_violated,
    )
