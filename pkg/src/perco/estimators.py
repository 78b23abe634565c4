"""Monte Carlo estimation of event probabilities and analytic oracles.

Replicates are independent: each gets a fresh point cloud and fresh edge
randomness derived from (master seed, replicate index), so results do not
depend on the execution schedule.  Aggregation is a deterministic fold in
replicate-index order, which makes multi-threaded runs byte-identical to
single-threaded ones.

The Campbell-formula routines compute expected edge counts as deterministic
integrals against intensity^2; they power calibration tests, the Markov
sanity bound p(long edge event) <= expected long-edge count, and the window
truncation bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .errors import ConfigurationError, ContractError
from .events import (
    EventSpec,
    WINDOW_MARGIN,
    local_crossing_spec,
    long_edge_spec,
)
from .graph import GeomGraph, build_graph
from .models import ModelSpec, mark_averaged_connection, phibar_breakpoints, phibar_support
from .ppp import Window, ball_window, sample_ppp, sphere_surface, unit_ball_volume
from .quadrature import DIVERGENT, INCONCLUSIVE, cap_fraction_outside, radial_integral, set_covariance_radial
from .rng import mix

DEFAULT_CONFIDENCE = 0.95
PERSISTENT_FLOOR = 0.05
VANISHING_FACTOR = 4.0
MIN_COV_TRIALS = 1000


@dataclass(frozen=True)
class Estimate:
    """Bernoulli estimate with a Wilson confidence interval."""

    hits: int
    trials: int
    p_hat: float
    ci_low: float
    ci_high: float
    confidence: float = DEFAULT_CONFIDENCE


def wilson_interval(hits: int, trials: int, confidence: float = DEFAULT_CONFIDENCE):
    """Wilson score interval; well behaved at p_hat near 0 and 1."""
    if trials <= 0:
        raise ConfigurationError("need at least one trial")
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    p = hits / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    # rounding must not push the interval off the point estimate
    return min(max(0.0, center - half), p), max(min(1.0, center + half), p)


def make_estimate(hits: int, trials: int, confidence: float = DEFAULT_CONFIDENCE) -> Estimate:
    lo, hi = wilson_interval(hits, trials, confidence)
    return Estimate(hits=hits, trials=trials, p_hat=hits / trials, ci_low=lo, ci_high=hi, confidence=confidence)


def replicate_seed(seed: int, index: int) -> int:
    """Per-replicate seed; stable against thread scheduling."""
    return int(mix(seed, "rep", index))


def run_replicates(fn, n: int, threads: int = 1):
    """Evaluate fn(replicate_index) for indices 0..n-1, in index order."""
    if n < 1:
        raise ConfigurationError("need at least one replicate")
    if threads <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))


def sample_event_graph(model: ModelSpec, intensity: float, window: Window, rep_seed: int) -> GeomGraph:
    cloud = sample_ppp(intensity=intensity, window=window, seed=rep_seed)
    return build_graph(cloud, model, seed=rep_seed)


def estimate_event(
    model: ModelSpec,
    intensity: float,
    event: EventSpec,
    n: int,
    seed: int,
    threads: int = 1,
    window: Window | None = None,
    confidence: float = DEFAULT_CONFIDENCE,
) -> Estimate:
    """Estimate the event probability over n independent replicates."""
    if window is None:
        window = event.window(model.d)

    def one(i: int) -> bool:
        rep_seed = replicate_seed(seed, i)
        return event.evaluate(sample_event_graph(model, intensity, window, rep_seed))

    outcomes = run_replicates(one, n, threads)
    return make_estimate(int(np.sum(outcomes)), n, confidence)


@dataclass(frozen=True)
class TrendReport:
    """Finite-scale trend of long-edge probabilities along a geometric r-grid.

    The verdict is a finite-scale proxy for the limiting statement "the
    probabilities do not vanish as r grows"; no finite run decides the limit,
    so the thresholds are explicit and repeated in the printed report.
    """

    r_values: tuple
    estimates: tuple
    slope: float
    slope_ci: tuple
    verdict: str
    persistent_floor: float
    vanishing_factor: float
    campbell_means: tuple
    undersampled: bool
    note: str = "finite-scale proxy; the limiting property is not decidable from any finite run"

    def lines(self):
        out = [
            f"trend verdict: {self.verdict} "
            f"(floor={self.persistent_floor:g}, decrease factor={self.vanishing_factor:g})",
            f"note: {self.note}",
        ]
        if self.undersampled:
            out.append("caveat: all-zero hit counts with expected counts far below 1/n; undersampled")
        slope_txt = "n/a" if math.isnan(self.slope) else f"{self.slope:.4g}"
        lo, hi = self.slope_ci
        ci_txt = "n/a" if math.isnan(lo) else f"[{lo:.4g}, {hi:.4g}]"
        out.append(f"log-log slope: {slope_txt}  ci: {ci_txt}")
        for r, est, camp in zip(self.r_values, self.estimates, self.campbell_means):
            camp_txt = "n/a" if camp is None or math.isnan(camp) else f"{camp:.6g}"
            out.append(
                f"r={r:.6g}  hits={est.hits}/{est.trials}  p={est.p_hat:.6g} "
                f"ci=[{est.ci_low:.6g}, {est.ci_high:.6g}]  expected_count={camp_txt}"
            )
        return out


def geometric_grid(r_min: float, r_max: float | None, k: int, ratio: float = 2.0):
    if k < 4:
        raise ConfigurationError("trend grid needs at least 4 scales")
    if not (r_min > 0):
        raise ConfigurationError("r_min must be positive")
    if r_max is None:
        return tuple(r_min * ratio**i for i in range(k))
    if not (r_max > r_min):
        raise ConfigurationError("r_max must exceed r_min")
    return tuple(np.geomspace(r_min, r_max, k))


def _slope_fit(r_values, estimates):
    """Fitted slope of log p_hat vs log r over the nonzero estimates."""
    xs = [math.log(r) for r, e in zip(r_values, estimates) if e.hits > 0]
    ys = [math.log(e.p_hat) for e in estimates if e.hits > 0]
    if len(xs) < 2 or len(set(xs)) < 2:
        return math.nan, (math.nan, math.nan)
    if len(xs) == 2:
        slope = (ys[1] - ys[0]) / (xs[1] - xs[0])
        return slope, (math.nan, math.nan)
    fit = stats.linregress(xs, ys)
    tcrit = stats.t.ppf(0.975, len(xs) - 2)
    return fit.slope, (fit.slope - tcrit * fit.stderr, fit.slope + tcrit * fit.stderr)


def probe_long_edge_persistence(
    model: ModelSpec,
    intensity: float,
    c: float,
    r_min: float,
    r_max: float | None = None,
    k: int = 6,
    n: int = 200,
    seed: int = 0,
    threads: int = 1,
    persistent_floor: float = PERSISTENT_FLOOR,
    vanishing_factor: float = VANISHING_FACTOR,
) -> TrendReport:
    """Estimate long-edge probabilities along a geometric r-grid and classify the trend."""
    r_values = geometric_grid(r_min, r_max, k)
    estimates = []
    campbell = []
    for j, r in enumerate(r_values):
        event = long_edge_spec(r, c)
        estimates.append(estimate_event(model, intensity, event, n, int(mix(seed, "scale", j)), threads=threads))
        campbell.append(_campbell_or_nan(model, intensity, r, c))

    slope, slope_ci = _slope_fit(r_values, estimates)

    all_zero = all(e.hits == 0 for e in estimates)
    last_third = estimates[-max(1, math.ceil(len(estimates) / 3)) :]
    persistent = all(e.ci_low > persistent_floor for e in last_third)
    if all_zero:
        vanishing = True
    else:
        first_p, final_p = estimates[0].p_hat, estimates[-1].p_hat
        decayed = first_p > 0 and final_p <= first_p / vanishing_factor
        vanishing = (not math.isnan(slope_ci[1])) and slope_ci[1] < 0 and decayed

    if persistent and not vanishing:
        verdict = "persistent"
    elif vanishing and not persistent:
        verdict = "vanishing"
    else:
        verdict = "inconclusive"

    finite_camp = [v for v in campbell if not math.isnan(v)]
    undersampled = all_zero and bool(finite_camp) and max(finite_camp) * n < 0.1

    return TrendReport(
        r_values=tuple(r_values),
        estimates=tuple(estimates),
        slope=slope,
        slope_ci=slope_ci,
        verdict=verdict,
        persistent_floor=persistent_floor,
        vanishing_factor=vanishing_factor,
        campbell_means=tuple(campbell),
        undersampled=undersampled,
    )


def _campbell_or_nan(model: ModelSpec, intensity: float, r: float, c: float) -> float:
    base = model.base if model.variant == "generalized" else model
    try:
        return campbell_long_edges(base, intensity, r, c)
    except (ContractError, ConfigurationError):
        return math.nan


def campbell_long_edges(
    model: ModelSpec,
    intensity: float,
    r: float,
    c: float,
    rho_max: float | None = None,
    upper: float | None = None,
) -> float:
    """Expected number of (point-in-ball, long-edge) incidences.

    Counts ordered pairs: one endpoint strictly inside B(0,r), the other at
    distance > c*r.  An edge with both endpoints in the ball contributes
    twice, so the empirical counterpart must count endpoint incidences, not
    edges.  Returns inf when the tail integral diverges; raises when the tail
    behavior cannot be classified.

    ``upper`` imposes a hard cutoff on the edge length (count only lengths in
    (c*r, upper]), which makes the value directly comparable to counts on a
    finite window containing B(0, r + upper), with no truncation bias.
    """
    if model.variant == "generalized":
        raise ContractError("expected-count formulas need a pairwise connection function")
    d = model.d
    phibar = np.vectorize(lambda rho: mark_averaged_connection(model, rho), otypes=[float])
    support = phibar_support(model)
    lower = c * r
    if upper is not None:
        if not upper > lower:
            raise ConfigurationError("length cutoff must exceed c*r")
        support = min(support, upper)
    if support <= lower:
        return 0.0
    bps = [b for b in phibar_breakpoints(model) if lower < b < support]
    result = radial_integral(phibar, d=d, lower=lower, support=support, breakpoints=bps, rho_max=rho_max)
    if result.verdict == DIVERGENT:
        return math.inf
    if result.verdict == INCONCLUSIVE:
        raise ConfigurationError(
            "tail integral could not be classified as convergent or divergent; "
            f"note: {result.note}"
        )
    ball_vol = unit_ball_volume(d) * r**d
    return intensity**2 * ball_vol * sphere_surface(d) * result.value


def campbell_total_edges(model: ModelSpec, intensity: float, window: Window) -> float:
    """Expected number of edges with both endpoints in the window."""
    if model.variant == "generalized":
        raise ContractError("expected-count formulas need a pairwise connection function")
    d = model.d
    diameter = _window_diameter(window)

    def integrand(rho):
        return mark_averaged_connection(model, rho) * set_covariance_radial(window, rho)

    bps = sorted({b for b in phibar_breakpoints(model) if 0 < b < diameter})
    support = min(phibar_support(model), diameter)
    pieces = [0.0] + [b for b in bps if b < support] + [support]
    total = 0.0
    for a, b in zip(pieces, pieces[1:]):
        val, _ = integrate.quad(
            lambda rho: rho ** (d - 1) * integrand(rho), a, b, epsabs=1e-13, epsrel=1e-10, limit=200
        )
        total += val
    return 0.5 * intensity**2 * sphere_surface(d) * total


def _window_diameter(window: Window) -> float:
    if window.kind == "ball":
        return 2.0 * window.radius
    return float(np.linalg.norm(window.upper - window.lower))


def truncation_bound(model: ModelSpec, intensity: float, window: Window, ell: float) -> float:
    """Expected number of edges from B(0, ell) to the window exterior.

    Events decided by paths inside B(0, ell) can only be affected by
    truncation if such an edge exists, so this expectation bounds the bias of
    estimating them on the finite window (Markov inequality).  Ball windows
    only; returns 0 exactly for ell = 0.
    """
    eff = model.base if model.variant == "generalized" else model
    if window.kind != "ball":
        raise ConfigurationError("truncation bound is implemented for ball windows")
    if ell == 0.0:
        return 0.0
    if ell < 0 or not window.contains_ball(np.zeros(eff.d), ell):
        raise ConfigurationError("ell must be nonnegative and inside the window")
    d = eff.d
    r_win = window.radius
    phibar = np.vectorize(lambda rho: mark_averaged_connection(eff, rho), otypes=[float])
    support = phibar_support(eff)
    model_bps = phibar_breakpoints(eff)

    def inner(s: float) -> float:
        lo = max(r_win - s, 0.0)
        if support <= lo:
            return 0.0

        def fn(rho):
            rho = np.asarray(rho, dtype=float)
            frac = np.array([cap_fraction_outside(d, s, float(p), r_win) for p in np.atleast_1d(rho)])
            return (phibar(rho) * frac).reshape(np.shape(rho))

        bps = [b for b in model_bps if b > lo] + ([s + r_win] if s + r_win > lo else [])
        res = radial_integral(fn, d=d, lower=lo, support=support, breakpoints=sorted(set(bps)))
        if res.verdict == DIVERGENT:
            return math.inf
        if res.verdict == INCONCLUSIVE:
            raise ConfigurationError(f"truncation tail not classifiable: {res.note}")
        return res.value

    vals_at = {}

    def outer(s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        out = []
        for sv in s_arr:
            if sv not in vals_at:
                vals_at[sv] = inner(float(sv)) * sv ** (d - 1)
            out.append(vals_at[sv])
        return np.array(out).reshape(np.shape(s))

    body, _ = integrate.quad(outer, 0.0, ell, epsabs=1e-12, epsrel=1e-8, limit=100)
    if math.isinf(body) or any(math.isinf(v) for v in vals_at.values()):
        return math.inf
    return intensity**2 * sphere_surface(d) ** 2 * body


@dataclass(frozen=True)
class Covering:
    """Centers of unit balls covering B(0, q), from a cubic lattice."""

    q: float
    d: int
    centers: np.ndarray

    @property
    def count(self) -> int:
        return len(self.centers)


def covering_number(q: float, d: int) -> Covering:
    """Unit-ball covering of B(0, q) with explicit centers; valid, not minimal.

    Lattice spacing 2/sqrt(d) gives cubic cells of circumradius exactly 1, so
    the cell centers cover space with unit balls.  Cells farther than q from
    the origin are dropped; points of B(0, q) on a dropped cell's boundary
    also lie in a kept neighboring cell, so coverage of the closed ball
    survives the strict cutoff.  Centers outside the ball are projected onto
    it, which only shrinks distances to covered points.
    """
    if not (q >= 1):
        raise ConfigurationError("covering ratio must be >= 1")
    if not 1 <= d <= 8:
        raise ConfigurationError("dimension must be between 1 and 8")
    if q <= 1.0:
        return Covering(q=q, d=d, centers=np.zeros((1, d)))
    h = 2.0 / math.sqrt(d)
    k_max = int(math.floor(q / h)) + 1
    axes = [np.arange(-k_max, k_max + 1) * h] * d
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    # distance from the origin to the closed cell around each lattice point
    nearest = np.clip(np.abs(grid) - h / 2.0, 0.0, None)
    cell_dist = np.sqrt(np.sum(nearest**2, axis=1))
    keep = grid[cell_dist < q]
    norms = np.linalg.norm(keep, axis=1)
    outside = norms > q
    scale = np.ones(len(keep))
    scale[outside] = q / norms[outside]
    centers = keep * scale[:, None]
    return Covering(q=q, d=d, centers=centers)


@dataclass(frozen=True)
class CoveringCheck:
    """Union-bound comparison of long-edge events at two ball radii."""

    covering: Covering
    lhs: Estimate
    rhs: Estimate
    union_bound_violations: int
    statistically_violated: bool

    def lines(self):
        n = self.covering.count
        return [
            f"covering count n({self.covering.q:g}) = {n} (d={self.covering.d})",
            f"small-ball event: p={self.lhs.p_hat:.6g} ci=[{self.lhs.ci_low:.6g}, {self.lhs.ci_high:.6g}]",
            f"large-ball event: p={self.rhs.p_hat:.6g} ci=[{self.rhs.ci_low:.6g}, {self.rhs.ci_high:.6g}]",
            f"per-replicate union-bound violations: {self.union_bound_violations}",
            "statistical check: " + ("VIOLATED" if self.statistically_violated else "not violated"),
        ]


def _translated_long_edge(graph: GeomGraph, center: np.ndarray, r: float, length: float, closed: bool) -> bool:
    """Edge with an endpoint within r of center (closed ball if asked) and length > length."""
    if graph.n_edges == 0:
        return False
    lengths = graph.edge_lengths()
    mask = lengths > length
    if not mask.any():
        return False
    pos = graph.cloud.positions
    e = graph.edges[mask]
    d0 = np.sum((pos[e[:, 0]] - center) ** 2, axis=1)
    d1 = np.sum((pos[e[:, 1]] - center) ** 2, axis=1)
    if closed:
        return bool(np.any((d0 <= r * r) | (d1 <= r * r)))
    return bool(np.any((d0 < r * r) | (d1 < r * r)))


def check_covering_inequality(
    model: ModelSpec,
    intensity: float,
    r: float,
    c: float,
    c_prime: float,
    n: int,
    seed: int,
    threads: int = 1,
) -> CoveringCheck:
    """Check count(q) * P(small-ball long edge) >= P(large-ball long edge), q = c'/c.

    Both events demand edge length > c'*r; the small event restricts an
    endpoint to B(0, r), the large one to B(0, q*r).  Per replicate the union
    bound is exact: when the large event holds, its witness endpoint lies
    within one of the covering balls, so the event translated to that center
    holds (closed balls here, matching the covering guarantee).  The CI
    comparison is statistical on top of that.
    """
    if not (c_prime >= c > 0):
        raise ConfigurationError("need c' >= c > 0")
    q = c_prime / c
    d = model.d
    cover = covering_number(q, d)
    scaled_centers = cover.centers * r
    length = c_prime * r
    window = ball_window((q + 1.0 + c_prime + WINDOW_MARGIN) * r, d=d)
    origin = np.zeros(d)

    def one(i: int):
        rep_seed = replicate_seed(seed, i)
        graph = sample_event_graph(model, intensity, window, rep_seed)
        lhs = _translated_long_edge(graph, origin, r, length, closed=False)
        rhs = _translated_long_edge(graph, origin, q * r, length, closed=False)
        violated = False
        if rhs:
            covered = any(
                _translated_long_edge(graph, center, r, length, closed=True) for center in scaled_centers
            )
            violated = not covered
        return lhs, rhs, violated

    rows = run_replicates(one, n, threads)
    lhs_est = make_estimate(sum(row[0] for row in rows), n)
    rhs_est = make_estimate(sum(row[1] for row in rows), n)
    violations = sum(row[2] for row in rows)
    stat_violated = cover.count * lhs_est.ci_high < rhs_est.ci_low
    return CoveringCheck(
        covering=cover,
        lhs=lhs_est,
        rhs=rhs_est,
        union_bound_violations=violations,
        statistically_violated=stat_violated,
    )


@dataclass(frozen=True)
class MixingReport:
    """Sample covariance of two local crossing indicators on shared graphs."""

    covariance: float
    ci_low: float
    ci_high: float
    trials: int
    near: Estimate
    far: Estimate
    r: float
    separation: float

    def lines(self):
        return [
            f"cov = {self.covariance:.6g}  ci=[{self.ci_low:.6g}, {self.ci_high:.6g}]  n={self.trials}",
            f"origin-crossing p = {self.near.p_hat:.6g}, shifted-crossing p = {self.far.p_hat:.6g}",
            f"r = {self.r:g}, center separation = {self.separation:g}",
        ]


def estimate_mixing_cov(
    model: ModelSpec,
    intensity: float,
    r: float,
    x,
    n: int,
    seed: int,
    threads: int = 1,
) -> MixingReport:
    """Covariance of the local crossing indicators at the origin and at x.

    Both indicators are evaluated on the same graph per replicate.  The CI is
    a normal approximation from the influence values, adequate for bounded
    indicators at the enforced n >= 1000.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (model.d,):
        raise ConfigurationError(f"center must have {model.d} coordinates")
    sep = float(np.linalg.norm(x))
    if not sep > 6.0 * r:
        raise ConfigurationError("centers must be separated by more than 6r")
    if n < MIN_COV_TRIALS:
        raise ConfigurationError(f"covariance CI needs at least {MIN_COV_TRIALS} replicates")
    window = ball_window(sep + (3.0 + WINDOW_MARGIN) * r, d=model.d)
    near_event = local_crossing_spec(r)
    far_event = local_crossing_spec(r, center=x)

    def one(i: int):
        rep_seed = replicate_seed(seed, i)
        graph = sample_event_graph(model, intensity, window, rep_seed)
        return near_event.evaluate(graph), far_event.evaluate(graph)

    rows = np.array(run_replicates(one, n, threads), dtype=float)
    a, b = rows[:, 0], rows[:, 1]
    a_bar, b_bar = a.mean(), b.mean()
    cov = float(np.sum((a - a_bar) * (b - b_bar)) / (n - 1))
    influence = (a - a_bar) * (b - b_bar) - cov
    se = float(np.std(influence, ddof=1) / math.sqrt(n))
    z = stats.norm.ppf(0.975)
    return MixingReport(
        covariance=cov,
        ci_low=cov - z * se,
        ci_high=cov + z * se,
        trials=n,
        near=make_estimate(int(a.sum()), n),
        far=make_estimate(int(b.sum()), n),
        r=r,
        separation=sep,
    )
