# Long-edge dichotomy: with bounded radii the probability of seeing an edge
# longer than c*r dies once c*r exceeds the maximum reach, while heavy-tailed
# radii keep producing long edges at every scale. The trend probe classifies
# the two regimes from the same estimator output.
#
# Run with `python3 demos/long_edge_decay.py`.

import math

from perco import catalog, probe_long_edge_persistence


def show(name, model, r_min, c, intensity, seed):
    rep = probe_long_edge_persistence(
        model, intensity, c=c, r_min=r_min, k=5, n=150, seed=seed,
    )
    print(f"--- {name} (c={c}, intensity={intensity}) ---")
    print(f"{'r':>8s} {'hits':>6s} {'p_hat':>8s} {'ci_high':>8s} {'expected edges':>14s}")
    for r, est, camp in zip(rep.r_values, rep.estimates, rep.campbell_means):
        camp_s = "inf" if math.isinf(camp) else f"{camp:.4g}"
        print(f"{r:8.3f} {est.hits:6d} {est.p_hat:8.4f} {est.ci_high:8.4f} {camp_s:>14s}")
    slope = "n/a" if rep.slope is None else f"{rep.slope:+.3f}"
    print(f"verdict: {rep.verdict}   fitted log-slope: {slope}")
    if rep.note:
        print(f"note: {rep.note}")
    print()


if __name__ == "__main__":
    models = catalog(2)
    # bounded reach: edges cannot exceed 1, so thresholds past 1 are sterile
    show("constant radius 0.5", models["boolean-fixed"], r_min=0.3, c=1.0, intensity=1.0, seed=3)
    # heavy-tailed radii: long edges at every scale, expected count diverges
    show("pareto radii", models["boolean-heavy"], r_min=0.5, c=1.0, intensity=0.5, seed=4)
