# Tour of the built-in model catalog: for each model print the distance
# profile of the mark-averaged connection probability, the maximum possible
# edge length, and the framework validation verdict (symmetry, monotonicity,
# and whether the expected-degree integral converges).
#
# Run with `python3 demos/model_gallery.py`.

import math

from perco import catalog, mark_averaged_connection, max_range, validate_framework

RHOS = [0.25, 0.5, 1.0, 2.0, 4.0]


if __name__ == "__main__":
    models = catalog(2)
    width = max(len(k) for k in models)
    header = " ".join(f"{f'phibar({r})':>12s}" for r in RHOS)
    print(f"{'model':>{width}s} {header} {'max range':>10s}")
    for name, model in models.items():
        vals = " ".join(f"{mark_averaged_connection(model, r):12.5g}" for r in RHOS)
        rng = max_range(model)
        rng_s = "inf" if math.isinf(rng) else f"{rng:.3g}"
        print(f"{name:>{width}s} {vals} {rng_s:>10s}")

    print()
    print(f"{'model':>{width}s} {'symmetric':>9s} {'monotone':>8s} {'integral':>12s} {'verdict':>11s}")
    for name, model in models.items():
        rep = validate_framework(model, n_samples=5000, seed=11)
        integral = "inf" if math.isinf(rep.integral_value) else f"{rep.integral_value:.4g}"
        print(
            f"{name:>{width}s} {str(rep.symmetric):>9s} {str(rep.monotone):>8s} "
            f"{integral:>12s} {rep.integral_verdict:>11s}"
        )
    print()
    print("a divergent verdict means the expected degree is infinite at any intensity")
