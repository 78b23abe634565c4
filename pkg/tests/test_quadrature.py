import math

import numpy as np
import pytest
from scipy import integrate

from perco.errors import ConfigurationError
from perco.ppp import ball_window, box_window, unit_ball_volume
from perco.quadrature import (
    ball_overlap_volume,
    cap_fraction_outside,
    radial_integral,
    set_covariance_radial,
)


def test_radial_integral_finite_support_exact():
    # integral of rho^{d-1} * 1{rho <= 2} from 0 to support: 2^d/d
    for d in (1, 2, 3):
        res = radial_integral(lambda r: 1.0 if r <= 2.0 else 0.0, d, support=2.0, breakpoints=[2.0])
        assert res.verdict == "finite"
        assert res.value == pytest.approx(2.0**d / d, rel=1e-9)


def test_radial_integral_power_tail_exact():
    # f = min(1, rho^-3), d=2: integral rho^{d-1} f = 1/2 + log-free tail = 1/2 + 1
    res = radial_integral(lambda r: min(1.0, r**-3.0), 2, breakpoints=[1.0])
    assert res.verdict == "finite"
    assert res.value == pytest.approx(0.5 + 1.0, rel=1e-7)
    assert res.tail_exponent == pytest.approx(-2.0, abs=1e-6)


def test_radial_integral_divergent():
    res = radial_integral(lambda r: min(1.0, r**-2.0), 2, breakpoints=[1.0])
    assert res.verdict == "divergent"
    assert math.isinf(res.value)
    res2 = radial_integral(lambda r: min(1.0, r**-0.9), 1, breakpoints=[1.0])
    assert res2.verdict == "divergent"


def test_radial_integral_near_critical_band():
    # exponent just below -1: any finite fit is untrustworthy, so no silent pass
    res = radial_integral(lambda r: min(1.0, r**-1.02), 1, breakpoints=[1.0])
    assert res.verdict == "inconclusive"
    assert "boundary" in res.note


def test_radial_integral_lower_limit():
    # start above the support end -> exactly zero
    res = radial_integral(lambda r: 1.0 if r <= 1.0 else 0.0, 2, lower=2.0, support=1.0)
    assert res.value == 0.0
    # tail-only integral with lower inside the power-law zone
    res2 = radial_integral(lambda r: min(1.0, r**-4.0), 1, lower=3.0, breakpoints=[1.0])
    assert res2.value == pytest.approx(integrate.quad(lambda r: r**-4.0, 3.0, np.inf)[0], rel=1e-6)


def test_radial_integral_inconclusive_on_oscillation():
    res = radial_integral(lambda r: (2.0 + math.sin(3 * math.log(r))) / r**1.5 / 3.0, 1)
    assert res.verdict == "inconclusive"
    assert res.note


def test_ball_overlap_closed_forms():
    # d=1: overlap of [-R,R] and [rho-R, rho+R] is 2R - rho
    assert ball_overlap_volume(1, 1.0, 0.5) == pytest.approx(1.5)
    # d=2: lens area formula
    R, rho = 1.0, 0.8
    lens = 2 * R * R * math.acos(rho / (2 * R)) - 0.5 * rho * math.sqrt(4 * R * R - rho * rho)
    assert ball_overlap_volume(2, R, rho) == pytest.approx(lens, rel=1e-12)
    # d=3: standard sphere-sphere intersection
    R, rho = 2.0, 1.0
    cap = math.pi * (2 * R - rho) ** 2 * (rho**2 + 4 * rho * R) / 12.0
    assert ball_overlap_volume(3, R, rho) == pytest.approx(cap, rel=1e-12)
    assert ball_overlap_volume(2, 1.0, 2.0) == 0.0
    assert ball_overlap_volume(2, 1.0, 0.0) == pytest.approx(math.pi)


def test_cap_fraction_outside_monte_carlo():
    gen = np.random.default_rng(7)
    for d in (1, 2, 3, 4):
        for s, rho, R in [(0.5, 1.0, 1.2), (1.0, 0.5, 1.2), (0.2, 2.0, 1.0), (0.9, 0.2, 1.0)]:
            x = np.zeros(d)
            x[0] = s
            dirs = gen.normal(size=(200_000, d))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            frac = float(np.mean(np.linalg.norm(x + rho * dirs, axis=1) > R))
            got = cap_fraction_outside(d, s, rho, R)
            assert got == pytest.approx(frac, abs=0.005), (d, s, rho, R)
    assert cap_fraction_outside(3, 0.0, 0.5, 1.0) == 0.0
    assert cap_fraction_outside(3, 0.0, 1.5, 1.0) == 1.0


def test_set_covariance_ball_and_box():
    w = ball_window(2.0, d=2)
    assert set_covariance_radial(w, 0.0) == pytest.approx(4 * math.pi)
    assert set_covariance_radial(w, 4.0) == 0.0
    # box d=2 angular-average formula vs brute-force 2D integral of the
    # translated-overlap volume over directions
    bw = box_window([0.0, 0.0], [3.0, 5.0])
    for rho in (0.5, 1.5, 2.9):
        def overlap(theta):
            dx, dy = abs(rho * math.cos(theta)), abs(rho * math.sin(theta))
            return (3.0 - dx) * (5.0 - dy)

        brute = integrate.quad(overlap, 0, 2 * math.pi, limit=200)[0] / (2 * math.pi)
        assert set_covariance_radial(bw, rho) == pytest.approx(brute, rel=1e-9)
    with pytest.raises(ConfigurationError):
        set_covariance_radial(bw, 3.5)
    bw1 = box_window([0.0], [4.0])
    assert set_covariance_radial(bw1, 1.0) == pytest.approx(3.0)


def test_campbell_identity_ball():
    # integral over B x B of f(|x-y|) equals sigma_d * int rho^{d-1} f(rho) C(rho)
    # checked against a direct 2D Monte Carlo in d=1 where it is exact by symmetry
    R = 1.5

    def f(rho):
        return math.exp(-rho)

    val = integrate.quad(lambda rho: f(rho) * set_covariance_radial(ball_window(R, d=1), rho) * 2, 0, 2 * R)[0]
    brute = integrate.dblquad(lambda y, x: f(abs(x - y)), -R, R, -R, R)[0]
    assert val == pytest.approx(brute, rel=1e-6)
    assert unit_ball_volume(1) == pytest.approx(2.0)
