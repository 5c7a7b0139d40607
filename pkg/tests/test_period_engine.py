import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from zindler.errors import NegativeRadicand, OutOfEnergyRange
from zindler.hexagon_flow import integrate_orbit, return_time
from zindler.period_engine import (
    LINEAR_PERIOD, T_LOWER, T_UPPER, audit_parabolic_bounds, period, period_bounds, radius,
    radius_extrema, radius_from_angles, scan_row, turning_points, CSV_HEADER,
)
from zindler.scalar_kernel import CENTER, H0, H_MAX, f_profile, g_profile, q_potential

energies = st.floats(H0 + 1e-6, H_MAX - 1e-6)


def qaws_period(H):
    """Independent oracle: QAWS with weight (u-a)^-1/2 (b-u)^-1/2 on the smooth quotient."""
    tp = turning_points(H)
    a, b = tp.u_minus, tp.u_plus
    w = b - a
    fp = lambda u: 2 * math.cos(u) - 2 * math.cos(2 * u)
    ga = fp(a) * (g_profile(a) + H) / (4 * w)
    gb = -fp(b) * (g_profile(b) + H) / (4 * w)

    def g(u):
        s = (u - a) / w
        if s < 1e-7:
            return ga + s * (gb - ga)
        if s > 1 - 1e-7:
            return gb + (1 - s) * (ga - gb)
        return q_potential(H, u) / ((u - a) * (b - u))

    val, _ = quad(lambda u: 1 / math.sqrt(g(u)), a, b, weight="alg", wvar=(-0.5, -0.5),
                  epsabs=1e-13, epsrel=1e-12, limit=200)
    return 2 * val


def test_bounds_constants():
    lo, hi = period_bounds()
    assert lo == pytest.approx(np.pi * np.sqrt(1.5), rel=1e-15)
    assert hi == pytest.approx(5.525847, abs=1e-5)


def test_turning_point_examples():
    tp = turning_points(H0 + 1e-12)
    assert abs(tp.u_plus - 3 * np.pi / 4) < 1e-5
    tp = turning_points(H_MAX - 1e-12)
    assert abs(tp.u_minus - CENTER) < 2e-6 and abs(tp.u_plus - CENTER) < 2e-6
    tp = turning_points(2.5)
    assert abs(tp.u_minus - 1.896) < 5e-3 and abs(tp.u_plus - 2.286) < 5e-3
    # bisection oracle done independently with a plain loop
    lo, hi = np.pi / 2, CENTER
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f_profile(mid) < 2.5 else (lo, mid)
    assert abs(tp.u_minus - lo) < 1e-12


def test_turning_points_bracketing_200():
    prev = None
    for H in np.linspace(H0 + 1e-6, H_MAX - 1e-6, 200):
        tp = turning_points(H)
        assert np.pi / 2 < tp.u_minus < CENTER < tp.u_plus < 3 * np.pi / 4
        assert tp.residual <= 1e-12
        mid = np.linspace(tp.u_minus, tp.u_plus, 7)[1:-1]
        assert np.all(f_profile(mid) > H)
        if prev is not None:
            assert tp.u_minus >= prev.u_minus and tp.u_plus <= prev.u_plus
        prev = tp


@pytest.mark.parametrize("H", [H0 - 0.1, H0, H_MAX, 3.0, float("nan")])
def test_energy_range_errors(H):
    with pytest.raises(OutOfEnergyRange):
        turning_points(H)
    with pytest.raises(OutOfEnergyRange):
        audit_parabolic_bounds(H)


def test_period_matches_qaws_oracle():
    for H in np.linspace(H0 + 1e-3, H_MAX - 1e-3, 9):
        assert period(H).T == pytest.approx(qaws_period(H), rel=1e-9)


def test_period_matches_ode_return_time():
    for H in np.linspace(H0 + 1e-3, H_MAX - 1e-3, 20):
        um = turning_points(H).u_minus
        assert abs(period(H).T - return_time((um, um))) / period(H).T <= 1e-6


def test_degenerate_limit():
    res = period(H_MAX - 1e-6)
    assert abs(res.T - LINEAR_PERIOD) < 1e-3
    assert not res.degenerate
    near = period(H_MAX - 1e-10)
    assert near.degenerate and near.T == LINEAR_PERIOD


@settings(max_examples=40, deadline=None)
@given(energies)
def test_period_within_bounds(H):
    res = period(H)
    assert T_LOWER < res.T < T_UPPER
    assert res.quadrature_error <= 1e-10 * res.T


def test_period_grows_toward_lower_energy_edge():
    # observational; T near H0 is reported, not asserted against a closed form
    assert period(H0 + 1e-9).T > period(2.5).T > period(H_MAX - 1e-6).T


def test_audits_50_energies():
    for H in np.linspace(H0 + 1e-3, H_MAX - 1e-3, 50):
        a = audit_parabolic_bounds(H, 1001)
        assert a.pass_ and a.all_hold
        assert a.lower_margin >= -1e-12 and a.upper_margin >= -1e-12


@pytest.mark.parametrize("H", [H0 + 1e-6, H_MAX - 1e-6, 2.5])
def test_audits_near_edges(H):
    assert audit_parabolic_bounds(H).all_hold


def test_audit_matches_direct_grid_oracle():
    H = 2.5
    tp = turning_points(H)
    u = np.linspace(tp.u_minus, tp.u_plus, 1001)
    p = (u - tp.u_minus) * (tp.u_plus - u)
    q = (np.sin(u) ** 2) - (H + np.sin(2 * u)) ** 2 / 4
    a = audit_parabolic_bounds(H, 1001)
    assert a.upper_margin == pytest.approx(np.min(8 / 3 * p - q), abs=1e-14)
    assert a.lower_margin == pytest.approx(np.min(q - (4 - np.sqrt(2)) / 2 * p), abs=1e-14)


def test_g_at_upper_turning_point():
    for H in np.linspace(H0 + 1e-6, H_MAX - 1e-6, 30):
        up = turning_points(H).u_plus
        assert abs(g_profile(up) + H - 4 * np.sin(up)) < 1e-12
        assert 4 * np.sin(up) >= 2 * np.sqrt(2)


def test_radius_examples():
    assert radius(H_MAX, CENTER) == pytest.approx(2.0, abs=1e-14)
    for H in (2.45, 2.5, 2.55):
        up = turning_points(H).u_plus
        assert radius(H, up) == pytest.approx(1 - 2 * np.cos(up), abs=1e-12)
    u = np.linspace(1.6, 3.0, 50)
    assert np.all(np.diff(radius(2.5, u)) > 0)
    with pytest.raises(NegativeRadicand):
        radius(2.5, 1.0)


@settings(max_examples=100)
@given(st.floats(np.pi / 2 + 1e-4, np.pi - 1e-4), st.floats(np.pi / 2 + 1e-4, np.pi - 1e-4))
def test_radius_forms_agree(x, y):
    if x + y >= 1.5 * np.pi:
        return
    H = np.sin(x) + np.sin(y) - np.sin(x + y)
    assert radius(H, 0.5 * (x + y)) == pytest.approx(radius_from_angles(x, y), abs=1e-12)


def test_radius_extrema():
    rmin, rmax = radius_extrema(H_MAX - 1e-12)
    assert abs(rmin - 2) < 1e-5 and abs(rmax - 2) < 1e-5
    _, rmax = radius_extrema(H0 + 1e-9)
    assert abs(rmax - (1 + np.sqrt(2))) < 1e-4
    for H in np.linspace(H0 + 1e-9, H_MAX - 1e-6, 200):
        assert radius_extrema(H)[1] < 1 + np.sqrt(2)


def test_radius_minimal_period_from_maxima():
    H = 2.5
    um = turning_points(H).u_minus
    T = period(H).T
    orb = integrate_orbit((um, um), 3.2 * T, step=1e-3, record_every=1)
    u = orb.states.sum(axis=1) / 2
    r = radius(H, u)
    idx = np.where((r[1:-1] > r[:-2]) & (r[1:-1] >= r[2:]))[0] + 1
    peaks = []
    for i in idx:
        a, b, c = r[i - 1], r[i], r[i + 1]
        peaks.append(orb.t[i] + 0.5 * (a - c) / (a - 2 * b + c) * 1e-3)
    assert len(peaks) >= 3
    assert np.allclose(np.diff(peaks), T, atol=1e-5)


def test_scan_row_keys():
    row = scan_row(2.5)
    assert list(row) == CSV_HEADER.split(",")
    assert row["r_min"] < row["r_max"]
