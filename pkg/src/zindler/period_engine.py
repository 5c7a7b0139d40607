"""Turning points, the period function T(H), radius relations and the
two-sided parabolic audits of Q_H.

T(H) = 2 * integral_{u-}^{u+} du / sqrt(Q_H(u)). The substitution
u = c + h sin(theta), c = (u+ + u-)/2, h = (u+ - u-)/2 turns the
inverse-square-root endpoint singularities into a smooth integrand in
theta, which the midpoint rule integrates with spectral accuracy.
"""

import math
from dataclasses import dataclass

import numpy as np

from zindler.errors import NegativeRadicand, OutOfEnergyRange, QuadratureNotConverged
from zindler.scalar_kernel import (
    CENTER,
    H0,
    H_MAX,
    f_profile,
    f_second_derivative,
    g_profile,
    q_potential,
    q_second_derivative,
)

LINEAR_PERIOD = 4.0 * np.pi / 3.0
DEGENERATE_WINDOW = 1e-9

# Parabolic domination constants for Q_H on [u-, u+].
UPPER_CURVATURE = 8.0 / 3.0
LOWER_CURVATURE = (4.0 - np.sqrt(2.0)) / 2.0
Q2_FLOOR = -16.0 / 3.0
F_GAP_CURVATURE = 2.0 * np.sqrt(2.0) - 1.0

T_LOWER = np.pi * np.sqrt(1.5)
T_UPPER = 2.0 * np.pi / np.sqrt(LOWER_CURVATURE)

AUDIT_SLACK = -1e-12

CSV_HEADER = "H,u_minus,u_plus,T,quadrature_error,r_min,r_max,lower_margin,upper_margin"


@dataclass(frozen=True)
class TurningPoints:
    u_minus: float
    u_plus: float
    residual: float


@dataclass(frozen=True)
class PeriodResult:
    H: float
    turning: TurningPoints
    T: float
    quadrature_error: float
    nodes: int
    degenerate: bool = False


@dataclass(frozen=True)
class BoundAudit:
    """Minimum slack of each appendix inequality over a uniform u-grid.

    ``pass_`` covers the two parabolic bounds on Q_H only; ``all_hold``
    additionally covers the auxiliary inequalities used to prove them.
    """

    H: float
    grid: int
    lower_margin: float
    upper_margin: float
    curvature_margin: float
    f_gap_margin: float
    f_curvature_margin: float
    g_margin: float

    @property
    def pass_(self):
        return self.lower_margin >= AUDIT_SLACK and self.upper_margin >= AUDIT_SLACK

    @property
    def all_hold(self):
        return self.pass_ and min(
            self.curvature_margin, self.f_gap_margin, self.f_curvature_margin, self.g_margin
        ) >= AUDIT_SLACK


def period_bounds():
    return T_LOWER, T_UPPER


def _check_energy(H):
    if not (H0 < H < H_MAX):
        raise OutOfEnergyRange(f"H={H!r} is outside ({H0}, {H_MAX})")


def _bisect(g, lo, hi, max_iter=200):
    # g(lo) and g(hi) have opposite signs; iterate to machine resolution.
    glo = g(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def turning_points(H):
    """The two roots u_-(H) < 2pi/3 < u_+(H) of F(u) = H in (pi/2, 3pi/4)."""
    _check_energy(H)

    def g(u):
        return float(f_profile(u)) - H

    lo_a, hi_a = np.pi / 2.0, CENTER
    lo_b, hi_b = CENTER, 0.75 * np.pi
    if not (g(lo_a) < 0.0 < g(hi_a)) or not (g(hi_b) < 0.0 < g(lo_b)):
        raise OutOfEnergyRange(f"no sign change bracketing the roots at H={H!r}")
    um = _bisect(g, lo_a, hi_a)
    up = _bisect(g, lo_b, hi_b)
    return TurningPoints(um, up, max(abs(g(um)), abs(g(up))))


def _sinc(z):
    return np.sinc(z / np.pi)


def _f_slope(a, u, d):
    # (F(u) - F(a)) / (u - a) with d = u - a, free of cancellation for small d.
    return 2.0 * np.cos(0.5 * (u + a)) * _sinc(0.5 * d) - 2.0 * np.cos(u + a) * _sinc(d)


def _midpoint_sum(H, um, up, n):
    # With u = um + d1 = up - d2, d1 = 2h sin^2(phi/2), d2 = 2h cos^2(phi/2),
    # F(u) - H = -d1 d2 F[um, u, up] and d1 d2 = (h cos theta)^2, so the
    # Jacobian cancels the parabola exactly and the integrand in theta is
    # 2 / sqrt(-F[um, u, up] (G(u) + H)).
    h = 0.5 * (up - um)
    k = np.arange(n) + 0.5
    d1 = 2.0 * h * np.sin(0.5 * np.pi * k / n) ** 2
    d2 = 2.0 * h * np.sin(0.5 * np.pi * k[::-1] / n) ** 2
    u = np.where(d1 <= d2, um + d1, up - d2)
    curvature = -(_f_slope(u, up, d2) - _f_slope(um, u, d1)) / (up - um)
    integrand = 2.0 / np.sqrt(curvature * (g_profile(u) + H))
    return 2.0 * np.pi / n * integrand.sum()


def period(H, rtol=1e-10, min_nodes=64, max_nodes=65536):
    """T(H) with a node-doubling error estimate.

    Energies within 1e-9 of H_max return the small-oscillation limit 4pi/3
    flagged ``degenerate`` (the integrand there is numerically 0/0).
    """
    if H_MAX - DEGENERATE_WINDOW <= H <= H_MAX + 1e-12:
        tp = TurningPoints(CENTER, CENTER, abs(float(f_profile(CENTER)) - H))
        # T - 4pi/3 = O(H_max - H); report that scale as the error.
        return PeriodResult(H, tp, LINEAR_PERIOD, abs(H_MAX - H), 0, degenerate=True)
    tp = turning_points(H)
    n = min_nodes
    prev = _midpoint_sum(H, tp.u_minus, tp.u_plus, n)
    while n < max_nodes:
        n *= 2
        cur = _midpoint_sum(H, tp.u_minus, tp.u_plus, n)
        err = abs(cur - prev)
        if err <= rtol * abs(cur):
            return PeriodResult(H, tp, float(cur), float(err), n)
        prev = cur
    raise QuadratureNotConverged(f"T({H}) error estimate {err:.3e} after {n} nodes")


def radius(H, u):
    """Distance from the center to the vertex whose neighbours' mean angle is u."""
    rad = 1.0 - 2.0 * H / np.tan(u)
    if np.any(np.asarray(rad) < 0.0):
        raise NegativeRadicand(f"1 - 2H cot u < 0 for H={H}, u={u}")
    return np.sqrt(rad)


def radius_from_angles(x, y):
    """Same distance written with the interior angles x, y."""
    return np.sqrt(3.0 - 2.0 * np.cos(x) - 2.0 * np.cos(y) + 2.0 * np.cos(x + y))


def radius_extrema(H):
    tp = turning_points(H)
    return float(radius(H, tp.u_minus)), float(radius(H, tp.u_plus))


def audit_parabolic_bounds(H, grid_points=1001):
    """Check every inequality of the parabolic-domination argument on a grid.

    Margins (minimum slack, >= 0 means the inequality holds):
      lower        Q_H(u) - (4 - sqrt 2)/2 * p(u)
      upper        8/3 * p(u) - Q_H(u)
      curvature    Q_H''(u) + 16/3
      f_gap        F(u) - H - (2 sqrt 2 - 1) * p(u)
      f_curvature  (6 - 4H) - F''(u)
      g            min(G(u) + H - 4 sin u_+, 4 sin u_+ - 2 sqrt 2)
    with p(u) = (u - u_-)(u_+ - u).
    """
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    tp = turning_points(H)
    um, up = tp.u_minus, tp.u_plus
    u = np.linspace(um, up, grid_points)
    u[0], u[-1] = um, up
    p = (u - um) * (up - u)
    q = q_potential(H, u)
    s_plus = 4.0 * math.sin(up)
    return BoundAudit(
        H=H,
        grid=grid_points,
        lower_margin=float(np.min(q - LOWER_CURVATURE * p)),
        upper_margin=float(np.min(UPPER_CURVATURE * p - q)),
        curvature_margin=float(np.min(q_second_derivative(H, u) - Q2_FLOOR)),
        f_gap_margin=float(np.min(f_profile(u) - H - F_GAP_CURVATURE * p)),
        f_curvature_margin=float(np.min(6.0 - 4.0 * H - f_second_derivative(u))),
        g_margin=float(min(np.min(g_profile(u) + H - s_plus), s_plus - 2.0 * np.sqrt(2.0))),
    )


def scan_row(H, grid_points=1001):
    """One row of the period scan table, keyed as in CSV_HEADER."""
    res = period(H)
    r_min, r_max = radius_extrema(H)
    audit = audit_parabolic_bounds(H, grid_points)
    return {
        "H": H,
        "u_minus": res.turning.u_minus,
        "u_plus": res.turning.u_plus,
        "T": res.T,
        "quadrature_error": res.quadrature_error,
        "r_min": r_min,
        "r_max": r_max,
        "lower_margin": audit.lower_margin,
        "upper_margin": audit.upper_margin,
    }
