"""Reconstruct candidate boundary curves from the reduced angle flow.

Each vertex of the inscribed hexagon moves with unit speed along its
tangent, which is the outgoing side direction rotated outward by the
tangent-chord angle alpha_i. The angle state (x, y) and the six vertex
positions are integrated together by one RK4 scheme.

A closed floating body would make vertex 1 land on vertex 2's starting
point with the whole hexagon relabeled by one step. The closure defect
measures how badly the reconstruction misses that.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from zindler.errors import InconsistentAngles, NoReturn, OutOfRegion, StateLeftRegion
from zindler.hexagon_flow import return_time
from zindler.period_engine import H_MAX, DEGENERATE_WINDOW, period, turning_points
from zindler.polygon_lab import Hexagon, hexagon_from_angles
from zindler.scalar_kernel import CENTER, hamiltonian, in_admissible_region

TANGENT_TOL = 1e-10
TRAJECTORY_HEADER = "t,i,x,y"
CLOSURE_HEADER = "H,closure_defect,radius_residual"


def initial_hexagon(x, y):
    """Centrally symmetric side-2 hexagon with angles (x, y, z, x, y, z), centered at 0."""
    if not in_admissible_region(x, y):
        raise OutOfRegion(f"({x}, {y}) is not in D")
    z = 2.0 * np.pi - x - y
    h = hexagon_from_angles([x, y, z, x, y, z])
    return Hexagon(h.vertices - 0.5 * (h.vertices[0] + h.vertices[3]))


def _alpha6(x, y):
    x3 = 2.0 * np.pi - x - y
    a = np.array([x3, x, y]) - 0.5 * np.pi
    return np.concatenate([a, a])


def _rotate(vecs, angles):
    c, s = np.cos(angles), np.sin(angles)
    return np.stack([c * vecs[:, 0] - s * vecs[:, 1], s * vecs[:, 0] + c * vecs[:, 1]], axis=1)


def _signed_angle(a, b):
    return np.arctan2(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0], np.sum(a * b, axis=1))


def tangent_directions(h, a, tol=TANGENT_TOL):
    """Unit tangents at the six vertices.

    The outgoing side direction at v_i is rotated outward by alpha_i. The
    outward sense is whichever rotation makes the incoming side sit at
    angle alpha_{i-1} on the other side of the tangent; if neither sense
    passes, the angles do not belong to this hexagon.
    """
    alphas = np.concatenate([np.asarray(a.alphas if hasattr(a, "alphas") else a[3:], dtype=float)] * 2)
    v = np.asarray(h.vertices if hasattr(h, "vertices") else h, dtype=float)
    e = np.roll(v, -1, axis=0) - v
    e = e / np.linalg.norm(e, axis=1, keepdims=True)
    incoming = np.roll(e, 1, axis=0)
    for sense in (-1.0, 1.0):
        tangents = _rotate(e, sense * alphas)
        measured = _signed_angle(incoming, tangents)
        if np.max(np.abs(measured + sense * np.roll(alphas, 1))) <= tol:
            return tangents
    raise InconsistentAngles("tangent-chord angles do not match the hexagon")


def _rates(x, y, verts):
    c = math.cos(x + y)
    dx, dy = c - math.cos(y), math.cos(x) - c
    e = np.roll(verts, -1, axis=0) - verts
    e /= np.sqrt(e[:, 0] ** 2 + e[:, 1] ** 2)[:, None]
    return dx, dy, _rotate(e, -_alpha6(x, y))


def _rk4(x, y, verts, h):
    k1x, k1y, k1v = _rates(x, y, verts)
    k2x, k2y, k2v = _rates(x + 0.5 * h * k1x, y + 0.5 * h * k1y, verts + 0.5 * h * k1v)
    k3x, k3y, k3v = _rates(x + 0.5 * h * k2x, y + 0.5 * h * k2y, verts + 0.5 * h * k2v)
    k4x, k4y, k4v = _rates(x + h * k3x, y + h * k3y, verts + h * k3v)
    return (
        x + h * (k1x + 2 * k2x + 2 * k3x + k4x) / 6.0,
        y + h * (k1y + 2 * k2y + 2 * k3y + k4y) / 6.0,
        verts + h * (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0,
    )


@dataclass(frozen=True, eq=False)
class VertexFlow:
    """Co-integrated angle state and vertex positions.

    ``positions`` has shape (n, 6, 2) and ``angles`` shape (n, 2), sampled at
    times ``t``. ``closure_time`` is the arc length after which the hexagon
    best matches its initial position relabeled by one vertex;
    ``closure_defect`` is the largest vertex mismatch there, so it includes
    the gap between v1 and the starting point of v2.
    """

    t: np.ndarray
    positions: np.ndarray
    angles: np.ndarray
    H: float
    closure_time: float
    closure_defect: float
    return_time: float | None
    radius_residual: float
    step: float

    @property
    def trajectories(self):
        return [list(zip(self.t, self.positions[:, i])) for i in range(6)]

    def side_lengths(self):
        e = np.roll(self.positions, -1, axis=1) - self.positions
        return np.hypot(e[..., 0], e[..., 1])

    def speeds(self):
        d = np.diff(self.positions, axis=0)
        return np.hypot(d[..., 0], d[..., 1]) / np.diff(self.t)[:, None]

    def symmetry_defect(self):
        return float(np.max(np.abs(self.positions[:, 3:] + self.positions[:, :3])))

    def swept_perimeter(self):
        return 6.0 * self.closure_time

    def to_csv(self):
        lines = [TRAJECTORY_HEADER]
        for t, frame in zip(self.t, self.positions):
            for i, (px, py) in enumerate(frame, start=1):
                lines.append(f"{t:.6f},{i},{px:.6f},{py:.6f}")
        return "\n".join(lines) + "\n"


def _radius_residual(H, angles, positions):
    x, y = angles[:, 0], angles[:, 1]
    z = 2.0 * np.pi - x - y
    worst = 0.0
    # |v_{i+2}|^2 depends on the angles at v_i and v_{i+1}.
    for (a, b), idx in (((x, y), 2), ((y, z), 0), ((z, x), 1)):
        r2 = positions[:, idx, 0] ** 2 + positions[:, idx, 1] ** 2
        worst = max(worst, float(np.max(np.abs(r2 - (1.0 - 2.0 * H / np.tan(0.5 * (a + b)))))))
    return worst


def trace(s0, duration=None, step=1e-3):
    """Co-integrate the angle flow and the six vertex positions from ``s0``.

    ``duration`` defaults to one period T(H(s0)) and may not exceed two.
    """
    x, y = float(s0[0]), float(s0[1])
    if not in_admissible_region(x, y):
        raise OutOfRegion(f"({x}, {y}) is not in D")
    H = float(hamiltonian(x, y))
    T = period(H).T
    if duration is None:
        duration = T
    if duration <= 0 or step <= 0:
        raise ValueError("duration and step must be positive")
    if duration > 2.0 * T * (1 + 1e-12):
        raise ValueError(f"duration {duration} exceeds two periods ({2 * T})")

    verts = initial_hexagon(x, y).vertices.copy()
    target = np.roll(verts, -1, axis=0)
    n = max(1, math.ceil(duration / step - 1e-9))
    last = duration - (n - 1) * step
    ts = np.empty(n + 1)
    ang = np.empty((n + 1, 2))
    pos = np.empty((n + 1, 6, 2))
    ts[0], ang[0], pos[0] = 0.0, (x, y), verts
    for k in range(1, n + 1):
        h = step if k < n else last
        xn, yn, vn = _rk4(x, y, verts, h)
        if not in_admissible_region(xn, yn):
            raise StateLeftRegion(f"angle state left D at t={ts[k - 1] + h:.6g}", ts[k - 1], (x, y))
        x, y, verts = xn, yn, vn
        ts[k], ang[k], pos[k] = ts[k - 1] + h, (x, y), verts

    tau, defect = _closure(ts, ang, pos, target)
    fixed = H >= H_MAX - DEGENERATE_WINDOW
    ret = None if fixed else return_time(s0, step)
    return VertexFlow(
        t=ts,
        positions=pos,
        angles=ang,
        H=H,
        closure_time=tau,
        closure_defect=defect,
        return_time=ret,
        radius_residual=_radius_residual(H, ang, pos),
        step=step,
    )


def _closure(ts, ang, pos, target):
    # Squared mismatch to the relabeled start is smooth in t; its derivative
    # is 2 sum (v_i - w_i) . T_i, which brentq drives to zero on a partial step.
    gap = np.sum((pos - target) ** 2, axis=(1, 2))
    k = int(np.argmin(gap))
    if k == 0 or k == len(ts) - 1:
        raise NoReturn("vertex 1 does not come around to vertex 2 within the traced span")

    def slope(j, dt):
        x, y, v = _rk4(ang[j, 0], ang[j, 1], pos[j], dt) if dt else (ang[j, 0], ang[j, 1], pos[j])
        tangents = _rates(x, y, v)[2]
        return 2.0 * float(np.sum((v - target) * tangents)), v

    lo = k - 1
    h = ts[k + 1] - ts[lo]
    s_lo, _ = slope(lo, 0.0)
    s_hi, _ = slope(lo, h)
    if s_lo < 0.0 < s_hi:
        dt = brentq(lambda d: slope(lo, d)[0], 0.0, h, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    else:
        dt = ts[k] - ts[lo]
    v = slope(lo, dt)[1]
    defect = float(np.max(np.hypot(*(v - target).reshape(-1, 2).T)))
    return float(ts[lo] + dt), defect


@dataclass(frozen=True)
class ClosureRow:
    H: float
    closure_defect: float
    radius_residual: float
    closure_time: float


def closure_scan(H_grid, step=1e-3):
    """Trace one period from (u_-(H), u_-(H)) for each H and record the defect."""
    rows = []
    for H in H_grid:
        if H >= H_MAX - DEGENERATE_WINDOW:
            s0 = (CENTER, CENTER)
        else:
            um = turning_points(H).u_minus
            s0 = (um, um)
        flow = trace(s0, step=step)
        rows.append(ClosureRow(float(H), flow.closure_defect, flow.radius_residual, flow.closure_time))
    return rows


def closure_csv(rows):
    lines = [CLOSURE_HEADER]
    for r in rows:
        lines.append(f"{r.H:.12g},{r.closure_defect:.6e},{r.radius_residual:.6e}")
    return "\n".join(lines) + "\n"
