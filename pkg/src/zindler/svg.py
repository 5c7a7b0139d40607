"""Static SVG figures: level sets of H, phase portraits, hexagon snapshots.

Coordinates are written with six decimals so repeated runs are
byte-identical.
"""

from xml.sax.saxutils import escape

import numpy as np

from zindler.boundary_tracer import trace
from zindler.hexagon_flow import integrate_orbit
from zindler.period_engine import H0, H_MAX, period, turning_points
from zindler.scalar_kernel import CENTER

CANVAS = 800
MARGIN = 40
PALETTE = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50", "#16a085"]


def _f(v):
    return f"{v:.6f}"


class PhaseFrame:
    """Affine map from the square [pi/2, pi]^2 of angle pairs onto the canvas."""

    lo = np.pi / 2.0
    hi = np.pi

    def __call__(self, x, y):
        scale = (CANVAS - 2 * MARGIN) / (self.hi - self.lo)
        px = MARGIN + (np.asarray(x) - self.lo) * scale
        py = CANVAS - MARGIN - (np.asarray(y) - self.lo) * scale
        return px, py


def _document(body, title):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">\n<title>{escape(title)}</title>\n'
        f'<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>\n'
    )
    return head + "".join(body) + "</svg>\n"


def _polyline(px, py, color, closed=False, width=1.5):
    pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in zip(px, py))
    tag = "polygon" if closed else "polyline"
    return f'<{tag} points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"/>\n'


def _region(frame):
    corners = [(np.pi / 2, np.pi / 2), (np.pi, np.pi / 2), (np.pi / 2, np.pi)]
    px, py = frame(*np.array(corners).T)
    return _polyline(px, py, "#555555", closed=True, width=2)


def _dot(frame, x, y, r=4, color="black"):
    px, py = frame(x, y)
    return f'<circle cx="{_f(px)}" cy="{_f(py)}" r="{r}" fill="{color}"/>\n'


def level_curve(H, points=600):
    """Trace {H = const} by integrating the flow for one period from (u_-, u_-)."""
    res = period(H)
    um = turning_points(H).u_minus
    step = 1e-3
    every = max(1, int(res.T / step / points))
    return integrate_orbit((um, um), res.T, step=step, record_every=every).states


def levelsets_svg(levels):
    frame = PhaseFrame()
    body = [_region(frame), _dot(frame, CENTER, CENTER, r=5)]
    for i, H in enumerate(levels):
        states = level_curve(H)
        px, py = frame(states[:, 0], states[:, 1])
        body.append(f"<g><title>H = {_f(H)}</title>\n")
        body.append(_polyline(px, py, PALETTE[i % len(PALETTE)], closed=True))
        body.append("</g>\n")
    title = f"Level curves of H in D; H0 = {_f(H0)}, H_max = {_f(H_MAX)}"
    return _document(body, title)


def orbit_svg(orbit):
    frame = PhaseFrame()
    body = [_region(frame)]
    s = orbit.states
    if np.ptp(s, axis=0).max() < 1e-12:
        body.append(_dot(frame, s[0, 0], s[0, 1], r=5, color=PALETTE[1]))
    else:
        px, py = frame(s[:, 0], s[:, 1])
        body.append(_polyline(px, py, PALETTE[0]))
    title = f"Phase portrait, H = {_f(orbit.H_reference)}, drift = {orbit.H_max_drift:.3e}"
    return _document(body, title)


def hexagon_frames_svg(s0, frames=8, step=1e-3):
    """A strip of hexagon snapshots at equal fractions of one period."""
    flow = trace(s0, step=step)
    T = flow.t[-1]
    cell = CANVAS / frames
    scale = cell / 7.0
    body = []
    for j in range(frames):
        k = int(np.argmin(np.abs(flow.t - j * T / frames)))
        verts = flow.positions[k]
        sides = np.hypot(*(np.roll(verts, -1, axis=0) - verts).T)
        cx, cy = (j + 0.5) * cell, CANVAS / 2
        px, py = cx + scale * verts[:, 0], cy - scale * verts[:, 1]
        body.append(
            f"<g><title>t = {_f(flow.t[k])}, max |side - 2| = {np.max(np.abs(sides - 2)):.3e}</title>\n"
        )
        body.append(_polyline(px, py, PALETTE[j % len(PALETTE)], closed=True))
        body.append("</g>\n")
    return _document(body, f"Hexagon snapshots over one period, H = {_f(flow.H)}")


def vertex_paths_svg(flow):
    pts = flow.positions.reshape(-1, 2)
    extent = max(np.abs(pts).max(), 1.0) * 1.1
    scale = (CANVAS / 2 - MARGIN) / extent
    body = []
    for i in range(6):
        px = CANVAS / 2 + scale * flow.positions[:, i, 0]
        py = CANVAS / 2 - scale * flow.positions[:, i, 1]
        body.append(_polyline(px, py, PALETTE[i % len(PALETTE)]))
    v0 = flow.positions[0]
    body.append(_polyline(CANVAS / 2 + scale * v0[:, 0], CANVAS / 2 - scale * v0[:, 1], "#999999", closed=True))
    title = f"Vertex paths, H = {_f(flow.H)}, closure defect = {flow.closure_defect:.3e}"
    return _document(body, title)
