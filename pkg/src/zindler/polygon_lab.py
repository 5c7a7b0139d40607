"""Planar polygon geometry for the carousel: hexagons built from interior
angles, the interior-triangle relations, central symmetry, and inscribed
N-gon diagnostics on closed convex curves.

Polygons are counterclockwise; the side length is normalized to 2.
"""

import abc
import math
from dataclasses import dataclass

import numpy as np

from zindler.errors import (
    AngleSumInvalid,
    DegenerateCurve,
    NonClosure,
    SumConstraintViolated,
)

SIDE = 2.0
ANGLE_SUM_TOL = 1e-9
CLOSURE_TOL = 1e-9
ELLIPSE_TABLE_SIZE = 4096


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def rotation(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class Polygon:
    vertices: np.ndarray

    @property
    def n(self):
        return len(self.vertices)

    @property
    def edges(self):
        """e_i = v_{i+1} - v_i."""
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def midpoints(self):
        return 0.5 * (self.vertices + np.roll(self.vertices, -1, axis=0))

    @property
    def side_lengths(self):
        return np.hypot(*self.edges.T)

    @property
    def center(self):
        return self.vertices.mean(axis=0)

    @property
    def interior_angles(self):
        return interior_angles(self.vertices)

    @property
    def area(self):
        return shoelace_area(self.vertices)

    def is_convex(self):
        e = self.edges
        cr = _cross(np.roll(e, 1, axis=0), e)
        return bool(np.all(cr > 0) or np.all(cr < 0))

    def moved(self, angle=0.0, shift=(0.0, 0.0)):
        return type(self)(self.vertices @ rotation(angle).T + np.asarray(shift, dtype=float))


@dataclass(frozen=True, eq=False)
class Hexagon(Polygon):
    def __post_init__(self):
        if np.shape(self.vertices) != (6, 2):
            raise ValueError("a hexagon needs exactly six planar vertices")


def shoelace_area(vertices):
    """Signed area, positive for counterclockwise order."""
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))


def interior_angles(vertices):
    """Interior angle at each vertex of a counterclockwise polygon (pi minus the turn)."""
    v = np.asarray(vertices, dtype=float)
    e = np.roll(v, -1, axis=0) - v
    prev = np.roll(e, 1, axis=0)
    turn = np.arctan2(_cross(prev, e), np.sum(prev * e, axis=1))
    return np.pi - turn


def hexagon_from_angles(angles, angle_tol=ANGLE_SUM_TOL, closure_tol=CLOSURE_TOL):
    """Walk six sides of length 2 turning left by pi - x_i at each vertex.

    The first vertex sits at the origin and the first side points along +x.
    The walk uses x_2..x_6; x_1 is implied by the angle sum 4pi.
    """
    x = np.asarray(angles, dtype=float)
    if x.shape != (6,):
        raise ValueError("need six interior angles")
    if abs(x.sum() - 4.0 * np.pi) > angle_tol:
        raise AngleSumInvalid(f"interior angles sum to {x.sum():.12g}, expected 4pi")
    verts = np.zeros((7, 2))
    heading = 0.0
    for i in range(6):
        verts[i + 1] = verts[i] + SIDE * np.array([math.cos(heading), math.sin(heading)])
        heading += np.pi - x[(i + 1) % 6]
    gap = float(np.hypot(*(verts[6] - verts[0])))
    if gap > closure_tol:
        raise NonClosure(f"side walk misses the start by {gap:.3e}")
    return Hexagon(verts[:6])


def rescale_to_unit_side(vertices, side):
    """Map a polygon with side length ``side`` into the side-2 frame."""
    return np.asarray(vertices, dtype=float) * (SIDE / side)


@dataclass(frozen=True)
class InteriorTriangle:
    """Triangle v2 v4 v6 of a hexagon: angles psi_i and opposite sides l_i."""

    psi1: float
    psi2: float
    psi3: float
    l1: float
    l2: float
    l3: float

    @property
    def sine_ratios(self):
        return (
            math.sin(self.psi1) / self.l1,
            math.sin(self.psi2) / self.l2,
            math.sin(self.psi3) / self.l3,
        )


def interior_triangle(x1, x2, x3, x4, x5, x6, tol=ANGLE_SUM_TOL):
    odd, even = x1 + x3 + x5, x2 + x4 + x6
    if abs(odd - 2.0 * np.pi) > tol or abs(even - 2.0 * np.pi) > tol:
        raise SumConstraintViolated(f"odd sum {odd:.12g}, even sum {even:.12g}; both must be 2pi")
    return InteriorTriangle(
        psi1=x2 - x5 / 2.0,
        psi2=x4 - x1 / 2.0,
        psi3=x6 - x3 / 2.0,
        l1=4.0 * math.sin(x5 / 2.0),
        l2=4.0 * math.sin(x1 / 2.0),
        l3=4.0 * math.sin(x3 / 2.0),
    )


def measured_interior_triangle(h):
    """Measure the triangle on alternate vertices v2, v4, v6 directly."""
    b, d, f = h.vertices[1], h.vertices[3], h.vertices[5]

    def angle(p, q, r):
        a1, a2 = q - p, r - p
        return math.atan2(abs(float(_cross(a1, a2))), float(np.dot(a1, a2)))

    return InteriorTriangle(
        psi1=angle(b, d, f),
        psi2=angle(d, f, b),
        psi3=angle(f, b, d),
        l1=float(np.hypot(*(f - d))),
        l2=float(np.hypot(*(b - f))),
        l3=float(np.hypot(*(d - b))),
    )


def central_symmetry_defect(h):
    """Spread of the opposite-vertex midpoints (v_i + v_{i+3})/2, i = 1..3."""
    v = np.asarray(h.vertices if isinstance(h, Polygon) else h, dtype=float)
    mids = 0.5 * (v[:3] + v[3:6])
    return float(np.max(np.hypot(*(mids - mids[0]).T)))


class CurveEvaluator(abc.ABC):
    """Closed curve parametrized counterclockwise by arc length t (mod perimeter)."""

    @property
    @abc.abstractmethod
    def perimeter(self):
        ...

    @abc.abstractmethod
    def point(self, t):
        ...

    @abc.abstractmethod
    def unit_tangent(self, t):
        ...


class Circle(CurveEvaluator):
    def __init__(self, radius, center=(0.0, 0.0)):
        if radius <= 0:
            raise DegenerateCurve("circle radius must be positive")
        self.radius = float(radius)
        self.center = np.asarray(center, dtype=float)

    @property
    def perimeter(self):
        return 2.0 * np.pi * self.radius

    def point(self, t):
        phi = np.asarray(t, dtype=float) / self.radius
        return self.center + self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def unit_tangent(self, t):
        phi = np.asarray(t, dtype=float) / self.radius
        return np.stack([-np.sin(phi), np.cos(phi)], axis=-1)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


class Ellipse(CurveEvaluator):
    """Ellipse (a cos s, b sin s) reparametrized by arc length.

    A cumulative-length table on ``table_size`` equally spaced values of s
    (8-point Gauss-Legendre per cell) gives a first guess by linear
    interpolation; three Newton steps on the exact length function then
    refine it to rounding level.
    """

    def __init__(self, a, b, table_size=ELLIPSE_TABLE_SIZE):
        if a <= 0 or b <= 0:
            raise DegenerateCurve("ellipse semi-axes must be positive")
        self.a, self.b = float(a), float(b)
        self._s = np.linspace(0.0, 2.0 * np.pi, table_size + 1)
        lo, hi = self._s[:-1], self._s[1:]
        self._cum = np.concatenate([[0.0], np.cumsum(self._length(lo, hi))])

    def _speed(self, s):
        return np.hypot(self.a * np.sin(s), self.b * np.cos(s))

    def _length(self, lo, hi):
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        nodes = mid[..., None] + half[..., None] * _GL_NODES
        return half * np.sum(_GL_WEIGHTS * self._speed(nodes), axis=-1)

    @property
    def perimeter(self):
        return float(self._cum[-1])

    def _param(self, t):
        t = np.mod(np.asarray(t, dtype=float), self.perimeter)
        s = np.interp(t, self._cum, self._s)
        for _ in range(3):
            k = np.clip(np.searchsorted(self._s, s, side="right") - 1, 0, len(self._s) - 2)
            arc = self._cum[k] + self._length(self._s[k], s)
            s = s - (arc - t) / self._speed(s)
        return s

    def point(self, t):
        s = self._param(t)
        return np.stack([self.a * np.cos(s), self.b * np.sin(s)], axis=-1)

    def unit_tangent(self, t):
        s = self._param(t)
        d = np.stack([-self.a * np.sin(s), self.b * np.cos(s)], axis=-1)
        return d / np.linalg.norm(d, axis=-1, keepdims=True)


class RigidMotion(CurveEvaluator):
    """A curve rotated by ``angle`` about the origin and then translated."""

    def __init__(self, curve, angle=0.0, shift=(0.0, 0.0)):
        self.curve = curve
        self._rot = rotation(angle)
        self._shift = np.asarray(shift, dtype=float)

    @property
    def perimeter(self):
        return self.curve.perimeter

    def point(self, t):
        return self.curve.point(t) @ self._rot.T + self._shift

    def unit_tangent(self, t):
        return self.curve.unit_tangent(t) @ self._rot.T


def parse_curve(text):
    """``circle:R`` or ``ellipse:a,b``."""
    kind, _, args = text.partition(":")
    try:
        values = [float(p) for p in args.split(",")] if args else []
    except ValueError:
        raise ValueError(f"bad curve parameters in {text!r}") from None
    if kind == "circle" and len(values) == 1:
        return Circle(values[0])
    if kind == "ellipse" and len(values) == 2:
        return Ellipse(*values)
    raise ValueError(f"unrecognized curve {text!r}; use circle:R or ellipse:a,b")


@dataclass(frozen=True, eq=False)
class InscribedPolygon:
    polygon: Polygon
    side_lengths: np.ndarray
    interior_angles: np.ndarray


def _inscribed_vertices(curve, t, n):
    if n < 3:
        raise ValueError("N must be at least 3")
    ts = t + np.arange(n) * curve.perimeter / n
    return curve.point(ts)


def inscribed_polygon(curve, t, n):
    """Vertices v_i = curve(t + (i-1) P/N) with their side lengths and angles."""
    v = _inscribed_vertices(curve, t, n)
    poly = Polygon(v)
    sides = poly.side_lengths
    if np.min(sides) < 1e-12:
        raise DegenerateCurve("inscribed polygon has repeated vertices")
    return InscribedPolygon(poly, sides, interior_angles(v))


def carousel_defect(curve, n, t_samples=64):
    """Largest deviation of any inscribed side from the global mean side.

    Zero for a Zindler carousel, where every side keeps one length.
    """
    if t_samples < 2:
        raise ValueError("t_samples must be at least 2")
    ts = np.arange(t_samples) * curve.perimeter / t_samples
    sides = np.array([Polygon(_inscribed_vertices(curve, t, n)).side_lengths for t in ts])
    return float(np.max(np.abs(sides - sides.mean())))


def mean_side(curve, n, t_samples=64):
    ts = np.arange(t_samples) * curve.perimeter / t_samples
    return float(np.mean([Polygon(_inscribed_vertices(curve, t, n)).side_lengths for t in ts]))


def midpoint_parallel_defect(curve, n, t, dt=1e-5):
    """max_i |sin| of the angle between the midpoint velocity and side i."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    ahead = Polygon(_inscribed_vertices(curve, t + dt, n)).midpoints
    behind = Polygon(_inscribed_vertices(curve, t - dt, n)).midpoints
    mdot = (ahead - behind) / (2.0 * dt)
    e = Polygon(_inscribed_vertices(curve, t, n)).edges
    norm = np.hypot(*mdot.T) * np.hypot(*e.T)
    ok = norm > 0
    if not np.any(ok):
        return 0.0
    return float(np.max(np.abs(_cross(mdot[ok], e[ok])) / norm[ok]))


def polygon_csv(vertices):
    lines = ["i,x,y"]
    for i, (x, y) in enumerate(np.asarray(vertices, dtype=float), start=1):
        lines.append(f"{i},{x:.6f},{y:.6f}")
    return "\n".join(lines) + "\n"
