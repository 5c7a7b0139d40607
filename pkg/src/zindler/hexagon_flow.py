"""Reduced Hamiltonian dynamics of the centrally symmetric hexagon.

The state is the pair (x, y) of interior angles at v1, v2; the flow is

    x' = cos(x + y) - cos y,    y' = cos x - cos(x + y),

with t the arc-length parameter of the boundary curve. Integration is a
classical fixed-step RK4; H is monitored at every step rather than enforced.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from zindler.errors import NoReturn, OutOfRegion, StateLeftRegion, StepTooLarge
from zindler.scalar_kernel import (
    AngleState,
    from_symmetric,
    hamiltonian,
    in_admissible_region,
    to_symmetric,
)

__all__ = [
    "Orbit",
    "TripleAngles",
    "flow",
    "from_symmetric",
    "general_carousel_field",
    "integrate_orbit",
    "return_time",
    "rk4_step",
    "section_crossings",
    "to_symmetric",
    "triple_angles",
    "vector_field",
]

DEFAULT_STEP = 1e-3
DEFAULT_RECORD_EVERY = 10
DEFAULT_DRIFT_CEILING = 1e-6
ADAPTIVE_DRIFT_RATE = 1e-10
ADAPTIVE_MAX_HALVINGS = 12


class TripleAngles(NamedTuple):
    x1: float
    x2: float
    x3: float
    alpha1: float
    alpha2: float
    alpha3: float

    @property
    def alphas(self):
        return (self.alpha1, self.alpha2, self.alpha3)


@dataclass(frozen=True)
class Orbit:
    """Sampled solution of the reduced flow.

    ``t`` has shape (n,), ``states`` shape (n, 2). ``H_max_drift`` is taken
    over every integration step, not only the recorded samples.
    """

    t: np.ndarray
    states: np.ndarray
    H_reference: float
    H_max_drift: float
    step: float
    method: str

    @property
    def samples(self):
        return [(float(t), AngleState(float(s[0]), float(s[1]))) for t, s in zip(self.t, self.states)]

    @property
    def final_state(self):
        return AngleState(float(self.states[-1, 0]), float(self.states[-1, 1]))

    def __len__(self):
        return len(self.t)


def vector_field(x, y):
    """Right-hand side (x', y'); equals (-dH/dy, dH/dx)."""
    c = np.cos(x + y)
    return c - np.cos(y), np.cos(x) - c


def _field(x, y):
    c = math.cos(x + y)
    return c - math.cos(y), math.cos(x) - c


def rk4_step(x, y, h):
    k1x, k1y = _field(x, y)
    k2x, k2y = _field(x + 0.5 * h * k1x, y + 0.5 * h * k1y)
    k3x, k3y = _field(x + 0.5 * h * k2x, y + 0.5 * h * k2y)
    k4x, k4y = _field(x + h * k3x, y + h * k3y)
    return (
        x + h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0,
        y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0,
    )


def _step_sizes(duration, step):
    n = max(1, math.ceil(duration / step - 1e-9))
    last = duration - (n - 1) * step
    return n, last


def _integrate_fixed(s0, duration, step, record_every):
    x, y = float(s0[0]), float(s0[1])
    h_ref = hamiltonian(x, y)
    n, last = _step_sizes(duration, step)
    ts = [0.0]
    xs = [(x, y)]
    drift = 0.0
    for k in range(1, n + 1):
        h = step if k < n else last
        xn, yn = rk4_step(x, y, h)
        t = (k - 1) * step + h
        if not in_admissible_region(xn, yn):
            raise StateLeftRegion(
                f"trajectory left D at t={t:.6g}",
                last_time=(k - 1) * step,
                last_state=AngleState(x, y),
            )
        x, y = xn, yn
        drift = max(drift, abs(math.sin(x) + math.sin(y) - math.sin(x + y) - h_ref))
        if k % record_every == 0 or k == n:
            ts.append(t)
            xs.append((x, y))
    return np.array(ts), np.array(xs), float(h_ref), drift


def integrate_orbit(
    s0,
    duration,
    step=DEFAULT_STEP,
    method="fixed_rk4",
    record_every=DEFAULT_RECORD_EVERY,
    max_drift=DEFAULT_DRIFT_CEILING,
):
    """Integrate the reduced flow from ``s0`` for ``duration``.

    ``method="adaptive"`` repeats the fixed-step run, halving the step until
    the H drift per unit time is at most 1e-10. The fixed method raises
    StepTooLarge when the drift exceeds ``max_drift`` (None disables it).
    """
    if duration <= 0 or step <= 0:
        raise ValueError("duration and step must be positive")
    if not in_admissible_region(*s0):
        raise OutOfRegion(f"initial state {tuple(s0)} is not in D")

    if method == "fixed_rk4":
        t, states, h_ref, drift = _integrate_fixed(s0, duration, step, record_every)
        if max_drift is not None and drift > max_drift:
            raise StepTooLarge(f"H drift {drift:.3e} exceeds ceiling {max_drift:.3e}")
        return Orbit(t, states, h_ref, drift, step, method)

    if method == "adaptive":
        h = step
        for _ in range(ADAPTIVE_MAX_HALVINGS + 1):
            t, states, h_ref, drift = _integrate_fixed(s0, duration, h, record_every)
            if drift / duration <= ADAPTIVE_DRIFT_RATE:
                return Orbit(t, states, h_ref, drift, h, method)
            h /= 2.0
        raise StepTooLarge(f"drift rate still {drift / duration:.3e} at step {2 * h:.3e}")

    raise ValueError(f"unknown method {method!r}")


def flow(s0, t, step=DEFAULT_STEP):
    """Flow map Phi_t(s0); negative ``t`` integrates backwards. No region check."""
    x, y = float(s0[0]), float(s0[1])
    if t == 0:
        return AngleState(x, y)
    n, last = _step_sizes(abs(t), step)
    sign = 1.0 if t > 0 else -1.0
    for k in range(1, n + 1):
        h = step if k < n else last
        x, y = rk4_step(x, y, sign * h)
    return AngleState(x, y)


def section_crossings(s0, duration, step=DEFAULT_STEP, count=None):
    """Times in (0, duration] where v = (x - y)/2 crosses zero upward.

    Each crossing found between grid steps is refined by root finding on a
    partial RK4 step, so the times carry the integrator's accuracy rather
    than that of linear interpolation. These are exactly the times at which
    u = (x + y)/2 reaches its maximum u_+.
    """
    x, y = float(s0[0]), float(s0[1])
    n, last = _step_sizes(duration, step)
    times = []
    for k in range(1, n + 1):
        h = step if k < n else last
        xn, yn = rk4_step(x, y, h)
        if x - y < 0.0 <= xn - yn:
            x0, y0 = x, y

            def gap(tau):
                a, b = rk4_step(x0, y0, tau)
                return a - b

            tau = brentq(gap, 0.0, h, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            times.append((k - 1) * step + tau)
            if count is not None and len(times) >= count:
                break
        x, y = xn, yn
    return times


def return_time(s0, step=DEFAULT_STEP, max_duration=18.0):
    """Period of the orbit through ``s0`` measured on the section {v = 0, v' > 0}."""
    x, y = float(s0[0]), float(s0[1])
    vdot = math.cos(x + y) - math.cos(y) - math.cos(x) + math.cos(x + y)
    on_section = x == y and vdot > 0.0
    needed = 1 if on_section else 2
    times = section_crossings(s0, max_duration, step, count=needed)
    if len(times) < needed:
        raise NoReturn(f"orbit through {tuple(s0)} did not return within {max_duration}")
    return times[0] if on_section else times[1] - times[0]


def triple_angles(x, y):
    """Third interior angle and the tangent-chord angles alpha_i = x_{i+2} - pi/2."""
    if not in_admissible_region(x, y):
        raise OutOfRegion(f"({x}, {y}) is not in D: some alpha_i would be <= 0")
    x3 = 2.0 * np.pi - x - y
    half = np.pi / 2.0
    return TripleAngles(x, y, x3, x3 - half, x - half, y - half)


def general_carousel_field(alphas):
    """Angle velocities x_i' = sin(alpha_{i-1}) - sin(alpha_i), indices mod N."""
    a = np.asarray(alphas, dtype=float)
    if a.ndim != 1 or a.size < 3:
        raise ValueError("need at least three tangent-chord angles")
    s = np.sin(a)
    return np.roll(s, 1) - s
