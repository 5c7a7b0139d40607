"""Scalar functions of the reduced hexagon problem.

Everything here is a pure function of its arguments and accepts either
Python floats or numpy arrays (broadcasting elementwise). Angles are in
radians throughout.
"""

from typing import NamedTuple

import numpy as np

# Energy window of nonconstant closed orbits inside D.
H0 = 1.0 + np.sqrt(2.0)
H_MAX = 3.0 * np.sqrt(3.0) / 2.0

CENTER = 2.0 * np.pi / 3.0


class AngleState(NamedTuple):
    """Interior angles (x, y) = (x1, x2) of the inscribed hexagon."""

    x: float
    y: float


class SymmetricCoords(NamedTuple):
    u: float
    v: float


def hamiltonian(x, y):
    """H(x, y) = sin x + sin y - sin(x + y), one quarter of the hexagon area."""
    return np.sin(x) + np.sin(y) - np.sin(x + y)


def hamiltonian_gradient(x, y):
    s = np.cos(x + y)
    return np.cos(x) - s, np.cos(y) - s


def hamiltonian_hessian(x, y):
    s = np.sin(x + y)
    return np.array([[-np.sin(x) + s, s], [s, -np.sin(y) + s]])


def f_profile(u):
    return 2.0 * np.sin(u) - np.sin(2.0 * u)


def g_profile(u):
    return 2.0 * np.sin(u) + np.sin(2.0 * u)


def f_second_derivative(u):
    return -2.0 * np.sin(u) + 4.0 * np.sin(2.0 * u)


def q_potential(H, u):
    """Squared speed of u = (x+y)/2 on the level set H: sin^2 u - (H + sin 2u)^2 / 4."""
    return np.sin(u) ** 2 - (H + np.sin(2.0 * u)) ** 2 / 4.0


def q_potential_factored(H, u):
    return (f_profile(u) - H) * (g_profile(u) + H) / 4.0


def q_second_derivative(H, u):
    c = np.cos(2.0 * u)
    return 2.0 * (1.0 + c + H * np.sin(2.0 * u) - 2.0 * c * c)


def in_admissible_region(x, y):
    """Strict membership in D = {pi/2 < x, pi/2 < y, x + y < 3pi/2}."""
    half = np.pi / 2.0
    return bool(x > half and y > half and x + y < 1.5 * np.pi)


def distance_to_boundary(x, y):
    """Distance from an interior point to the boundary of D.

    Negative values flag points outside D (there the magnitude is only a
    lower bound). Diagnostic only; membership decisions use
    in_admissible_region.
    """
    half = np.pi / 2.0
    d_diag = (1.5 * np.pi - x - y) / np.sqrt(2.0)
    return min(x - half, y - half, d_diag)


def to_symmetric(x, y):
    return SymmetricCoords((x + y) / 2.0, (x - y) / 2.0)


def from_symmetric(u, v):
    return AngleState(u + v, u - v)
