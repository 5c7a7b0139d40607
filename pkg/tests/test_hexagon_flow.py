import time

import numpy as np
import pytest

from zindler.errors import OutOfRegion, StateLeftRegion, StepTooLarge
from zindler.hexagon_flow import (
    flow, general_carousel_field, integrate_orbit, return_time, section_crossings,
    triple_angles, vector_field,
)
from zindler.period_engine import period, turning_points
from zindler.scalar_kernel import CENTER, H0, H_MAX, hamiltonian, in_admissible_region, to_symmetric


def random_states(n, seed=0, margin=1e-2):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        x, y = rng.uniform(np.pi / 2, np.pi, 2)
        if x > np.pi / 2 + margin and y > np.pi / 2 + margin and x + y < 1.5 * np.pi - margin:
            out.append((x, y))
    return out


def test_vector_field_examples():
    assert np.allclose(vector_field(CENTER, CENTER), (0, 0), atol=1e-15)
    dx, dy = vector_field(2.0, 2.2)
    # direct trig evaluation
    assert abs(dx - (np.cos(4.2) - np.cos(2.2))) < 1e-15
    assert abs(dx - 0.09824) < 1e-4 and abs(dy - 0.07411) < 1e-4


def test_vector_field_is_hamiltonian_and_divergence_free():
    e = 1e-6
    for x, y in random_states(100, seed=11):
        dHx = (hamiltonian(x + e, y) - hamiltonian(x - e, y)) / (2 * e)
        dHy = (hamiltonian(x, y + e) - hamiltonian(x, y - e)) / (2 * e)
        fx, fy = vector_field(x, y)
        assert abs(fx + dHy) < 1e-6 and abs(fy - dHx) < 1e-6
        div = (vector_field(x + e, y)[0] - vector_field(x - e, y)[0]
               + vector_field(x, y + e)[1] - vector_field(x, y - e)[1]) / (2 * e)
        assert abs(div) < 1e-6


def test_conservation_from_reference_state():
    t0 = time.perf_counter()
    orb = integrate_orbit((2.0, 2.2), 20.0, step=1e-3)
    assert time.perf_counter() - t0 < 1.0
    assert abs(orb.H_reference - 2.589369) < 1e-6
    assert orb.H_max_drift <= 1e-9
    assert np.all(np.diff(orb.t) > 0)
    assert all(in_admissible_region(*s) for s in orb.states)
    assert orb.t[-1] == pytest.approx(20.0, abs=1e-12)


def test_fixed_point_orbit_is_constant():
    orb = integrate_orbit((CENTER, CENTER), 5.0)
    assert np.max(np.abs(orb.states - CENTER)) < 1e-15


def test_one_period_returns_to_start():
    T = period(hamiltonian(2.0, 2.2)).T
    end = integrate_orbit((2.0, 2.2), T, step=1e-3).final_state
    assert np.hypot(end.x - 2.0, end.y - 2.2) < 1e-6


def test_u_dot_relation_along_orbit():
    orb = integrate_orbit((2.0, 2.2), 4.0, step=1e-4, record_every=1)
    u, v = to_symmetric(orb.states[:, 0], orb.states[:, 1])
    du = np.diff(u) / np.diff(orb.t)
    um = 0.5 * (u[1:] + u[:-1])
    vm = 0.5 * (v[1:] + v[:-1])
    assert np.max(np.abs(du + np.sin(um) * np.sin(vm))) < 1e-5


def test_time_reversal_symmetry():
    for x, y in random_states(5, seed=4, margin=0.1):
        back = flow((x, y), -1.3)
        fwd = flow((y, x), 1.3)
        assert abs(back.x - fwd.y) < 1e-12 and abs(back.y - fwd.x) < 1e-12


def test_orbits_stay_in_region_for_a_period():
    for H in np.linspace(H0 + 1e-3, H_MAX - 1e-3, 6):
        um = turning_points(H).u_minus
        orb = integrate_orbit((um, um), period(H).T)
        assert all(in_admissible_region(*s) for s in orb.states)


def test_errors():
    with pytest.raises(OutOfRegion):
        integrate_orbit((1.0, 2.0), 1.0)
    with pytest.raises(StateLeftRegion):
        # outside the admissible energy band the level curve meets the boundary
        integrate_orbit((1.6, 1.6), 10.0)
    with pytest.raises(StepTooLarge):
        integrate_orbit((2.0, 2.2), 10.0, step=0.5, max_drift=1e-14)
    with pytest.raises(ValueError):
        integrate_orbit((2.0, 2.2), -1.0)


def test_adaptive_mode_meets_drift_rate():
    orb = integrate_orbit((2.0, 2.2), 5.0, step=0.2, method="adaptive")
    assert orb.H_max_drift / 5.0 <= 1e-10
    assert orb.step < 0.2


def test_return_time_and_crossings():
    H = hamiltonian(2.0, 2.2)
    T = period(H).T
    assert return_time((2.0, 2.2)) == pytest.approx(T, rel=1e-9)
    times = section_crossings((2.0, 2.2), 3 * T)
    assert np.allclose(np.diff(times), T, rtol=1e-9)


def test_triple_angles():
    a = triple_angles(CENTER, CENTER)
    assert abs(a.x3 - CENTER) < 1e-15
    assert np.allclose(a.alphas, np.pi / 6, atol=1e-15)
    b = triple_angles(2.0, 2.2)
    assert abs(b.x1 + b.x2 + b.x3 - 2 * np.pi) < 1e-12
    assert abs(b.x3 - 2.083185) < 1e-6 and abs(b.alpha1 - 0.512389) < 1e-6
    assert all(0 < al < np.pi / 2 for al in b.alphas)
    with pytest.raises(OutOfRegion):
        triple_angles(np.pi / 2, 2.0)


def test_general_field_reduces_to_planar_flow():
    a = triple_angles(2.0, 2.2).alphas
    rates = general_carousel_field(list(a) * 2)
    assert np.allclose(rates[:2], vector_field(2.0, 2.2), atol=1e-14)
    assert abs(rates.sum()) < 1e-15
    assert np.all(general_carousel_field([0.3] * 7) == 0)
    rng = np.random.default_rng(5)
    assert abs(general_carousel_field(rng.uniform(0, np.pi / 2, 9)).sum()) < 1e-14
