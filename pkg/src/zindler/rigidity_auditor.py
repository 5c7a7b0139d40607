"""Feasibility audit of the rotation-quantization argument.

A non-disk body with rotation group of order 2k and radius period T
must satisfy T = P / (2km) for integers k, m >= 1. The scan intersects
the interval of T values this allows (P ranging over its admissible
interval) with the two-sided bounds on T(H); an empty feasible set means
no such body exists.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from zindler.period_engine import T_LOWER, T_UPPER, period

P_LOWER = 12.0
P_UPPER = 2.0 * np.pi * (1.0 + np.sqrt(2.0))


@dataclass(frozen=True)
class SymmetryData:
    k: int
    m: int
    P: float
    T: float

    @property
    def sigma_K(self):
        return np.pi / self.k

    @property
    def eta_K(self):
        return self.P / (2 * self.k)


@dataclass(frozen=True)
class FeasibilityRow:
    k: int
    m: int
    T_interval_allowed: tuple
    T_interval_required: tuple
    feasible: bool
    reason: str


@dataclass(frozen=True)
class QuantizationMatch:
    k: int
    m: int
    ties: list = field(default_factory=list)


def perimeter_bounds():
    """Hexagon perimeter below, circumference of the radius-(1 + sqrt 2) disk above."""
    return P_LOWER, P_UPPER


def _row(k, m, t_low, t_high):
    p_low, p_high = perimeter_bounds()
    req = (p_low / (2 * k * m), p_high / (2 * k * m))
    # Allowed T is the open interval (t_low, t_high); required is closed.
    if req[0] >= t_high:
        return FeasibilityRow(k, m, (t_low, t_high), req, False,
                              f"required T >= {req[0]:.6f} but T < {t_high:.6f}")
    if req[1] <= t_low:
        return FeasibilityRow(k, m, (t_low, t_high), req, False,
                              f"required T <= {req[1]:.6f} but T > {t_low:.6f}")
    lo, hi = max(req[0], t_low), min(req[1], t_high)
    return FeasibilityRow(k, m, (t_low, t_high), req, True,
                          f"T in ({lo:.6f}, {hi:.6f}) is not excluded")


def feasibility_scan(k_max=10, m_max=10, T_bounds=None):
    if k_max < 1 or m_max < 1:
        raise ValueError("k_max and m_max must be at least 1")
    t_low, t_high = T_bounds if T_bounds is not None else (T_LOWER, T_UPPER)
    return [_row(k, m, t_low, t_high) for k in range(1, k_max + 1) for m in range(1, m_max + 1)]


def period_quantization_check(T, P, k_max=10, m_max=10, rtol=1e-6):
    """Integer pair (k, m) with 2kmT = P to within rtol * P, or None.

    Among pairs with the same minimal mismatch the larger k wins; all tied
    pairs are listed in ``ties``.
    """
    if T <= 0 or P <= 0:
        raise ValueError("T and P must be positive")
    cands = []
    for k in range(1, k_max + 1):
        for m in range(1, m_max + 1):
            err = abs(2 * k * m * T - P)
            if err <= rtol * P:
                cands.append((err, k, m))
    if not cands:
        return None
    best = min(c[0] for c in cands)
    ties = sorted(((k, m) for err, k, m in cands if err <= best + 1e-15 * P), reverse=True)
    return QuantizationMatch(ties[0][0], ties[0][1], ties)


def monotonicity_scan(H_grid):
    """Rows (H, T, sign of T(H_i) - T(H_{i-1})); the first row has no sign.

    Observational only; nothing here asserts monotonicity.
    """
    H = np.asarray(H_grid, dtype=float)
    if np.any(np.diff(H) <= 0):
        raise ValueError("H grid must be strictly increasing")
    Ts = [period(h).T for h in H]
    rows = [(float(H[0]), Ts[0], None)]
    for i in range(1, len(H)):
        rows.append((float(H[i]), Ts[i], int(np.sign(Ts[i] - Ts[i - 1]))))
    return rows


def proof_report(k_max=10, m_max=10, T_bounds=None):
    rows = feasibility_scan(k_max, m_max, T_bounds)
    t_bounds = T_bounds if T_bounds is not None else (T_LOWER, T_UPPER)
    return {
        "perimeter_bounds": list(perimeter_bounds()),
        "T_bounds": [float(t_bounds[0]), float(t_bounds[1])],
        "rows": [{"k": r.k, "m": r.m, "feasible": r.feasible, "reason": r.reason} for r in rows],
        "conclusion": "feasible_pairs_found" if any(r.feasible for r in rows) else "empty_feasible_set",
    }


def report_json(report):
    return json.dumps(report, separators=(",", ":"))
