"""
Derived quantities on flow snapshots: accumulated area, norms, gradient, the Harnack
quantity A - 2t arctan(y_x), crossing counts and positive-part L1 distances
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from solver.grid import Grid, GridFunction
from utils.errors import PreconditionError


@dataclass(frozen=True, eq=False)
class AccumulatedArea:
    """Cumulative trapezoid integral of y from -L to each node"""

    grid: Grid
    values: np.ndarray

    @property
    def total(self):
        return float(self.values[-1])


def _same_grid(f, g):
    if f.grid != g.grid:
        raise PreconditionError("grid functions live on different grids")


def accumulated_area(f):
    return AccumulatedArea(f.grid, cumulative_trapezoid(f.values, dx=f.grid.h, initial=0.0))


def total_area(f):
    """Rectangle sum h * sum(y), the quantity the scheme conserves up to boundary flux"""
    return float(f.grid.h * np.sum(f.values))


def lp_norm(f, p):
    if not p > 1:
        raise PreconditionError(f"p must be > 1 (got {p})")
    return float(trapezoid(np.abs(f.values) ** p, dx=f.grid.h) ** (1.0 / p))


def norms(f, p=None):
    """
    Trapezoid L1 (and optionally Lp) norms, sup norm and discrete Lipschitz constant

    Returns:
        dict: l1, sup, lip and, when p is given, lp
    """
    h = f.grid.h
    out = {
        "l1": float(trapezoid(np.abs(f.values), dx=h)),
        "sup": float(np.max(np.abs(f.values))),
        "lip": float(np.max(np.abs(np.diff(f.values))) / h),
    }
    if p is not None:
        out["lp"] = lp_norm(f, p)
        out["p"] = float(p)
    return out


def gradient(f):
    """Central differences inside, second-order one-sided differences at the ends"""
    return GridFunction(f.grid, np.gradient(f.values, f.grid.h, edge_order=2))


def harnack_quantity(f, t):
    """Pointwise A(x) - 2t arctan(y_x)"""
    if t < 0:
        raise PreconditionError(f"t must be >= 0 (got {t})")
    area = accumulated_area(f).values
    return GridFunction(f.grid, area - 2.0 * t * np.arctan(gradient(f).values))


def area_rate_mismatch(f0, f1, t0, t1):
    """
    max over nodes of |(A(t1) - A(t0))/(t1 - t0) - arctan y_x|, slope averaged over both snapshots

    Small on smooth regions since A_t = arctan(y_x).
    """
    _same_grid(f0, f1)
    if not t1 > t0:
        raise PreconditionError("need t1 > t0")
    rate = (accumulated_area(f1).values - accumulated_area(f0).values) / (t1 - t0)
    angle = 0.5 * (np.arctan(gradient(f0).values) + np.arctan(gradient(f1).values))
    return float(np.max(np.abs(rate - angle)))


def evenness_defect(f):
    return float(np.max(np.abs(f.values - f.values[::-1])))


def crossing_count(f, g):
    """
    Sign changes of f - g over the nodes

    Zero runs are skipped: a touch without sign change counts 0, a crossing through a
    run of zeros counts 1.
    """
    _same_grid(f, g)
    signs = np.sign(f.values - g.values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def positive_part_l1(f, g):
    """Trapezoid integral of max(f - g, 0)"""
    _same_grid(f, g)
    return float(trapezoid(np.maximum(f.values - g.values, 0.0), dx=f.grid.h))


def crossing_history(trace, barrier):
    """
    Crossing counts of each positive-time snapshot against barrier(t) -> GridFunction

    Returns:
        dict: times, counts and the times at which the count increased
    """
    times, counts = [], []
    for t, f in trace.positive_times():
        times.append(t)
        counts.append(crossing_count(f, barrier(t)))
    increases = [times[i] for i in range(1, len(counts)) if counts[i] > counts[i - 1]]
    return {"times": times, "counts": counts, "increases": increases}
