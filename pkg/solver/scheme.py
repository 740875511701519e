"""
Explicit conservative scheme for y_t = (arctan y_x)_x

Fluxes F_{i+1/2} = arctan((y_{i+1} - y_i)/h) live on cell faces and the interior update is
y_i <- y_i + dt (F_{i+1/2} - F_{i-1/2}) / h, so h * sum(y) changes only through the two
boundary faces.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import trapezoid

from solver.grid import FlowTrace, GridFunction
from solver.initial_data import sample_initial
from utils.config import load_settings
from utils.errors import NumericalError, PreconditionError, StabilityError

BOUNDARIES = ("dirichlet0", "dirichlet", "neumann")


def stability_limit(h):
    """Largest stable explicit step h^2 / 2 (the diffusion coefficient 1/(1+y_x^2) is at most 1)"""
    if not h > 0:
        raise PreconditionError(f"h must be > 0 (got {h})")
    return h * h / 2.0


def cfl_dt(h, safety):
    """Explicit step safety * h^2 / 2 with 0 < safety < 1"""
    if not 0 < safety < 1:
        raise PreconditionError(f"safety must lie in (0, 1) (got {safety})")
    return safety * stability_limit(h)


def _advance(y, dt, h, flux):
    """One interior Euler update in place; flux is a work array of length n"""
    np.subtract(y[1:], y[:-1], out=flux)
    flux /= h
    np.arctan(flux, out=flux)
    y[1:-1] += (dt / h) * (flux[1:] - flux[:-1])


def _apply_boundary(y, boundary, held, boundary_values, t):
    if boundary == "dirichlet0":
        y[0] = 0.0
        y[-1] = 0.0
    elif boundary == "neumann":
        y[0] = y[1]
        y[-1] = y[-2]
    elif boundary_values is not None:
        y[0], y[-1] = boundary_values(t)
    else:
        y[0], y[-1] = held


def _check_boundary(boundary):
    if boundary not in BOUNDARIES:
        raise PreconditionError(f"Unsupported boundary condition: {boundary} (expected one of {BOUNDARIES})")


def step(f, dt, boundary="dirichlet", boundary_values=None, t=0.0):
    """
    Advance a grid function by one explicit step

    Args:
        f (GridFunction): Current state
        dt (float): Time step, at most h^2/2
        boundary (str): dirichlet0, dirichlet (values held or given) or neumann (copied)
        boundary_values (callable): t -> (left, right) for time-dependent Dirichlet data
        t (float): Time at the start of the step

    Returns:
        GridFunction: State at t + dt
    """
    _check_boundary(boundary)
    h = f.grid.h
    limit = stability_limit(h)
    if dt > limit * (1.0 + 1e-12):
        raise StabilityError(f"dt={dt:g} exceeds the stability limit h^2/2={limit:g}")
    y = f.values.copy()
    held = (y[0], y[-1])
    _advance(y, dt, h, np.empty(y.size - 1))
    _apply_boundary(y, boundary, held, boundary_values, t + dt)
    if not np.all(np.isfinite(y)):
        raise NumericalError("non-finite values after step")
    return GridFunction(f.grid, y)


def snapshot_schedule(t_end, snap_every=None, snap_times=None):
    """Sorted snapshot times in (0, t_end], always ending at t_end"""
    times = {round(float(t_end), 12)}
    if snap_every:
        k = 1
        while k * snap_every < t_end * (1.0 - 1e-12):
            times.add(round(k * snap_every, 12))
            k += 1
    for t in snap_times or ():
        if 0 < t <= t_end:
            times.add(round(float(t), 12))
    return sorted(t for t in times if t > 0)


def run(init, grid, t_end, snap_every=None, boundary=None, safety=None, snap_times=None,
        boundary_values=None):
    """
    Flow initial data on a grid up to t_end

    Args:
        init (InitialData): Initial data descriptor
        grid (Grid): Spatial grid
        t_end (float): Final time
        snap_every (float): Snapshot spacing (optional)
        boundary (str): dirichlet0 (default), dirichlet or neumann
        safety (float): Fraction of the stability limit used as time step
        snap_times (list): Extra exact snapshot times (optional)
        boundary_values (callable): t -> (left, right), only with boundary="dirichlet"

    Returns:
        FlowTrace: snapshots at 0, every snap_every, at snap_times and at t_end
    """
    cfg = load_settings()["solver"]
    boundary = cfg["boundary"] if boundary is None else boundary
    safety = cfg["safety"] if safety is None else safety
    _check_boundary(boundary)
    if not t_end > 0:
        raise PreconditionError(f"t_end must be > 0 (got {t_end})")
    if snap_every is not None and not snap_every > 0:
        raise PreconditionError(f"snap_every must be > 0 (got {snap_every})")

    h = grid.h
    dt_max = cfl_dt(h, safety)
    f0 = sample_initial(init, grid)
    y = f0.values.copy()
    if boundary == "dirichlet0" and (y[0] != 0.0 or y[-1] != 0.0):
        print(f"[WARNING] initial data nonzero at +-L ({y[0]:g}, {y[-1]:g}), pinned to 0")
    held = (y[0], y[-1])
    _apply_boundary(y, boundary, held, boundary_values, 0.0)
    f0 = GridFunction(grid, y.copy())

    flux = np.empty(grid.n)
    snapshots = [(0.0, f0)]
    t = 0.0
    for target in snapshot_schedule(t_end, snap_every, snap_times):
        if target <= t:
            continue
        k = max(1, math.ceil((target - t) / dt_max - 1e-9))
        dt = (target - t) / k
        for i in range(k):
            _advance(y, dt, h, flux)
            _apply_boundary(y, boundary, held, boundary_values, t + (i + 1) * dt)
        if not np.all(np.isfinite(y)):
            raise NumericalError(f"non-finite values before t={target:g}")
        t = target
        snapshots.append((target, GridFunction(grid, y.copy())))

    scheme = {
        "dt": dt_max, "h": h, "L": grid.L, "n": grid.n, "safety": safety,
        "boundary": boundary, "t_end": float(t_end),
        "snap_every": float(snap_every) if snap_every else None,
    }
    return FlowTrace(
        initial=init,
        snapshots=snapshots,
        scheme=scheme,
        total_area_initial=float(trapezoid(f0.values, dx=h)),
    )
