"""
Conservative explicit solver for graphical curve shortening flow

Usage:
    from solver import Grid, WitchHat, run

    trace = run(WitchHat(10), Grid(L=8.0, n=1600), t_end=1.0, snap_every=0.1)
"""

from .grid import FlowTrace, Grid, GridFunction, aligned_grid
from .initial_data import (
    Constant, InitialData, Mollified, PiecewiseLinear, SampledFunction, Truncated, WitchHat,
    bump_kernel, initial_data_from_dict, sample_initial, smooth_cutoff,
)
from .scheme import BOUNDARIES, cfl_dt, run, snapshot_schedule, stability_limit, step

__all__ = [
    'FlowTrace', 'Grid', 'GridFunction', 'aligned_grid',
    'Constant', 'InitialData', 'Mollified', 'PiecewiseLinear', 'SampledFunction', 'Truncated',
    'WitchHat', 'bump_kernel', 'initial_data_from_dict', 'sample_initial', 'smooth_cutoff',
    'BOUNDARIES', 'cfl_dt', 'run', 'snapshot_schedule', 'stability_limit', 'step',
]
