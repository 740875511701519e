"""
Right-angled wedge self-similar profile and the area functions derived from it

Usage:
    from wedge import solve_wedge, eval_W, tail_area, bigF

    profile = solve_wedge(tol=1e-10)
    eval_W(profile, 1.0)
    bigF(profile, 0.5)
"""

from .areas import (
    area_A0, area_A1, barrier_half_width, bigF, derived_constants, eval_W, eval_Wprime,
    inverse_sigma, polar_sector_area, scaled_wedge, tail_area,
)
from .diagnostics import wedge_diagnostics
from .profile import ShotPath, WedgeProfile, shoot_profile, solve_wedge, terminal_angle

__all__ = [
    'ShotPath', 'WedgeProfile', 'shoot_profile', 'solve_wedge', 'terminal_angle',
    'area_A0', 'area_A1', 'barrier_half_width', 'bigF', 'derived_constants', 'eval_W',
    'eval_Wprime', 'inverse_sigma', 'polar_sector_area', 'scaled_wedge', 'tail_area',
    'wedge_diagnostics',
]
