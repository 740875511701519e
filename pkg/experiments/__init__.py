"""
End-to-end constructions: witch hats approaching a delta, L1 mollification, Lp sweeps

Usage:
    from experiments import run_delta_experiment
    from solver import aligned_grid

    report = run_delta_experiment([10, 20, 40], aligned_grid(8.0, 40), [0.1, 0.2, 0.3, 0.5, 1.0])
    report.passed
"""

from .delta import run_delta_experiment, wedge_deviation, witch_hat
from .l1 import mollify, run_l1_pipeline
from .lp import lp_sweep, lp_window, witch_hat_lp_norm
from .report import ExperimentReport
from .runner import run_flows

__all__ = [
    'ExperimentReport', 'run_flows',
    'run_delta_experiment', 'wedge_deviation', 'witch_hat',
    'mollify', 'run_l1_pipeline',
    'lp_sweep', 'lp_window', 'witch_hat_lp_norm',
]
