"""
Numerical checks of the a priori estimates on flow traces

Usage:
    from estimates import run_suite, verify_harnack

    report = verify_harnack(trace, slack=1e-2)
    trace, reports = run_suite(WitchHat(20), grid, t_end=1.0, wedge=profile)
"""

from .report import EstimateReport, SnapshotCheck, default_slack, worst_over_nodes
from .suite import (
    ESTIMATES, NEEDS_WEDGE, PAIR_ESTIMATES, parse_estimates, rerun_refined, retry_refined, run_suite,
    suite_passed, summarize, verify_trace,
)
from .verifiers import (
    delayed_height_bound, level_for_mass, sharpness_ratio, verify_area_conservation,
    verify_comparison, verify_delayed_gradient, verify_delayed_height, verify_harnack,
    verify_height_controls_gradient, verify_l1_growth, verify_lp_smoothing,
    verify_refined_gradient, verify_separation, verify_wedge_barrier,
)

__all__ = [
    'EstimateReport', 'SnapshotCheck', 'default_slack', 'worst_over_nodes',
    'ESTIMATES', 'NEEDS_WEDGE', 'PAIR_ESTIMATES', 'parse_estimates', 'rerun_refined', 'retry_refined',
    'run_suite', 'suite_passed', 'summarize', 'verify_trace',
    'delayed_height_bound', 'level_for_mass', 'sharpness_ratio', 'verify_area_conservation',
    'verify_comparison', 'verify_delayed_gradient', 'verify_delayed_height', 'verify_harnack',
    'verify_height_controls_gradient', 'verify_l1_growth', 'verify_lp_smoothing',
    'verify_refined_gradient', 'verify_separation', 'verify_wedge_barrier',
]
