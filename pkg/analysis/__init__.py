"""
Quantities the estimates are phrased in

Usage:
    from analysis import accumulated_area, norms, harnack_quantity

    norms(snapshot, p=2)["lp"]
"""

from .quantities import (
    AccumulatedArea, accumulated_area, area_rate_mismatch, crossing_count, crossing_history,
    evenness_defect, gradient, harnack_quantity, lp_norm, norms, positive_part_l1, total_area,
)

__all__ = [
    'AccumulatedArea', 'accumulated_area', 'area_rate_mismatch', 'crossing_count',
    'crossing_history', 'evenness_defect', 'gradient', 'harnack_quantity', 'lp_norm', 'norms',
    'positive_part_l1', 'total_area',
]
