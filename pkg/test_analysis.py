"""
Derived-quantity tests: areas, norms, gradient, the Harnack quantity and crossing counts
"""

import math

import numpy as np
import pytest

from analysis.quantities import (
    accumulated_area, area_rate_mismatch, crossing_count, crossing_history, evenness_defect, gradient,
    harnack_quantity, lp_norm, norms, positive_part_l1, total_area,
)
from solver.grid import Grid, GridFunction, aligned_grid
from solver.initial_data import WitchHat, sample_initial
from solver.scheme import run
from utils.errors import PreconditionError


@pytest.fixture
def hat():
    grid = aligned_grid(2.0, 4, 100)
    return sample_initial(WitchHat(4), grid)


def test_accumulated_area_of_witch_hat(hat):
    area = accumulated_area(hat)
    assert area.values[0] == 0.0
    assert area.total == pytest.approx(1.0, abs=1e-12)
    middle = int(np.argmin(np.abs(hat.x)))
    assert area.values[middle] == pytest.approx(0.5, abs=1e-12)
    assert np.all(np.diff(area.values) >= 0)
    assert total_area(hat) == pytest.approx(area.total, abs=1e-12)


def test_norms(hat):
    stats = norms(hat, p=2)
    assert stats["sup"] == 4.0
    assert stats["l1"] == pytest.approx(1.0, abs=1e-12)
    assert stats["lip"] == pytest.approx(16.0, rel=1e-9)
    # ||n(1 - n|x|)_+||_2^2 = 2n/3
    assert stats["lp"] == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-3)

    grid = Grid(L=1.5, n=30)
    constant = GridFunction(grid, np.full(31, 2.0))
    assert norms(constant)["l1"] == pytest.approx(6.0)
    assert norms(constant)["lip"] == 0.0


def test_lp_norm_requires_p_above_one(hat):
    with pytest.raises(PreconditionError):
        lp_norm(hat, 1.0)


def test_gradient_exact_on_quadratics():
    grid = Grid(L=1.0, n=40)
    x = grid.nodes
    g = gradient(GridFunction(grid, x * x - 3.0 * x))
    np.testing.assert_allclose(g.values, 2.0 * x - 3.0, atol=1e-10)


def test_harnack_quantity_at_time_zero_is_area(hat):
    np.testing.assert_array_equal(harnack_quantity(hat, 0.0).values, accumulated_area(hat).values)
    with pytest.raises(PreconditionError):
        harnack_quantity(hat, -1.0)


def test_harnack_quantity_between_bounds():
    grid = aligned_grid(2.0, 4, 20)
    trace = run(WitchHat(4), grid, 0.3, snap_every=0.1)
    A0 = trace.total_area_initial
    for t, f in trace.positive_times():
        H = harnack_quantity(f, t).values
        assert H.min() >= -0.5 * math.pi * t - 1e-2, f"t={t}"
        assert H.max() <= A0 + 0.5 * math.pi * t + 1e-2, f"t={t}"


def test_area_rate_matches_slope_angle():
    grid = aligned_grid(2.0, 5, 40)
    trace = run(WitchHat(5), grid, 0.21, snap_times=[0.2])
    mismatch = area_rate_mismatch(trace.at(0.2), trace.at(0.21), 0.2, 0.21)
    assert mismatch < 0.05, f"mismatch {mismatch}"
    with pytest.raises(PreconditionError):
        area_rate_mismatch(trace.at(0.2), trace.at(0.21), 0.21, 0.2)


def test_evenness_defect(hat):
    assert evenness_defect(hat) == 0.0
    skew = GridFunction(hat.grid, hat.values + hat.x)
    assert evenness_defect(skew) > 0.0


def test_crossing_count():
    grid = Grid(L=1.0, n=20)
    x = grid.nodes
    zero = GridFunction(grid, np.zeros(21))
    assert crossing_count(zero, zero) == 0
    assert crossing_count(GridFunction(grid, x), zero) == 1
    assert crossing_count(GridFunction(grid, x * x), zero) == 0
    assert crossing_count(GridFunction(grid, x * x - 0.25), zero) == 2
    # invariant under adding the same constant to both
    assert crossing_count(GridFunction(grid, x * x + 5.0 - 0.25), GridFunction(grid, np.full(21, 5.0))) == 2
    with pytest.raises(PreconditionError):
        crossing_count(zero, GridFunction(Grid(L=2.0, n=20), np.zeros(21)))


def test_positive_part_l1():
    grid = Grid(L=1.0, n=20)
    base = GridFunction(grid, np.sin(grid.nodes))
    assert positive_part_l1(base, base.shifted(0.5)) == 0.0
    assert positive_part_l1(base.shifted(0.5), base) == pytest.approx(1.0)


def test_crossing_history():
    grid = Grid(L=1.0, n=20)
    trace = run(WitchHat(2), grid, 0.1, snap_every=0.05)
    history = crossing_history(trace, lambda t: GridFunction(grid, np.full(21, 0.5)))
    assert history["times"] == trace.times[1:]
    assert history["counts"] == [2, 2]
    assert history["increases"] == []
