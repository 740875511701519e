"""
Solver tests: grid layout, initial data sampling, stability and the discrete scheme invariants
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from analysis.quantities import total_area
from solver.grid import FlowTrace, Grid, GridFunction, aligned_grid
from solver.initial_data import (
    Constant, Mollified, PiecewiseLinear, SampledFunction, Truncated, WitchHat, initial_data_from_dict,
    sample_initial,
)
from solver.scheme import cfl_dt, run, snapshot_schedule, stability_limit, step
from utils.errors import PreconditionError, StabilityError


def test_grid_nodes_symmetric():
    grid = Grid(L=3.0, n=60)
    x = grid.nodes
    assert x[0] == -3.0 and x[-1] == 3.0
    assert x[30] == 0.0
    np.testing.assert_array_equal(x, -x[::-1])
    assert grid.h == pytest.approx(0.1)


def test_grid_validation():
    with pytest.raises(PreconditionError):
        Grid(L=1.0, n=8)
    with pytest.raises(PreconditionError):
        Grid(L=-1.0, n=32)
    with pytest.raises(PreconditionError):
        Grid.from_spacing(1.0, 0.0)


def test_aligned_grid_puts_nodes_on_hat_breakpoints():
    grid = aligned_grid(2.05, 4, 10)
    assert grid.L == pytest.approx(2.25)
    assert grid.h == pytest.approx(1.0 / 40.0)
    x = grid.nodes
    for point in (-0.25, 0.0, 0.25):
        assert np.min(np.abs(x - point)) < 1e-12


def test_cfl_dt():
    assert cfl_dt(0.01, 0.8) == pytest.approx(4e-5)
    assert cfl_dt(0.02, 0.8) == pytest.approx(1.6e-4)
    assert stability_limit(0.1) == pytest.approx(5e-3)
    for safety in (1.0, 1.5, 0.0):
        with pytest.raises(PreconditionError):
            cfl_dt(0.01, safety)
    with pytest.raises(PreconditionError):
        cfl_dt(0.0, 0.5)


def test_step_rejects_unstable_dt():
    grid = Grid(L=1.0, n=20)
    f = GridFunction(grid, np.zeros(21))
    with pytest.raises(StabilityError):
        step(f, 0.6 * grid.h ** 2)


def test_constant_and_linear_data_are_steady():
    grid = Grid(L=1.0, n=40)
    constant = GridFunction(grid, np.full(41, 2.5))
    np.testing.assert_array_equal(step(constant, cfl_dt(grid.h, 0.8)).values, constant.values)

    line = GridFunction(grid, 0.7 * grid.nodes + 1.0)
    out = step(line, cfl_dt(grid.h, 0.8), boundary="dirichlet")
    np.testing.assert_allclose(out.values, line.values, atol=1e-13)


def test_zero_data_stay_zero():
    grid = Grid(L=2.0, n=40)
    trace = run(Constant(0.0), grid, 0.5, snap_every=0.1)
    for t, f in trace.snapshots:
        assert np.all(f.values == 0.0), f"t={t}"


def test_unsupported_boundary():
    grid = Grid(L=1.0, n=20)
    with pytest.raises(PreconditionError):
        run(Constant(0.0), grid, 0.1, boundary="periodic")


def test_grim_reaper_second_order():
    # y = -log cos x + t translates with unit speed
    a = 1.2

    def exact(x, t):
        return -np.log(np.cos(x)) + t

    errors = []
    for n in (120, 240):
        grid = Grid(L=a, n=n)
        x = grid.nodes
        init = PiecewiseLinear(xs=tuple(x), ys=tuple(exact(x, 0.0)))
        edge = float(exact(a, 0.0))
        trace = run(init, grid, 0.1, boundary="dirichlet", boundary_values=lambda t: (edge + t, edge + t))
        errors.append(float(np.max(np.abs(trace.at(0.1).values - exact(x, 0.1)))))
    ratio = errors[0] / errors[1]
    assert 3.5 < ratio < 4.5, f"errors {errors}, ratio {ratio}"


def test_translation_by_constant_with_held_boundary():
    grid = aligned_grid(2.0, 4, 10)
    L = grid.L
    c = 3.0
    base = PiecewiseLinear(xs=(-L, -0.25, 0.0, 0.25, L), ys=(0.0, 0.0, 4.0, 0.0, 0.0))
    lifted = PiecewiseLinear(xs=base.xs, ys=tuple(v + c for v in base.ys))
    a = run(base, grid, 0.2, boundary="dirichlet")
    b = run(lifted, grid, 0.2, boundary="dirichlet")
    np.testing.assert_allclose(b.at(0.2).values - a.at(0.2).values, c, atol=1e-10)


def test_discrete_max_principle_on_witch_hat():
    grid = aligned_grid(2.0, 20, 10)
    trace = run(WitchHat(20), grid, 0.05, snap_every=0.01)
    for t, f in trace.snapshots:
        assert f.values.min() >= -1e-14, f"t={t}"
        assert f.values.max() <= 20.0 + 1e-12, f"t={t}"


def test_area_conserved_with_vanishing_boundary_flux():
    grid = aligned_grid(10.0, 10, 10)
    trace = run(WitchHat(10), grid, 1.0, snap_every=0.25)
    area0 = total_area(trace.initial_snapshot)
    for t, f in trace.positive_times():
        assert abs(total_area(f) - area0) / area0 < 1e-6, f"t={t}"


@settings(max_examples=30, deadline=None)
@given(
    base=arrays(np.float64, 41, elements=st.floats(-5.0, 5.0, allow_nan=False)),
    gap=arrays(np.float64, 41, elements=st.floats(0.0, 2.0, allow_nan=False)),
)
def test_step_preserves_order(base, gap):
    grid = Grid(L=1.0, n=40)
    dt = stability_limit(grid.h)
    lower = step(GridFunction(grid, base), dt, boundary="dirichlet")
    upper = step(GridFunction(grid, base + gap), dt, boundary="dirichlet")
    assert np.all(lower.values <= upper.values + 1e-12)


@settings(max_examples=30, deadline=None)
@given(values=arrays(np.float64, 41, elements=st.floats(-5.0, 5.0, allow_nan=False)))
def test_step_stays_within_range(values):
    grid = Grid(L=1.0, n=40)
    out = step(GridFunction(grid, values), stability_limit(grid.h), boundary="dirichlet")
    assert out.values.min() >= values.min() - 1e-12
    assert out.values.max() <= values.max() + 1e-12


def test_snapshot_schedule():
    assert snapshot_schedule(1.0, snap_every=0.25) == [0.25, 0.5, 0.75, 1.0]
    assert snapshot_schedule(1.0, snap_times=[0.3, 2.0, 0.0]) == [0.3, 1.0]
    assert snapshot_schedule(0.5) == [0.5]
    assert snapshot_schedule(0.5, snap_times=[1e-14, 0.25]) == [0.25, 0.5]


def test_run_records_requested_times():
    grid = Grid(L=1.0, n=20)
    trace = run(WitchHat(2), grid, 0.1, snap_times=[1.0 / 30.0])
    assert trace.times == [0.0, round(1.0 / 30.0, 12), 0.1]
    assert trace.scheme["boundary"] == "dirichlet0"
    assert trace.scheme["dt"] == pytest.approx(cfl_dt(grid.h, 0.8))
    with pytest.raises(KeyError):
        trace.at(0.05)


def test_run_ignores_times_that_round_to_zero():
    grid = Grid(L=1.0, n=20)
    trace = run(WitchHat(2), grid, 0.1, snap_times=[1e-14, 0.05])
    assert trace.times == [0.0, 0.05, 0.1]


def test_witch_hat_nodal_values():
    grid = aligned_grid(1.0, 4, 10)
    f = sample_initial(WitchHat(4), grid)
    assert f.values.max() == 4.0
    assert f.values[int(np.argmin(np.abs(grid.nodes - 0.125)))] == pytest.approx(2.0, abs=1e-12)
    assert total_area(f) == pytest.approx(1.0, abs=1e-12)


def test_table_not_covering_grid_warns(capsys):
    grid = Grid(L=2.0, n=40)
    f = sample_initial(PiecewiseLinear(xs=(-1.0, 0.0, 1.0), ys=(0.0, 1.0, 0.0)), grid)
    assert "[WARNING]" in capsys.readouterr().out
    assert f.values[0] == 0.0 and f.values[20] == 1.0


def test_nonzero_edge_pinned_with_warning(capsys):
    grid = Grid(L=1.0, n=20)
    trace = run(Constant(1.0), grid, 0.01)
    assert "pinned to 0" in capsys.readouterr().out
    assert trace.initial_snapshot.values[0] == 0.0


def test_piecewise_linear_validation():
    with pytest.raises(PreconditionError):
        PiecewiseLinear(xs=(0.0, 0.0), ys=(1.0, 2.0))
    with pytest.raises(PreconditionError):
        PiecewiseLinear(xs=(0.0, 1.0), ys=(1.0,))
    with pytest.raises(PreconditionError):
        WitchHat(0)


def test_sampled_function_from_csv(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("x,y\n-1,0\n0,2\n1,0\n", encoding="utf-8")
    data = SampledFunction.from_csv(str(path))
    assert data.evaluate(0.5) == pytest.approx(1.0)
    assert data.to_dict() == {"type": "samples", "path": str(path)}
    assert initial_data_from_dict(data.to_dict()) == data


def test_descriptor_dicts():
    hat = WitchHat(5)
    for descriptor in (
        hat,
        PiecewiseLinear(xs=(-1.0, 1.0), ys=(0.5, 0.5)),
        Constant(2.0),
        Mollified(base=hat, radius=0.1),
        Truncated(base=Constant(1.0), radius=3.0),
    ):
        assert initial_data_from_dict(descriptor.to_dict()) == descriptor
    with pytest.raises(PreconditionError):
        initial_data_from_dict({"type": "gaussian"})


def test_mollified_reproduces_constants_and_smooths_kinks():
    flat = Mollified(base=Constant(3.0), radius=0.2)
    np.testing.assert_allclose(flat.evaluate(np.linspace(-1, 1, 11)), 3.0, rtol=1e-14)

    hat = WitchHat(2)
    smooth = Mollified(base=hat, radius=0.1)
    assert smooth.support() == pytest.approx((-0.6, 0.6))
    assert smooth.evaluate(0.0) < hat.evaluate(0.0)
    assert smooth.evaluate(0.55) > 0.0
    with pytest.raises(PreconditionError):
        Mollified(base=hat, radius=0.0)


def test_truncated_data():
    data = Truncated(base=Constant(2.0), radius=1.0)
    assert data.evaluate(0.5) == pytest.approx(2.0)
    assert data.evaluate(2.5) == 0.0
    assert 0.0 < data.evaluate(1.5) < 2.0


def test_flow_trace_validation():
    grid = Grid(L=1.0, n=20)
    f = GridFunction(grid, np.zeros(21))
    with pytest.raises(PreconditionError):
        FlowTrace(None, [])
    with pytest.raises(PreconditionError):
        FlowTrace(None, [(0.1, f)])
    with pytest.raises(PreconditionError):
        FlowTrace(None, [(0.0, f), (0.2, f), (0.1, f)])
    with pytest.raises(PreconditionError):
        GridFunction(grid, np.zeros(5))


def test_rescaled_trace_is_a_solution():
    grid = aligned_grid(2.0, 4, 10)
    trace = run(WitchHat(4), grid, 0.1, snap_every=0.05)
    scaled = trace.rescaled(2.0)
    assert scaled.grid.L == pytest.approx(2.0 * grid.L)
    assert scaled.times == pytest.approx([0.0, 0.2, 0.4])
    np.testing.assert_allclose(scaled.at(0.4).values, 2.0 * trace.at(0.1).values)
    assert scaled.total_area_initial == pytest.approx(4.0 * trace.total_area_initial)
