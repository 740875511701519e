"""
Estimate verifier tests

Fast checks run on small grids; the witch-hat family checks use the session traces
(h = 1/400, n = 10, 20, 40) and are marked slow.
"""

import math

import numpy as np
import pytest

from estimates import (
    ESTIMATES, EstimateReport, SnapshotCheck, delayed_height_bound, level_for_mass, parse_estimates,
    retry_refined, sharpness_ratio, summarize, verify_area_conservation, verify_comparison,
    verify_delayed_gradient, verify_delayed_height, verify_harnack, verify_height_controls_gradient,
    verify_l1_growth, verify_lp_smoothing, verify_refined_gradient, verify_separation, verify_trace,
    verify_wedge_barrier,
)
from experiments.delta import run_delta_experiment
from experiments.lp import lp_sweep
from solver.grid import Grid, aligned_grid
from solver.initial_data import Constant, PiecewiseLinear, WitchHat, sample_initial
from solver.scheme import run
from utils.errors import PreconditionError
from wedge.areas import scaled_wedge

from conftest import HAT_NS, HAT_TIMES


@pytest.fixture(scope="module")
def small_hat():
    return run(WitchHat(4), aligned_grid(3.0, 4, 10), 1.0, snap_every=0.1)


def test_zero_flow_harnack_margin():
    trace = run(Constant(0.0), Grid(L=1.0, n=20), 0.2, snap_every=0.1)
    report = verify_harnack(trace)
    assert report.passed
    assert report.worst.max_violation == pytest.approx(-0.25 * math.pi)
    assert {c.check for c in report.per_snapshot} == {"upper", "lower", "even"}


def test_harnack_rejects_negative_data():
    grid = Grid(L=1.0, n=20)
    trace = run(PiecewiseLinear(xs=(-0.5, 0.0, 0.5), ys=(0.0, -1.0, 0.0)), grid, 0.1)
    with pytest.raises(PreconditionError):
        verify_harnack(trace)


def test_pass_is_monotone_in_slack():
    report = EstimateReport("harnack", per_snapshot=[
        SnapshotCheck(t=0.1, max_violation=1e-3), SnapshotCheck(t=0.2, max_violation=-0.2),
        SnapshotCheck(t=0.3, applies=False),
    ])
    outcomes = []
    for slack in (1e-4, 1e-3, 1e-2, 1.0):
        report.slack = slack
        outcomes.append(report.passed)
    assert outcomes == [False, True, True, True]
    assert report.worst.t == 0.1


def test_report_dict_round_trip(small_hat):
    report = verify_harnack(small_hat)
    again = EstimateReport.from_dict(report.to_dict())
    assert again.passed == report.passed
    assert again.worst.max_violation == report.worst.max_violation
    assert again.threshold_time == report.threshold_time
    assert len(again.per_snapshot) == len(report.per_snapshot)


def test_harnack_on_small_hat(small_hat):
    report = verify_harnack(small_hat, slack=1e-2)
    assert report.passed, summarize([report])
    assert report.threshold_time == pytest.approx(1.0 / math.pi, rel=1e-9)
    assert report.checks("even")


def test_delayed_gradient_is_scaling_invariant(small_hat):
    lam = 2.0
    base = verify_delayed_gradient(small_hat)
    scaled = verify_delayed_gradient(small_hat.rescaled(lam))
    assert scaled.threshold_time == pytest.approx(lam * lam * base.threshold_time, rel=1e-12)
    for a, b in zip(base.per_snapshot, scaled.per_snapshot):
        assert b.t == pytest.approx(lam * lam * a.t)
        assert b.check == a.check
        assert b.max_violation == pytest.approx(a.max_violation, abs=1e-12)


def test_delayed_gradient_labels(small_hat):
    report = verify_delayed_gradient(small_hat)
    tau = report.threshold_time
    for check in report.per_snapshot:
        assert check.check == ("post_threshold" if check.t > tau else "pre_threshold")


def test_refined_gradient_sharper_than_delayed(small_hat, wedge_profile):
    report = verify_refined_gradient(small_hat, wedge=wedge_profile)
    assert report.passed, summarize([report])
    assert report.extras["bounds"]
    assert all(entry["refined"] < entry["delayed"] for entry in report.extras["bounds"])
    assert not any("exceeded" in note for note in report.notes)
    skipped = [c for c in report.per_snapshot if not c.applies]
    assert all(c.t <= report.threshold_time * (1 + report.slack) for c in skipped)


def test_delayed_height_bound(wedge_profile):
    tau = 1.0 / math.pi
    assert delayed_height_bound(1.0, tau, wedge_profile) is None
    near = delayed_height_bound(1.0, 1.01 * tau, wedge_profile)
    far = delayed_height_bound(1.0, 2.0 * tau, wedge_profile)
    assert near > 2.0 * far
    assert delayed_height_bound(0.5, 1.0, wedge_profile) < delayed_height_bound(1.0, 1.0, wedge_profile)


def test_delayed_height_on_small_hat(small_hat, wedge_profile):
    report = verify_delayed_height(small_hat, wedge=wedge_profile, slack=1e-2)
    assert report.passed, summarize([report])
    assert any(c.applies for c in report.checks("simple"))


def _wedge_flow(wedge_profile, t0=1.0, left=0.5, right=4.5):
    """Exact wedge data at t0 on [left, right], shifted onto [-L, L], with exact Dirichlet values"""
    L = 0.5 * (right - left)
    grid = Grid(L=L, n=400)
    offset = left + L
    x = grid.nodes
    init = PiecewiseLinear(xs=tuple(x), ys=tuple(scaled_wedge(wedge_profile, x + offset, t0)))

    def edges(s):
        return (scaled_wedge(wedge_profile, left, t0 + s), scaled_wedge(wedge_profile, right, t0 + s))

    return run(init, grid, 0.5, snap_every=0.25, boundary="dirichlet", boundary_values=edges)


def test_height_controls_gradient_sharp_on_wedge(wedge_profile):
    trace = _wedge_flow(wedge_profile)
    ratio = sharpness_ratio(trace.at(0.5), 1.5, wedge_profile)
    assert 0.95 <= ratio.min() and ratio.max() <= 1.01, f"ratio range {ratio.min()}..{ratio.max()}"

    report = verify_height_controls_gradient(trace, wedge=wedge_profile)
    assert report.passed, summarize([report])
    assert report.checks("explicit")


def test_height_controls_gradient_needs_positive_data(small_hat, wedge_profile):
    with pytest.raises(PreconditionError):
        verify_height_controls_gradient(small_hat, wedge=wedge_profile)
    report = verify_trace(small_hat, ("height_gradient",), wedge=wedge_profile)[0]
    assert report.shift == 1.0
    assert any("not positive" in note for note in report.notes)


def test_wedge_barrier_on_small_hat(small_hat, wedge_profile):
    report = verify_wedge_barrier(small_hat, wedge=wedge_profile, side="both")
    assert 0.2 < report.shift <= 0.25
    assert report.passed, summarize([report])
    assert {c.check for c in report.per_snapshot} == {"right", "left"}


def test_wedge_barrier_support_precondition(small_hat, wedge_profile):
    with pytest.raises(PreconditionError):
        verify_wedge_barrier(small_hat, wedge=wedge_profile, x_shift=0.1)
    with pytest.raises(PreconditionError):
        verify_wedge_barrier(small_hat, wedge=wedge_profile, side="up")


def test_level_for_mass():
    f = sample_initial(WitchHat(1), aligned_grid(2.0, 1, 100))
    assert level_for_mass(f, 0.25) == pytest.approx(0.5, abs=1e-9)
    assert level_for_mass(f, 2.0) == 0.0


def test_lp_smoothing(small_hat, wedge_profile):
    report = verify_lp_smoothing(small_hat, 2.0, wedge=wedge_profile)
    assert report.passed, summarize([report])
    assert report.extras["window"] == pytest.approx(report.extras["norm_p"] ** (4.0 / 3.0))
    assert report.extras["cap"] > 0
    with pytest.raises(PreconditionError):
        verify_lp_smoothing(small_hat, 1.0, wedge=wedge_profile)
    with pytest.raises(PreconditionError):
        verify_lp_smoothing(small_hat, 2.0)


def test_separation_of_identical_traces(small_hat):
    report = verify_separation(small_hat, small_hat)
    assert report.passed
    assert all(entry["distance"] == 0.0 for entry in report.extras["distances"])
    assert all(c.max_violation <= 0 for c in report.per_snapshot)


def test_separation_and_comparison_of_ordered_pair():
    grid = aligned_grid(2.0, 4, 10)
    lower = run(WitchHat(4), grid, 0.5, snap_every=0.1)
    upper = run(PiecewiseLinear(xs=(-0.5, 0.0, 0.5), ys=(0.0, 5.0, 0.0)), grid, 0.5, snap_every=0.1)
    assert verify_comparison(lower, upper).passed
    assert verify_separation(lower, upper).passed
    assert verify_separation(upper, lower).passed
    with pytest.raises(PreconditionError):
        verify_comparison(upper, lower)


def test_separation_needs_matching_layout(small_hat):
    other = run(WitchHat(4), aligned_grid(3.0, 4, 10), 1.0, snap_every=0.5)
    with pytest.raises(PreconditionError):
        verify_separation(small_hat, other)


def test_area_conservation_and_l1_growth(small_hat):
    report = verify_area_conservation(small_hat)
    assert report.passed
    assert all(entry["drift"] <= entry["budget"] + report.slack for entry in report.extras["drift"])

    grid = Grid(L=2.0, n=80)
    signed = run(PiecewiseLinear(xs=(-1.0, -0.5, 0.5, 1.0), ys=(0.0, 1.0, -1.0, 0.0)), grid, 0.3, snap_every=0.1)
    assert verify_l1_growth(signed).passed


def test_parse_estimates():
    assert parse_estimates("all") == ESTIMATES
    assert parse_estimates("harnack, separation") == ("harnack", "separation")
    with pytest.raises(PreconditionError):
        parse_estimates("harnack,bogus")


def test_verify_trace_preconditions(small_hat):
    with pytest.raises(PreconditionError):
        verify_trace(small_hat, ("refined_gradient",))
    with pytest.raises(PreconditionError):
        verify_trace(small_hat, ("separation",))


def test_non_strict_suite_records_skips():
    grid = Grid(L=1.0, n=20)
    trace = run(PiecewiseLinear(xs=(-0.5, 0.0, 0.5), ys=(0.0, -1.0, 0.0)), grid, 0.1)
    with pytest.raises(PreconditionError):
        verify_trace(trace, ("harnack", "l1_growth"))
    reports = verify_trace(trace, ("harnack", "l1_growth"), strict=False)
    assert [r.name for r in reports] == ["harnack", "l1_growth"]
    assert reports[0].notes[0].startswith("skipped")
    assert reports[0].per_snapshot == []


def test_retry_at_half_spacing(small_hat):
    failing = EstimateReport("l1_growth", slack=1e-3,
                             per_snapshot=[SnapshotCheck(t=0.1, max_violation=1.0)])
    out = retry_refined(small_hat, [failing])
    assert out[0].passed
    assert any("passed at h=" in note for note in out[0].notes)
    assert out[0].slack == 1e-3


def test_summarize_tags(small_hat):
    lines = summarize([verify_l1_growth(small_hat), EstimateReport("x", per_snapshot=[
        SnapshotCheck(t=1.0, max_violation=1.0)])])
    assert lines[0].startswith("[OK] l1_growth")
    assert lines[1].startswith("[FAIL] x")


@pytest.mark.slow
class TestWitchHatFamily:
    """Estimates on n(1 - n|x|)_+ for n = 10, 20, 40 at h = 1/400"""

    def test_harnack(self, hat_traces):
        for n, trace in hat_traces.items():
            report = verify_harnack(trace, slack=1e-2)
            assert report.passed, f"n={n}: {summarize([report])}"

    def test_delayed_gradient_at_twice_tau(self, hat_traces):
        t = 2.0 / math.pi
        for n, trace in hat_traces.items():
            report = verify_delayed_gradient(trace, slack=1e-2)
            check = next(c for c in report.per_snapshot if abs(c.t - t) < 1e-9)
            assert check.check == "post_threshold"
            assert check.max_violation <= 1e-2, f"n={n}: {check}"

    def test_refined_gradient_and_delayed_height(self, hat_traces, wedge_profile):
        for n, trace in hat_traces.items():
            for report in (verify_refined_gradient(trace, wedge=wedge_profile, slack=1e-2),
                           verify_delayed_height(trace, wedge=wedge_profile, slack=1e-2)):
                assert report.passed, f"n={n}: {summarize([report])}"

    def test_wedge_barrier(self, hat_traces, wedge_profile):
        for n, trace in hat_traces.items():
            report = verify_wedge_barrier(trace, wedge=wedge_profile, slack=1e-2, x_shift=1.0 / n, side="both")
            assert report.passed, f"n={n}: {summarize([report])}"

    def test_lp_smoothing(self, hat_traces, wedge_profile):
        for n, trace in hat_traces.items():
            report = verify_lp_smoothing(trace, 2.0, wedge=wedge_profile, slack=1e-2)
            assert report.passed, f"n={n}: {summarize([report])}"

    def test_separation_between_hats(self, hat_traces):
        for a, b in ((10, 20), (20, 10), (20, 40)):
            report = verify_separation(hat_traces[a], hat_traces[b], slack=1e-3)
            assert report.passed, f"{a} vs {b}: {summarize([report])}"

    def test_area_conserved(self, hat_traces):
        for n, trace in hat_traces.items():
            report = verify_area_conservation(trace)
            assert max(entry["drift"] for entry in report.extras["drift"]) < 1e-6, f"n={n}"

    def test_delta_experiment_conclusions(self, hat_traces, hat_grid, wedge_profile):
        report = run_delta_experiment(list(HAT_NS), hat_grid, HAT_TIMES, wedge=wedge_profile, traces=hat_traces)
        for flag in ("a_sup_increasing_before_tau", "b_center_lower_bound", "c_gradient_bound_after_tau",
                     "even", "monotone_left"):
            assert report.conclusions[flag], f"{flag}: {report.table('per_n_t')}"
        ratio = report.metrics["pre_tau_gradient_ratio"]
        assert ratio["t"] == pytest.approx(0.2) and ratio["ratio"] >= 3.0, ratio
        assert report.metrics["wedge_deviation"]["n"] == 40

    def test_wedge_deviation_shrinks_with_n(self, hat_traces, hat_grid, wedge_profile):
        report = run_delta_experiment(list(HAT_NS), hat_grid, HAT_TIMES, wedge=wedge_profile, traces=hat_traces)
        deviation = [row["wedge_deviation"] for row in report.table("per_n_t") if row["t"] == pytest.approx(0.2)]
        assert len(deviation) == len(HAT_NS)
        assert deviation[0] > deviation[1] > deviation[2], deviation
        assert deviation[2] < 0.2, deviation
        assert report.conclusions["d_wedge_deviation_shrinks"]

    def test_lp_caps_recorded(self, hat_traces, hat_grid, wedge_profile):
        report = lp_sweep([1.5, 2.0, 3.0], list(HAT_NS), hat_grid, HAT_TIMES, wedge=wedge_profile, traces=hat_traces)
        for p in (1.5, 2.0, 3.0):
            ratio = report.metrics[f"cap_ratio_p{p:g}"]
            assert math.isfinite(ratio) and ratio >= 1.0
        assert report.metrics["cap_ratio_p2"] <= 1.2
        assert report.conclusions["cap_uniform_p2"]
        assert all(r.passed for r in report.estimates), [summarize([r]) for r in report.estimates]


def _random_tent_data(seed, h, breaks=10):
    rng = np.random.default_rng(seed)
    inner = np.unique(np.round(rng.uniform(-2.0, 2.0, breaks) / h) * h)
    xs = np.concatenate(([-2.5], inner, [2.5]))
    ys = np.concatenate(([0.0], rng.uniform(0.0, 2.0, inner.size), [0.0]))
    return PiecewiseLinear(xs=tuple(xs), ys=tuple(ys))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_harnack_on_random_tents(seed):
    grid = Grid(L=8.0, n=1600)
    trace = run(_random_tent_data(seed, grid.h), grid, 1.0, snap_every=0.1)
    report = verify_harnack(trace, slack=1e-2)
    assert report.passed, f"seed={seed}: {summarize([report])}"
