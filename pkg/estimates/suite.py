"""
Estimate suite: run a set of verifiers over one trace, retrying failures on a finer grid
"""

from __future__ import annotations

import numpy as np

from estimates.report import EstimateReport
from estimates.verifiers import (
    verify_area_conservation, verify_comparison, verify_delayed_gradient, verify_delayed_height,
    verify_harnack, verify_height_controls_gradient, verify_l1_growth, verify_lp_smoothing,
    verify_refined_gradient, verify_separation, verify_wedge_barrier,
)
from solver.scheme import run
from utils.config import load_settings
from utils.errors import PreconditionError
from wedge.areas import derived_constants

# Single-trace estimates, in report order
ESTIMATES = (
    "harnack",
    "delayed_gradient",
    "refined_gradient",
    "height_gradient",
    "delayed_height",
    "wedge_barrier",
    "lp_smoothing",
    "area_conservation",
    "l1_growth",
)
PAIR_ESTIMATES = ("separation", "comparison")
NEEDS_WEDGE = {"refined_gradient", "height_gradient", "delayed_height", "wedge_barrier", "lp_smoothing"}
DEFAULT_SHIFT = 1.0


def parse_estimates(selection):
    """'all' or a comma list of names -> tuple of names"""
    if selection is None or selection == "all":
        return ESTIMATES
    names = tuple(s.strip() for s in selection.split(",") if s.strip())
    unknown = [n for n in names if n not in ESTIMATES + PAIR_ESTIMATES]
    if unknown:
        raise PreconditionError(f"Unknown estimate(s): {', '.join(unknown)}")
    return names


def _single(name, trace, wedge, slack, options, constants):
    if name == "harnack":
        return verify_harnack(trace, slack=slack)
    if name == "delayed_gradient":
        return verify_delayed_gradient(trace, slack=slack)
    if name == "refined_gradient":
        return verify_refined_gradient(trace, wedge=wedge, slack=slack)
    if name == "height_gradient":
        shift = options.get("shift")
        report_note = None
        if shift is None and np.min(trace.initial_snapshot.values) <= 0:
            shift = DEFAULT_SHIFT
            report_note = f"data not positive: checked y + {DEFAULT_SHIFT:g}"
        report = verify_height_controls_gradient(trace, wedge=wedge, slack=slack, shift=shift,
                                                 constants=constants)
        if report_note:
            report.notes.append(report_note)
        return report
    if name == "delayed_height":
        return verify_delayed_height(trace, wedge=wedge, slack=slack, constants=constants)
    if name == "wedge_barrier":
        return verify_wedge_barrier(trace, wedge=wedge, slack=slack, x_shift=options.get("x_shift"),
                                    side=options.get("side", "both"))
    if name == "lp_smoothing":
        return verify_lp_smoothing(trace, options.get("p") or 2.0, wedge=wedge, slack=slack,
                                   constants=constants)
    if name == "area_conservation":
        return verify_area_conservation(trace, slack=slack)
    if name == "l1_growth":
        return verify_l1_growth(trace, slack=slack)
    raise PreconditionError(f"Unknown estimate: {name}")


def verify_trace(trace, names=ESTIMATES, wedge=None, slack=None, against=None, strict=True, **options):
    """
    Run the named verifiers on a trace

    Args:
        trace (FlowTrace): Trace to check
        names (tuple): Estimate names (see ESTIMATES and PAIR_ESTIMATES)
        wedge (WedgeProfile): Needed by the wedge-based estimates
        slack (float): Fixed slack, default max(floor, per_h * h)
        against (FlowTrace): Second trace for separation and comparison
        strict (bool): Raise on a violated precondition instead of recording a skipped report
        **options: shift, x_shift, side, p

    Returns:
        list: EstimateReport per name
    """
    missing = sorted(NEEDS_WEDGE.intersection(names)) if wedge is None else []
    if missing:
        raise PreconditionError(f"wedge profile required for: {', '.join(missing)}")
    constants = derived_constants(wedge) if wedge is not None else None
    reports = []
    for name in names:
        if name in PAIR_ESTIMATES:
            if against is None:
                raise PreconditionError(f"{name} needs a second trace")
            check = verify_separation if name == "separation" else verify_comparison
            reports.append(check(trace, against, slack=slack))
        else:
            try:
                reports.append(_single(name, trace, wedge, slack, options, constants))
            except PreconditionError as exc:
                if strict:
                    raise
                print(f"[WARNING] {name} skipped: {exc}")
                reports.append(EstimateReport(name, slack=0.0, notes=[f"skipped: {exc}"]))
    return reports


def rerun_refined(trace, factor=2):
    """Flow the trace's initial data again on a grid refined by factor, at the same times"""
    if trace.initial is None:
        raise PreconditionError("trace carries no initial data descriptor; cannot refine")
    scheme = trace.scheme
    times = trace.times
    return run(
        trace.initial,
        trace.grid.refined(factor),
        t_end=times[-1],
        boundary=scheme.get("boundary"),
        safety=scheme.get("safety"),
        snap_times=times[1:],
    )


def retry_refined(trace, reports, wedge=None, slack=None, **options):
    """
    Re-check failing single-trace estimates on h/2

    The retried report replaces the original; both outcomes are written to its notes.
    """
    failing = [i for i, r in enumerate(reports) if not r.passed and r.name in ESTIMATES]
    if not failing:
        return reports
    print(f"[RUN] Retrying {', '.join(reports[i].name for i in failing)} at h/2 = {trace.grid.h / 2:g}")
    fine = rerun_refined(trace)
    out = list(reports)
    for i in failing:
        first = reports[i]
        retried = verify_trace(fine, (first.name,), wedge=wedge, slack=first.slack, **options)[0]
        worst = first.worst
        retried.notes = list(first.notes) + [
            f"failed at h={trace.grid.h:g} (worst {worst.max_violation:.3e} at t={worst.t:g}); "
            f"{'passed' if retried.passed else 'still failing'} at h={fine.grid.h:g}"
        ] + retried.notes
        out[i] = retried
    return out


def run_suite(init, grid, t_end, names=ESTIMATES, wedge=None, slack=None, snap_every=None,
              snap_times=None, boundary=None, retry=None, **options):
    """
    Flow init on grid, run the named verifiers and retry failures once at h/2

    Returns:
        tuple: (FlowTrace, list of EstimateReport)
    """
    retry = load_settings()["estimates"]["refine_retry"] if retry is None else retry
    trace = run(init, grid, t_end, snap_every=snap_every, snap_times=snap_times, boundary=boundary)
    reports = verify_trace(trace, names, wedge=wedge, slack=slack, **options)
    if retry:
        reports = retry_refined(trace, reports, wedge=wedge, slack=slack, **options)
    return trace, reports


def suite_passed(reports):
    return all(r.passed for r in reports)


def summarize(reports):
    """One tagged line per report"""
    lines = []
    for report in reports:
        tag = "[OK]" if report.passed else "[FAIL]"
        worst = report.worst
        detail = "no applicable snapshots" if worst is None else (
            f"worst {worst.max_violation:.3e} ({worst.check}) at t={worst.t:g}"
            + ("" if worst.arg_x is None else f", x={worst.arg_x:g}")
        )
        lines.append(f"{tag} {report.name}: {detail}, slack {report.slack:.1e}")
    return lines

