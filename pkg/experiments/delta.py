"""
Witch-hat family approaching a delta function

Flows y0^n = n(1 - n|x|)_+ for several n and records, per (n, t), the sup norm, the
sup of |y_x|, the height at the axis and the distance to the wedge solution. Before
tau = 1/pi the sup norms grow with n; after tau the slope stays below
tan((1/t + pi)/4) uniformly in n.
"""

from __future__ import annotations

import math

import numpy as np

from analysis.quantities import crossing_count, evenness_defect, gradient, norms
from estimates.report import default_slack
from experiments.report import ExperimentReport
from experiments.runner import run_flows
from solver.grid import GridFunction
from solver.initial_data import WitchHat
from utils.errors import PreconditionError
from wedge.areas import scaled_wedge

TAU = 1.0 / math.pi
WEDGE_WINDOW = (0.5, 2.0)
EVEN_TOL = 1e-10
METRIC_TIME = 0.2

COLUMNS = [
    "n", "t", "sup", "grad_sup", "lip", "l1", "center", "center_lower_bound", "gradient_bound",
    "evenness_defect", "monotone_left", "crossings", "wedge_deviation",
]


def witch_hat(n):
    """Unit-area tent of height n on [-1/n, 1/n]"""
    return WitchHat(n)


def _check_grid(ns, grid):
    top = max(ns)
    if grid.h > 0.5 / top:
        raise PreconditionError(f"grid spacing h={grid.h:g} too coarse for n={top} (need h <= {0.5 / top:g})")
    if grid.h > 0.1 / top * (1 + 1e-9):
        print(f"[WARNING] h={grid.h:g} exceeds 1/(10n)={0.1 / top:g}; kink quadrature error grows")
    if grid.L <= 1.0 / min(ns):
        raise PreconditionError(f"grid half-width {grid.L:g} does not contain the hat support")


def wedge_deviation(f, t, wedge, window=WEDGE_WINDOW):
    """max over x in window of |y - W(x,t)| / W(x,t)"""
    x = f.x
    mask = (x >= window[0]) & (x <= window[1])
    target = scaled_wedge(wedge, x[mask], t)
    return float(np.max(np.abs(f.values[mask] - target) / target))


def shifted_barrier(f, t, shift, wedge):
    """W(x - shift, t) right of x = shift, f itself elsewhere (so only x > shift can cross)"""
    x = f.x
    values = f.values.copy()
    mask = x > shift
    values[mask] = scaled_wedge(wedge, x[mask] - shift, t)
    return GridFunction(f.grid, values)


def _row(n, t, f, wedge):
    x = f.x
    grad = np.abs(gradient(f).values)
    stats = norms(f)
    left = f.values[x <= 0]
    scale = max(1.0, stats["sup"])
    row = {
        "n": n,
        "t": t,
        "sup": stats["sup"],
        "grad_sup": float(np.max(grad)),
        "lip": stats["lip"],
        "l1": stats["l1"],
        "center": float(f.values[int(np.argmin(np.abs(x)))]),
        "center_lower_bound": 0.5 * n * (1.0 - math.pi * t) if t < TAU else None,
        "gradient_bound": math.tan(0.25 * (1.0 / t + math.pi)) if t > TAU else None,
        "evenness_defect": evenness_defect(f),
        "monotone_left": bool(np.all(np.diff(left) >= -EVEN_TOL * scale)),
        "crossings": None,
        "wedge_deviation": None,
    }
    if wedge is not None:
        row["crossings"] = crossing_count(f, shifted_barrier(f, t, 1.0 / n, wedge))
        if t < TAU:
            row["wedge_deviation"] = wedge_deviation(f, t, wedge)
    return row


def witch_hat_flows(ns, grid, times, jobs=None, traces=None):
    """Witch-hat traces for every n, reusing given ones"""
    traces = dict(traces or {})
    missing = [n for n in ns if n not in traces]
    tasks = [{"init": witch_hat(n), "grid": grid, "t_end": times[-1], "snap_times": times} for n in missing]
    traces.update(zip(missing, run_flows(tasks, jobs)))
    for n in ns:
        if traces[n].grid != grid:
            raise PreconditionError(f"trace for n={n} is not on the experiment grid")
    return [traces[n] for n in ns]


def _increasing(values):
    return all(b > a for a, b in zip(values, values[1:]))


def run_delta_experiment(ns, grid, times, wedge=None, slack=None, jobs=None, traces=None):
    """
    Flow the witch-hat family and check the delta-function picture

    Args:
        ns (list): Hat parameters n
        grid (Grid): Shared grid; h <= 1/(10 max n) with nodes on +-1/n keeps kinks exact
        times (list): Probe times, some below and some above tau = 1/pi
        wedge (WedgeProfile): Enables the wedge comparisons (optional)
        slack (float): Numerical slack, default max(floor, per_h * h)
        jobs (int): Worker processes for the flows
        traces (dict): n -> FlowTrace already computed on grid with snapshots at times (optional)

    Returns:
        ExperimentReport: table per_n_t plus conclusions a-d, evenness and left monotonicity
    """
    ns = sorted(int(n) for n in ns)
    times = sorted(float(t) for t in times)
    if not ns or not times:
        raise PreconditionError("delta experiment needs at least one n and one time")
    if not (times[0] < TAU < times[-1]):
        raise PreconditionError(f"times must include values below and above tau = {TAU:.5f}")
    _check_grid(ns, grid)
    slack = default_slack(grid.h) if slack is None else float(slack)

    traces = witch_hat_flows(ns, grid, times, jobs, traces)

    rows = {}
    for n, trace in zip(ns, traces):
        for t in times:
            rows[(n, t)] = _row(n, t, trace.at(t), wedge)

    report = ExperimentReport(
        name="witch_hat",
        parameters={"n": ns, "times": times, "grid": grid.to_dict(), "slack": slack, "tau": TAU},
    )
    report.add_table("per_n_t", COLUMNS, [[rows[(n, t)][c] for c in COLUMNS] for n in ns for t in times])

    pre = [t for t in times if t <= TAU]
    post = [t for t in times if t > TAU]
    below = [t for t in times if t < TAU]

    report.conclusions["a_sup_increasing_before_tau"] = all(
        _increasing([rows[(n, t)]["sup"] for n in ns]) and _increasing([rows[(n, t)]["grad_sup"] for n in ns])
        for t in pre
    ) if len(ns) > 1 else True
    report.conclusions["b_center_lower_bound"] = all(
        rows[(n, t)]["center"] >= rows[(n, t)]["center_lower_bound"] - slack * n for n in ns for t in below
    )
    report.conclusions["c_gradient_bound_after_tau"] = all(
        math.atan(rows[(n, t)]["grad_sup"]) <= 0.25 * (1.0 / t + math.pi) + slack for n in ns for t in post
    )
    report.conclusions["even"] = all(
        rows[key]["evenness_defect"] <= EVEN_TOL * max(1.0, rows[key]["sup"]) for key in rows
    )
    report.conclusions["monotone_left"] = all(rows[key]["monotone_left"] for key in rows)

    if wedge is None:
        report.notes.append("no wedge profile: wedge deviation and crossings not measured")
    else:
        if len(ns) > 1:
            report.conclusions["d_wedge_deviation_shrinks"] = all(
                rows[(ns[-1], t)]["wedge_deviation"] < rows[(ns[0], t)]["wedge_deviation"] for t in below
            )
        history = {
            str(n): [rows[(n, t)]["crossings"] for t in times] for n in ns
        }
        report.metrics["crossings"] = history
        report.metrics["crossings_nonincreasing"] = all(
            all(b <= a for a, b in zip(counts, counts[1:])) for counts in history.values()
        )
        if not report.metrics["crossings_nonincreasing"]:
            report.notes.append("crossing count against the shifted wedge increased on some run")

    if below:
        t_metric = min(below, key=lambda t: abs(t - METRIC_TIME))
        ratio = rows[(ns[-1], t_metric)]["grad_sup"] / rows[(ns[0], t_metric)]["grad_sup"]
        report.metrics["pre_tau_gradient_ratio"] = {"t": t_metric, "n_low": ns[0], "n_high": ns[-1], "ratio": ratio}
        if wedge is not None:
            report.metrics["wedge_deviation"] = {
                "t": t_metric, "n": ns[-1], "deviation": rows[(ns[-1], t_metric)]["wedge_deviation"],
            }
    return report
