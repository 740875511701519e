"""
Verifiers: each evaluates one inequality on every snapshot of a FlowTrace

Angles are compared in radians (arctan of slopes), heights and areas in their own units.
The threshold time is tau = A0/pi throughout.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from analysis.quantities import accumulated_area, gradient, lp_norm, norms, positive_part_l1, total_area
from estimates.report import EstimateReport, SnapshotCheck, default_slack, worst_over_nodes
from utils.errors import PreconditionError
from wedge.areas import area_A1, bigF, derived_constants, eval_W, inverse_sigma, scaled_wedge

QUARTER_PI = 0.25 * math.pi
HALF_PI = 0.5 * math.pi
NEGATIVE_TOL = 1e-12


def _initial_area(trace, A0):
    if A0 is not None:
        return float(A0)
    return norms(trace.initial_snapshot)["l1"]


def _require_nonnegative(trace, name):
    for t, f in trace.snapshots:
        if f.values.min() < -NEGATIVE_TOL:
            raise PreconditionError(f"{name} is stated for nonnegative solutions; snapshot t={t:g} has min {f.values.min():g}")


def _slack(trace, slack):
    return default_slack(trace.grid.h) if slack is None else float(slack)


def _constants(wedge, constants):
    return derived_constants(wedge) if constants is None else constants


def _same_layout(a, b):
    if a.grid != b.grid:
        raise PreconditionError("traces live on different grids")
    if len(a.times) != len(b.times) or not np.allclose(a.times, b.times, rtol=0, atol=1e-12):
        raise PreconditionError("traces have different snapshot times")


def is_even(f, rel=1e-12):
    return float(np.max(np.abs(f.values - f.values[::-1]))) <= rel * max(1.0, float(np.max(np.abs(f.values))))


def verify_harnack(trace, A0=None, slack=None, even=None):
    """
    arctan y_x <= A/2t + pi/4 and arctan y_x >= -[(A0 - A)/2t + pi/4] at every node

    For even data the corollary arctan y_x <= A0/4t + pi/4 on x <= 0, t >= tau is added.
    """
    _require_nonnegative(trace, "harnack")
    A0 = _initial_area(trace, A0)
    tau = A0 / math.pi
    even = is_even(trace.initial_snapshot) if even is None else even
    report = EstimateReport("harnack", threshold_time=tau, slack=_slack(trace, slack))
    x = trace.grid.nodes
    for t, f in trace.positive_times():
        area = accumulated_area(f).values
        angle = np.arctan(gradient(f).values)
        worst_over_nodes(report, t, angle - (area / (2 * t) + QUARTER_PI), x, check="upper")
        worst_over_nodes(report, t, -((A0 - area) / (2 * t) + QUARTER_PI) - angle, x, check="lower")
        if even:
            if t >= tau:
                worst_over_nodes(report, t, angle - (A0 / (4 * t) + QUARTER_PI), x, mask=x <= 0, check="even")
            else:
                report.add(SnapshotCheck(t=t, check="even", applies=False))
    if even:
        report.notes.append("even data: corollary on x <= 0 checked for t >= tau")
    return report


def verify_delayed_gradient(trace, A0=None, slack=None):
    """arctan|y_x| <= A0/4t + pi/4; non-vacuous only after tau, reported as check 'post_threshold'"""
    A0 = _initial_area(trace, A0)
    tau = A0 / math.pi
    report = EstimateReport("delayed_gradient", threshold_time=tau, slack=_slack(trace, slack))
    x = trace.grid.nodes
    for t, f in trace.positive_times():
        angle = np.arctan(np.abs(gradient(f).values))
        label = "post_threshold" if t > tau else "pre_threshold"
        worst_over_nodes(report, t, angle - (A0 / (4 * t) + QUARTER_PI), x, check=label)
    return report


def verify_refined_gradient(trace, A0=None, wedge=None, slack=None):
    """arctan|y_x| < F(A0/2t) for t > tau (1 + slack)"""
    if wedge is None:
        raise PreconditionError("refined gradient estimate needs a wedge profile")
    A0 = _initial_area(trace, A0)
    tau = A0 / math.pi
    report = EstimateReport("refined_gradient", threshold_time=tau, slack=_slack(trace, slack))
    x = trace.grid.nodes
    bounds = []
    for t, f in trace.positive_times():
        if t <= tau * (1.0 + report.slack):
            report.add(SnapshotCheck(t=t, applies=False))
            continue
        a = A0 / (2 * t)
        bound = float(bigF(wedge, a))
        bounds.append((t, bound, A0 / (4 * t) + QUARTER_PI))
        angle = np.arctan(np.abs(gradient(f).values))
        worst_over_nodes(report, t, angle - bound, x)
    report.extras["bounds"] = [{"t": t, "refined": b, "delayed": d} for t, b, d in bounds]
    if any(b > d for _, b, d in bounds):
        report.notes.append("refined bound exceeded the delayed-gradient bound at some time")
    return report


def sharpness_ratio(f, t, wedge, shift=0.0):
    """|y_x| / tan A1((y + shift)/sqrt t) at interior nodes"""
    y = f.values[1:-1] + shift
    slope = np.abs(gradient(f).values[1:-1])
    return slope / np.tan(np.asarray(area_A1(wedge, y / math.sqrt(t))))


def verify_height_controls_gradient(trace, wedge=None, slack=None, shift=None, constants=None):
    """
    arctan|y_x| <= A1((y + m)/sqrt t) for positive solutions, plus the explicit form
    |y_x| <= C1 (Y e^{Y^2/4} + 1) with Y = (y + m)/sqrt t (check 'explicit')
    """
    if wedge is None:
        raise PreconditionError("height-controls-gradient estimate needs a wedge profile")
    m = 0.0 if shift is None else float(shift)
    for t, f in trace.positive_times():
        if np.min(f.values) + m <= 0:
            raise PreconditionError(
                f"snapshot t={t:g} is not positive; configure a shift m with y + m > 0")
    c1 = _constants(wedge, constants)["C1_es_imp"]
    report = EstimateReport("height_gradient", slack=_slack(trace, slack), shift=shift)
    x = trace.grid.nodes
    for t, f in trace.positive_times():
        Y = (f.values + m) / math.sqrt(t)
        slope = np.abs(gradient(f).values)
        worst_over_nodes(report, t, np.arctan(slope) - np.asarray(area_A1(wedge, Y)), x)
        with np.errstate(over="ignore"):
            explicit = c1 * (Y * np.exp(0.25 * Y * Y) + 1.0)
        worst_over_nodes(report, t, slope - explicit, x, check="explicit")
    report.extras["C1_es_imp"] = c1
    return report


def delayed_height_bound(A0, t, wedge):
    """sqrt(t) W(sigma^{-1}(A0/2t)) for t > tau, None otherwise"""
    a = A0 / (2.0 * t)
    if not 0 < a < HALF_PI:
        return None
    return math.sqrt(t) * float(eval_W(wedge, inverse_sigma(wedge, a)))


def verify_delayed_height(trace, A0=None, wedge=None, slack=None, constants=None):
    """
    Three checks on sup y: the sharp bound for t > tau, C sqrt(t) for t >= 2 tau, and
    2 sqrt(t) sqrt(-log(pi/2 - A0/2t)) where pi/2 - A0/2t < 0.1
    """
    if wedge is None:
        raise PreconditionError("delayed height estimate needs a wedge profile")
    _require_nonnegative(trace, "delayed height")
    A0 = _initial_area(trace, A0)
    tau = A0 / math.pi
    c_refine = _constants(wedge, constants)["C_refine_cor"]
    report = EstimateReport("delayed_height", threshold_time=tau, slack=_slack(trace, slack))
    x = trace.grid.nodes
    for t, f in trace.positive_times():
        i = int(np.argmax(f.values))
        top, where = float(f.values[i]), float(x[i])
        sharp = delayed_height_bound(A0, t, wedge) if t > tau else None
        if sharp is None:
            report.add(SnapshotCheck(t=t, check="sharp", applies=False))
        else:
            report.add(SnapshotCheck(t=t, max_violation=top - sharp, arg_x=where, check="sharp"))
        if t >= 2 * tau * (1.0 - 1e-9):
            report.add(SnapshotCheck(t=t, max_violation=top - c_refine * math.sqrt(t), arg_x=where, check="simple"))
        else:
            report.add(SnapshotCheck(t=t, check="simple", applies=False))
        eps = HALF_PI - A0 / (2 * t)
        if t > tau and 0 < eps < 0.1:
            bound = 2.0 * math.sqrt(t) * math.sqrt(-math.log(eps))
            report.add(SnapshotCheck(t=t, max_violation=top - bound, arg_x=where, check="log"))
        else:
            report.add(SnapshotCheck(t=t, check="log", applies=False))
    report.extras["C_refine_cor"] = c_refine
    return report


def _support_edges(f, tol=NEGATIVE_TOL):
    nz = np.flatnonzero(np.abs(f.values) > tol)
    if nz.size == 0:
        return None
    x = f.x
    return float(x[nz[0]]), float(x[nz[-1]])


def verify_wedge_barrier(trace, wedge=None, slack=None, x_shift=None, side="right"):
    """
    |y(x,t)| <= W(x - x_shift, t) for x > x_shift + sqrt t, for data vanishing on x >= x_shift

    side="left" mirrors the check (data vanishing on x <= -x_shift), "both" does both.
    """
    if wedge is None:
        raise PreconditionError("wedge barrier needs a wedge profile")
    if side not in ("right", "left", "both"):
        raise PreconditionError(f"Unsupported side: {side}")
    f0 = trace.initial_snapshot
    x = trace.grid.nodes
    edges = _support_edges(f0)
    if x_shift is None:
        x_shift = 0.0 if edges is None else max(edges[1], -edges[0])
    if edges is not None:
        if side in ("right", "both") and edges[1] > x_shift + 1e-12:
            raise PreconditionError(f"initial data do not vanish on x >= {x_shift:g}")
        if side in ("left", "both") and edges[0] < -x_shift - 1e-12:
            raise PreconditionError(f"initial data do not vanish on x <= {-x_shift:g}")
    report = EstimateReport("wedge_barrier", slack=_slack(trace, slack), shift=float(x_shift))
    for t, f in trace.positive_times():
        root = math.sqrt(t)
        for label, sign in (("right", 1.0), ("left", -1.0)):
            if side not in (label, "both"):
                continue
            mask = sign * x > x_shift + root
            excess = np.full(x.shape, -np.inf)
            if np.any(mask):
                excess[mask] = np.abs(f.values[mask]) - scaled_wedge(wedge, sign * x[mask] - x_shift, t)
            worst_over_nodes(report, t, excess, x, mask=mask, check=label)
    return report


def level_for_mass(f, mass):
    """k with ||(y - k)_+||_1 = mass, by Brent's method on the trapezoid integral"""
    y = f.values
    h = f.grid.h

    def excess(k):
        return trapezoid(np.maximum(y - k, 0.0), dx=h) - mass

    if excess(0.0) <= 0:
        return 0.0
    return brentq(excess, 0.0, float(np.max(y)), xtol=1e-14)


def verify_lp_smoothing(trace, p, norm_p=None, wedge=None, slack=None, constants=None):
    """
    sup|y(t)| <= k + C sqrt(t) on 0 < t < ||y0||_p^{2p/(p+1)}

    k = 0 once t >= ||y0||_1, otherwise ||(y0 - k)_+||_1 = t; the power form
    k <= ||y0||_p^{p/(p-1)} t^{-1/(p-1)} is checked as 'power'.
    """
    if not p > 1:
        raise PreconditionError(f"p must be > 1 (got {p})")
    if wedge is None and constants is None:
        raise PreconditionError("Lp smoothing needs a wedge profile or its derived constants")
    _require_nonnegative(trace, "Lp smoothing")
    f0 = trace.initial_snapshot
    norm_p = lp_norm(f0, p) if norm_p is None else float(norm_p)
    l1 = norms(f0)["l1"]
    c = _constants(wedge, constants)["C_refine_cor"]
    window = norm_p ** (2 * p / (p + 1))
    report = EstimateReport("lp_smoothing", threshold_time=l1 / math.pi, slack=_slack(trace, slack))
    normalized = []
    for t, f in trace.positive_times():
        if t >= window:
            report.add(SnapshotCheck(t=t, applies=False))
            report.add(SnapshotCheck(t=t, check="power", applies=False))
            continue
        top = float(np.max(np.abs(f.values)))
        where = float(f.x[int(np.argmax(np.abs(f.values)))])
        k = 0.0 if t >= l1 else level_for_mass(f0, t)
        k_power = 0.0 if t >= l1 else norm_p ** (p / (p - 1)) * t ** (-1.0 / (p - 1))
        report.add(SnapshotCheck(t=t, max_violation=top - (k + c * math.sqrt(t)), arg_x=where))
        report.add(SnapshotCheck(t=t, max_violation=top - (k_power + c * math.sqrt(t)), arg_x=where, check="power"))
        normalized.append({"t": t, "value": top * t ** (1.0 / (p - 1)) / norm_p ** (p / (p - 1)), "k": k, "k_power": k_power})
    report.extras.update({"p": p, "norm_p": norm_p, "window": window, "C": c, "normalized": normalized})
    if normalized:
        report.extras["cap"] = max(entry["value"] for entry in normalized)
    return report


def verify_separation(traceA, traceB, slack=None):
    """||(yA - yB)_+||_1 (t) <= same at s + 2 pi (t - s) for all snapshot pairs s < t"""
    _same_layout(traceA, traceB)
    report = EstimateReport("separation", slack=_slack(traceA, slack))
    times = traceA.times
    dist = [positive_part_l1(a, b) for (_, a), (_, b) in zip(traceA.snapshots, traceB.snapshots)]
    for j in range(1, len(times)):
        growth = [dist[j] - dist[i] - 2 * math.pi * (times[j] - times[i]) for i in range(j)]
        i = int(np.argmax(growth))
        report.add(SnapshotCheck(t=times[j], max_violation=float(growth[i]), arg_s=times[i]))
    report.extras["distances"] = [{"t": t, "distance": d} for t, d in zip(times, dist)]
    return report


def verify_comparison(traceA, traceB, slack=None):
    """yA <= yB at all nodes and times when yA(0) <= yB(0)"""
    _same_layout(traceA, traceB)
    if np.any(traceA.initial_snapshot.values > traceB.initial_snapshot.values + NEGATIVE_TOL):
        raise PreconditionError("comparison needs yA(0) <= yB(0) at every node")
    report = EstimateReport("comparison", slack=_slack(traceA, slack))
    x = traceA.grid.nodes
    for (t, a), (_, b) in zip(traceA.snapshots, traceB.snapshots):
        if t > 0:
            worst_over_nodes(report, t, a.values - b.values, x)
    return report


def verify_area_conservation(trace, slack=None):
    """
    Relative drift |area(t) - area(0)| / area(0) beyond the boundary-flux budget

    The budget integrates |arctan| of the two boundary face slopes in time (trapezoid over
    snapshots).
    """
    _require_nonnegative(trace, "area conservation")
    report = EstimateReport("area_conservation", slack=_slack(trace, slack))
    if trace.scheme.get("boundary", "dirichlet0") != "dirichlet0":
        report.notes.append(f"boundary {trace.scheme.get('boundary')} is not dirichlet0")
    h = trace.grid.h
    area0 = total_area(trace.initial_snapshot)
    scale = abs(area0) if area0 != 0 else 1.0

    def face_flux(f):
        y = f.values
        return abs(math.atan((y[1] - y[0]) / h)) + abs(math.atan((y[-1] - y[-2]) / h))

    budget = 0.0
    prev_t, prev_flux = 0.0, face_flux(trace.initial_snapshot)
    drifts = []
    for t, f in trace.positive_times():
        flux = face_flux(f)
        budget += 0.5 * (flux + prev_flux) * (t - prev_t)
        prev_t, prev_flux = t, flux
        drift = abs(total_area(f) - area0)
        drifts.append({"t": t, "drift": drift / scale, "budget": budget / scale})
        report.add(SnapshotCheck(t=t, max_violation=(drift - budget) / scale))
    report.extras["drift"] = drifts
    return report


def verify_l1_growth(trace, slack=None):
    """||y(t)||_1 <= ||y0||_1 + 4 pi t, for signed data"""
    report = EstimateReport("l1_growth", slack=_slack(trace, slack))
    l1_0 = norms(trace.initial_snapshot)["l1"]
    for t, f in trace.positive_times():
        report.add(SnapshotCheck(t=t, max_violation=norms(f)["l1"] - l1_0 - 4 * math.pi * t))
    return report
