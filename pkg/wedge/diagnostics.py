"""
Built-in correctness oracles of the wedge profile: ODE residual, first integral,
involution W(W(x)) = x, total area pi/2, Gaussian decay, zero-Harnack identity and
the splice mismatch at x_max.
"""

from __future__ import annotations

import math

import numpy as np

from wedge.areas import area_A0, eval_W, eval_Wprime, polar_sector_area
from wedge.profile import _tail_value, second_derivative, shoot_profile


def first_integral_ratio(p, x, w, wp):
    """d^2 e^{d^2/2}(1 + W'^2) e^{-(x^2+W^2)/2} / (-xW' + W)^2, identically 1 on the exact profile"""
    d2 = p.d * p.d
    log_ratio = (np.log(d2) + 0.5 * d2 + np.log1p(wp * wp)
                 - 0.5 * (x * x + w * w) - 2.0 * np.log(w - x * wp))
    return np.exp(log_ratio)


def ode_residual(p):
    """
    max |2W'' - (1+W'^2)(W - xW')| relative to (1+W'^2) max(|W|, |xW'|)

    Taken at midpoints of the forward samples on [x0, x_max], with W'' from the W'
    interpolant. The reflected branch is the same curve and is covered by the involution check.
    """
    fx = p.x[p.x >= p.symmetric_point]
    xm = 0.5 * (fx[1:] + fx[:-1])
    w = p._w_spline(xm)
    wp = p._wp_spline(xm)
    wpp = p._wp_spline.derivative()(xm)
    scale = (1.0 + wp * wp) * np.maximum(np.abs(w), np.abs(xm * wp))
    return float(np.max(np.abs(2.0 * wpp - 2.0 * second_derivative(xm, w, wp)) / scale))


def first_integral_spread(p):
    """Relative spread of the first integral over the forward samples"""
    fwd = p.x >= p.symmetric_point
    ratio = first_integral_ratio(p, p.x[fwd], p.w[fwd], p.wprime[fwd])
    return float((ratio.max() - ratio.min()) / ratio.mean())


def involution_error(p, lo=None, hi=None, points=100):
    lo = p.x_min if lo is None else lo
    hi = p.x_max if hi is None else hi
    xs = np.geomspace(lo, hi, points)
    return float(np.max(np.abs(np.asarray(eval_W(p, eval_W(p, xs))) - xs)))


def decay_violation(p, points=200):
    """max over sampled x < s of W(s) - W(x) e^{(x^2 - s^2)/4}(1 + 10 tol); <= 0 when the decay holds"""
    idx = np.unique(np.linspace(0, p.x.size - 1, points).astype(int))
    x = p.x[idx]
    w = p.w[idx]
    xi, si = np.meshgrid(x, x, indexing="ij")
    wi, ws = np.meshgrid(w, w, indexing="ij")
    bound = wi * np.exp(0.25 * (xi * xi - si * si)) * (1.0 + 10.0 * p.tolerance)
    gap = np.where(xi < si, ws - bound, -np.inf)
    return float(np.max(gap))


def slope_area_error(p, lo=0.2, hi=5.0, points=100):
    xs = np.linspace(lo, hi, points)
    return float(np.max(np.abs(np.arctan(-np.asarray(eval_Wprime(p, xs))) - np.asarray(area_A0(p, xs)))))


def zero_harnack_error(p, lo=0.2, hi=5.0, points=20):
    """Polar swept area against -arctan W' on a coarse set of points"""
    xs = np.linspace(lo, hi, points)
    return float(max(abs(polar_sector_area(p, x) + math.atan(eval_Wprime(p, x))) for x in xs))


def splice_mismatch(p):
    """Relative jump of W and W' where the interpolant hands over to the tail formula"""
    x = p.x_max
    w_tail = float(_tail_value(p.tail_coefficient, x))
    wp_tail = -0.5 * x * w_tail
    return {
        "w": w_tail / float(p.w[-1]) - 1.0,
        "wprime": wp_tail / float(p.wprime[-1]) - 1.0,
    }


def backward_consistency(p, w_cap=4.0):
    """Backward shot from the symmetric point against the reflected forward branch"""
    path = shoot_profile(p.symmetric_point, p.x_max, p.tolerance, n_samples=11, w_cap=w_cap)
    keep = path.backward_x >= p.x_min
    xb = path.backward_x[keep]
    return float(np.max(np.abs(np.asarray(eval_W(p, xb)) - path.backward_w[keep]) / path.backward_w[keep]))


def wedge_diagnostics(p):
    """
    Measure every profile invariant

    Returns:
        dict: named measurements; area_error and first_integral_spread are also written
        to the wedge JSON sidecar by exporters.trace_io.write_wedge
    """
    return {
        "area": p.total_area,
        "area_error": abs(p.total_area - 0.5 * math.pi),
        "d_squared": p.d * p.d,
        "ode_residual": ode_residual(p),
        "first_integral_spread": first_integral_spread(p),
        "involution_error": involution_error(p),
        "decay_violation": decay_violation(p),
        "slope_area_error": slope_area_error(p),
        "zero_harnack_error": zero_harnack_error(p),
        "splice_mismatch": splice_mismatch(p),
        "backward_consistency": backward_consistency(p),
        "monotone": bool(np.all(p.wprime < 0) and np.all(np.diff(p.w) < 0)),
        "convex": bool(np.all(np.diff(p.wprime) > 0)),
    }
