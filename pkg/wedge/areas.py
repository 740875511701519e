"""
Evaluators on a WedgeProfile: W, W', the tail area sigma, the triangle-plus-tail
area A0, its complement A1, F = A0 o sigma^{-1}, and the scaled wedge.

All evaluators accept scalars or numpy arrays and return the same shape.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from utils.errors import PreconditionError
from wedge.profile import _invert_tail, _tail_integral, _tail_value

HALF_PI = 0.5 * math.pi


def _prepare(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise PreconditionError(f"{name} must be > 0")
    return arr.reshape(-1)


def _finish(x, flat):
    if np.ndim(x) == 0:
        return float(flat[0])
    return flat.reshape(np.shape(x))


def _w_flat(p, xs):
    out = np.empty_like(xs)
    left = xs < p.x_min
    right = xs > p.x_max
    mid = ~(left | right)
    out[mid] = p._w_spline(xs[mid])
    out[right] = _tail_value(p.tail_coefficient, xs[right])
    out[left] = _invert_tail(p.tail_coefficient, xs[left])
    return out


def _wp_flat(p, xs):
    out = np.empty_like(xs)
    left = xs < p.x_min
    right = xs > p.x_max
    mid = ~(left | right)
    out[mid] = p._wp_spline(xs[mid])
    xr = xs[right]
    out[right] = -0.5 * xr * _tail_value(p.tail_coefficient, xr)
    xl = xs[left]
    out[left] = -2.0 / (xl * _invert_tail(p.tail_coefficient, xl))
    return out


def _sigma_forward(p, xs):
    """sigma on x >= x0"""
    out = np.empty_like(xs)
    right = xs > p.x_max
    inner = ~right
    anti = p._w_antiderivative
    out[inner] = anti(p.x_max) - anti(xs[inner]) + _tail_integral(p.tail_coefficient, p.x_max)
    out[right] = _tail_integral(p.tail_coefficient, xs[right])
    return out


def _sigma_flat(p, xs):
    out = np.empty_like(xs)
    fwd = xs >= p.symmetric_point
    out[fwd] = _sigma_forward(p, xs[fwd])
    back = ~fwd
    if np.any(back):
        xb = xs[back]
        wb = _w_flat(p, xb)
        out[back] = p.total_area - xb * wb - _sigma_forward(p, wb)
    return out


def eval_W(p, x):
    """W(x) for x > 0: spline inside the samples, tail formula right of x_max, symmetry left of x_min"""
    return _finish(x, _w_flat(p, _prepare(x)))


def eval_Wprime(p, x):
    """W'(x) for x > 0; -W' = xW/2 beyond x_max and W'(x) = 1/W'(W(x)) below x_min"""
    return _finish(x, _wp_flat(p, _prepare(x)))


def tail_area(p, x):
    """
    sigma(x): area under W to the right of x

    Left of the symmetric point the region under W over (0, x) is a rectangle x*W(x)
    plus the tail sigma(W(x)), so sigma(x) = total - x W(x) - sigma(W(x)).
    """
    return _finish(x, _sigma_flat(p, _prepare(x)))


def area_A0(p, x):
    """A0(x) = x W(x)/2 + sigma(x)"""
    xs = _prepare(x)
    return _finish(x, 0.5 * xs * _w_flat(p, xs) + _sigma_flat(p, xs))


def area_A1(p, x):
    """A1(x) = pi/2 - A0(x)"""
    xs = _prepare(x)
    return _finish(x, HALF_PI - (0.5 * xs * _w_flat(p, xs) + _sigma_flat(p, xs)))


def inverse_sigma(p, a):
    """sigma^{-1}(a) for a in (0, pi/2), by Brent's method in log x"""
    arr = np.asarray(a, dtype=float)
    if np.any(~((arr > 0) & (arr < HALF_PI))):
        raise PreconditionError("a must lie in (0, pi/2)")

    lo, hi = math.log(1e-300), math.log(40.0)
    s_lo = float(tail_area(p, math.exp(lo)))
    s_hi = float(tail_area(p, math.exp(hi)))

    def solve(value):
        if value >= s_lo:
            return math.exp(lo)
        if value <= s_hi:
            return math.exp(hi)
        u = brentq(lambda u: float(tail_area(p, math.exp(u))) - value, lo, hi,
                   xtol=1e-14, rtol=1e-15, maxiter=500)
        return math.exp(u)

    if arr.ndim == 0:
        return solve(float(arr))
    return np.array([solve(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def bigF(p, a):
    """F(a) = A0(sigma^{-1}(a))"""
    return area_A0(p, inverse_sigma(p, a))


def scaled_wedge(p, x, t):
    """The wedge solution at time t: sqrt(t) W(x / sqrt(t))"""
    if np.any(~(np.asarray(t, dtype=float) > 0)):
        raise PreconditionError("t must be > 0")
    _prepare(x)
    xb, tb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    root = np.sqrt(tb)
    out = root * _w_flat(p, (xb / root).reshape(-1)).reshape(xb.shape)
    if out.ndim == 0:
        return float(out)
    return out


def polar_sector_area(p, x):
    """
    Area swept in polar coordinates from the positive x-axis up to the ray through (x, W(x))

    Computed directly as the integral of (W - sW')/2 from x to infinity, independent of sigma.
    """
    x = float(_prepare(x)[0])

    def integrand(s):
        return 0.5 * (eval_W(p, s) - s * eval_Wprime(p, s))

    area = 0.0
    if x < p.x_max:
        breaks = [p.symmetric_point] if x < p.symmetric_point else None
        area += quad(integrand, x, p.x_max, points=breaks, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    area += quad(integrand, max(x, p.x_max), np.inf, limit=200, epsabs=1e-16, epsrel=1e-12)[0]
    return area


def derived_constants(p, scan_points=2000):
    """
    Constants read off the profile

    Returns:
        dict: C_refine_cor = W(sigma^{-1}(pi/4)); C1_es_imp = smallest C with
        1/(-W'(y)) <= C (y e^{y^2/4} + 1) over the scanned range; C_decay = smallest C
        with W(X) <= C e^{-X^2/4}/X^2 for X >= 1
    """
    c_refine = float(eval_W(p, inverse_sigma(p, 0.25 * math.pi)))

    y = np.geomspace(1e-3, p.x_max, int(scan_points))
    ratio = (1.0 / -_wp_flat(p, y)) / (y * np.exp(0.25 * y * y) + 1.0)
    c1 = float(np.max(ratio))

    X = np.linspace(1.0, p.x_max, int(scan_points))
    decay = _w_flat(p, X) * X * X * np.exp(0.25 * X * X)
    c_decay = max(float(np.max(decay)), float(p.tail_coefficient))

    return {"C_refine_cor": c_refine, "C1_es_imp": c1, "C_decay": c_decay}


def barrier_half_width(t_end, c_decay, tol=1e-12, support=0.0, step=0.5):
    """
    Smallest half-width L (multiple of step) with C t^{3/2} e^{-r^2/4t} / r^2 < tol at r = L - support

    Truncating at +-L then perturbs the flow of data supported in [-support, support]
    by less than tol up to t_end.
    """
    if t_end <= 0:
        raise PreconditionError("t_end must be > 0")
    L = step * math.ceil((support + math.sqrt(t_end)) / step)
    while True:
        r = L - support
        if r >= math.sqrt(t_end):
            bound = c_decay * t_end ** 1.5 * math.exp(-r * r / (4.0 * t_end)) / (r * r)
            if bound < tol:
                return L
        L += step
