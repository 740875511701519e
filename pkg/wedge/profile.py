"""
Right-angled wedge profile
Shoots the self-similar ODE 2W''/(1+W'^2) = -xW' + W from the symmetric point (x0, x0)
with slope -1 and bisects on x0 until the forward branch flattens out onto the axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.special import erfcx

from utils.config import load_settings
from utils.errors import BracketError, NumericalError, PreconditionError

SQRT_PI = math.sqrt(math.pi)


def wedge_rhs(x, state):
    """First-order form of W'' = (1 + W'^2)(W - xW')/2"""
    w, wp = state
    return [wp, 0.5 * (1.0 + wp * wp) * (w - x * wp)]


def second_derivative(x, w, wp):
    """W'' from the ODE at points (x, W, W')"""
    return 0.5 * (1.0 + wp * wp) * (w - x * wp)


def _atol(step_tol):
    # the decaying branch reaches ~1e-15 near x = 12
    return step_tol * 1e-8


@dataclass(frozen=True)
class ShotPath:
    """Raw output of one shot from the symmetric point"""

    x0: float
    forward_x: np.ndarray
    forward_w: np.ndarray
    forward_wp: np.ndarray
    backward_x: np.ndarray
    backward_w: np.ndarray
    backward_wp: np.ndarray

    @property
    def terminal_angle(self):
        return math.atan(self.forward_wp[-1])


def shoot_profile(x0, x_max, step_tol, n_samples=2001, w_cap=4.0):
    """
    Integrate the wedge ODE forward to x_max and backward toward 0

    The backward branch is stopped once W exceeds w_cap, since W blows up as x -> 0.

    Args:
        x0 (float): Symmetric point, initial state (x0, W = x0, W' = -1)
        x_max (float): Right end of the forward branch
        step_tol (float): Relative per-step error tolerance
        n_samples (int): Number of forward samples
        w_cap (float): Height at which the backward branch stops

    Returns:
        ShotPath: forward samples on a uniform grid, backward samples at solver steps
    """
    if x0 <= 0 or x_max <= x0 or step_tol <= 0:
        raise PreconditionError(f"shoot_profile needs 0 < x0 < x_max and step_tol > 0 (got {x0}, {x_max}, {step_tol})")

    xs = np.linspace(x0, x_max, int(n_samples))
    fwd = solve_ivp(wedge_rhs, (x0, x_max), [x0, -1.0], method="DOP853", t_eval=xs,
                    rtol=step_tol, atol=_atol(step_tol))
    if fwd.status != 0 or not np.all(np.isfinite(fwd.y)):
        raise NumericalError(f"forward shot from x0={x0} failed before x_max={x_max}: {fwd.message}")

    w, wp = fwd.y
    falling = (wp[1:] < 0) & (wp[:-1] < 0)
    if np.any(np.diff(w)[falling] >= 0):
        raise NumericalError("forward branch not monotone where W' < 0, step tolerance too coarse")

    def above_cap(x, state):
        return state[0] - w_cap
    above_cap.terminal = True

    bwd = solve_ivp(wedge_rhs, (x0, x0 * 1e-9), [x0, -1.0], method="DOP853", events=above_cap,
                    rtol=step_tol, atol=_atol(step_tol))
    if bwd.status == -1 or not np.all(np.isfinite(bwd.y)):
        raise NumericalError(f"backward shot from x0={x0} failed: {bwd.message}")

    return ShotPath(
        x0=float(x0),
        forward_x=fwd.t, forward_w=w, forward_wp=wp,
        backward_x=bwd.t, backward_w=bwd.y[0], backward_wp=bwd.y[1],
    )


def terminal_angle(x0, x_shoot, step_tol):
    """
    Bisection oracle: tangent angle where the forward shot ends

    Negative when the graph reaches the axis (x0 too small), positive once the slope
    has turned upward (x0 too large). Both events are irreversible for this ODE.
    """
    def hits_axis(x, state):
        return state[0]
    hits_axis.terminal = True
    hits_axis.direction = -1

    sol = solve_ivp(wedge_rhs, (x0, x_shoot), [x0, -1.0], method="DOP853", events=hits_axis,
                    rtol=step_tol, atol=_atol(step_tol))
    if sol.status == -1:
        raise NumericalError(f"oracle shot from x0={x0} failed: {sol.message}")
    return math.atan(sol.y[1, -1])


def _tail_value(c, x):
    return c * np.exp(-0.25 * x * x) / (x * x)


def _tail_integral(c, x):
    # integral from x to infinity of c e^{-s^2/4}/s^2 ds
    x = np.asarray(x, dtype=float)
    return c * np.exp(-0.25 * x * x) * (1.0 / x - 0.5 * SQRT_PI * erfcx(0.5 * x))


def _invert_tail(c, value):
    """Solve c e^{-y^2/4}/y^2 = value for y (value small, y large) by Newton on the log"""
    value = np.asarray(value, dtype=float)
    target = np.log(c) - np.log(value)
    y = 2.0 * np.sqrt(np.maximum(target, 1.0))
    for _ in range(40):
        g = target - 0.25 * y * y - 2.0 * np.log(y)
        dg = -0.5 * y - 2.0 / y
        step = g / dg
        y = y - step
        if np.all(np.abs(step) < 1e-14 * y):
            break
    return y


@dataclass(frozen=True, eq=False)
class WedgeProfile:
    """
    Tabulated wedge profile W with its derivative and asymptotic tail

    Samples cover [x_min, x_max] and include both branches: the forward shot on
    [x0, x_max] and its reflection W^{-1} = W on [x_min, x0].
    """

    x: np.ndarray
    w: np.ndarray
    wprime: np.ndarray
    d: float
    symmetric_point: float
    tail_coefficient: float
    tolerance: float
    _w_spline: CubicHermiteSpline = field(init=False, repr=False)
    _wp_spline: CubicHermiteSpline = field(init=False, repr=False)
    _w_antiderivative: object = field(init=False, repr=False)
    _sigma_x0: float = field(init=False, repr=False)
    _total_area: float = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        w = np.asarray(self.w, dtype=float)
        wp = np.asarray(self.wprime, dtype=float)
        if x.ndim != 1 or x.size < 4 or not (x.size == w.size == wp.size):
            raise PreconditionError("wedge samples must be three equal-length 1-D arrays")
        if np.any(np.diff(x) <= 0):
            raise PreconditionError("wedge sample abscissae must be strictly increasing")
        if not (x[0] <= self.symmetric_point <= x[-1]):
            raise PreconditionError("symmetric point outside the sampled range")

        w_spline = CubicHermiteSpline(x, w, wp)
        wp_spline = CubicHermiteSpline(x, wp, second_derivative(x, w, wp))
        antiderivative = w_spline.antiderivative()
        x0 = float(self.symmetric_point)
        sigma_x0 = float(antiderivative(x[-1]) - antiderivative(x0) + _tail_integral(self.tail_coefficient, x[-1]))

        for name, value in (
            ("x", x), ("w", w), ("wprime", wp), ("_w_spline", w_spline), ("_wp_spline", wp_spline),
            ("_w_antiderivative", antiderivative), ("_sigma_x0", sigma_x0),
            ("_total_area", x0 * x0 + 2.0 * sigma_x0),
        ):
            object.__setattr__(self, name, value)

    @classmethod
    def from_forward(cls, fx, fw, fwp, tolerance):
        """Build a profile from the forward branch only, adding the reflected branch"""
        x0 = float(fx[0])
        d = math.sqrt(2.0) * x0
        rx = fw[::-1][:-1]
        rw = fx[::-1][:-1]
        rwp = 1.0 / fwp[::-1][:-1]
        return cls(
            x=np.concatenate([rx, fx]),
            w=np.concatenate([rw, fw]),
            wprime=np.concatenate([rwp, fwp]),
            d=d,
            symmetric_point=x0,
            tail_coefficient=2.0 * d * math.exp(0.25 * d * d),
            tolerance=float(tolerance),
        )

    @property
    def x_min(self):
        return float(self.x[0])

    @property
    def x_max(self):
        return float(self.x[-1])

    @property
    def samples(self):
        """(x, w, wprime) rows"""
        return np.column_stack([self.x, self.w, self.wprime])

    @property
    def total_area(self):
        """Integral of W over (0, inf): triangle at the symmetric point plus twice the tail"""
        return self._total_area

    def to_metadata(self):
        return {
            "d": self.d,
            "symmetric_point": self.symmetric_point,
            "tail_coefficient": self.tail_coefficient,
            "tolerance": self.tolerance,
        }


def solve_wedge(tol=None, x_max=None, bisect_tol=None, x_shoot=None, scan=None, n_samples=None):
    """
    Compute the wedge profile by shooting from the symmetric point

    Args:
        tol (float): ODE relative tolerance
        x_max (float): Splice point for the asymptotic tail
        bisect_tol (float): Final bracket width on x0
        x_shoot (float): Horizon of the bisection oracle
        scan (tuple): (min, max, points) coarse scan of x0 used to find the bracket
        n_samples (int): Forward samples

    Returns:
        WedgeProfile
    """
    cfg = load_settings()["wedge"]
    tol = cfg["tol"] if tol is None else tol
    x_max = cfg["x_max"] if x_max is None else x_max
    bisect_tol = cfg["bisect_tol"] if bisect_tol is None else bisect_tol
    x_shoot = max(cfg["x_shoot"] if x_shoot is None else x_shoot, x_max)
    n_samples = cfg["samples"] if n_samples is None else n_samples
    scan = (cfg["scan_min"], cfg["scan_max"], cfg["scan_points"]) if scan is None else scan
    if tol <= 0:
        raise PreconditionError(f"tol must be positive (got {tol})")

    lo, hi = bracket_symmetric_point(scan, x_shoot, tol)
    for _ in range(200):
        if hi - lo <= bisect_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if terminal_angle(mid, x_shoot, tol) < 0:
            lo = mid
        else:
            hi = mid
    x0 = 0.5 * (lo + hi)

    path = shoot_profile(x0, x_max, tol, n_samples=n_samples)
    profile = WedgeProfile.from_forward(path.forward_x, path.forward_w, path.forward_wp, tolerance=tol)
    print(f"[OK] Wedge profile: x0={x0:.12f}, d={profile.d:.12f}, area={profile.total_area:.12f}")
    return profile


def bracket_symmetric_point(scan, x_shoot, tol):
    """
    Coarse scan of the oracle over x0; exactly one sign change from - to + is required

    Returns:
        tuple: (lo, hi) with terminal_angle(lo) < 0 <= terminal_angle(hi)
    """
    x_lo, x_hi, points = scan
    grid = np.linspace(x_lo, x_hi, int(points))
    signs = np.array([terminal_angle(x, x_shoot, tol) >= 0 for x in grid])
    changes = np.flatnonzero(signs[1:] != signs[:-1])
    if changes.size == 0:
        raise BracketError(f"no sign change of the terminal angle for x0 in [{x_lo}, {x_hi}]")
    if changes.size > 1 or signs[0]:
        raise BracketError(f"terminal angle not monotone over the scan: signs {signs.astype(int).tolist()}")
    i = int(changes[0])
    return float(grid[i]), float(grid[i + 1])
