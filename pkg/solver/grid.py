"""
Grid, GridFunction and FlowTrace: the value types passed between solver, analysis and estimates
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from utils.errors import NumericalError, PreconditionError


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [-L, L] with n intervals"""

    L: float
    n: int

    def __post_init__(self):
        if not self.L > 0:
            raise PreconditionError(f"grid half-width L must be > 0 (got {self.L})")
        if int(self.n) != self.n or self.n < 16:
            raise PreconditionError(f"grid needs an integer n >= 16 intervals (got {self.n})")
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self):
        return 2.0 * self.L / self.n

    @property
    def nodes(self):
        # L (2i - n)/n keeps x_{n-i} = -x_i and x_{n/2} = 0 exact
        i = np.arange(self.n + 1, dtype=float)
        return self.L * (2.0 * i - self.n) / self.n

    @classmethod
    def from_spacing(cls, L, h):
        """Grid with spacing as close to h as an integer n allows"""
        if not h > 0:
            raise PreconditionError(f"grid spacing h must be > 0 (got {h})")
        return cls(L=L, n=max(16, int(round(2.0 * L / h))))

    def refined(self, factor=2):
        return Grid(L=self.L, n=self.n * factor)

    def to_dict(self):
        return {"L": self.L, "n": self.n, "h": self.h}


def aligned_grid(L, n_hat, refine=10):
    """
    Grid with h = 1/(refine * n_hat), nodes on 0 and +-1/n_hat

    L is rounded up to a multiple of 1/n_hat so the node set is symmetric and aligned.
    """
    if n_hat < 1 or refine < 1:
        raise PreconditionError("aligned_grid needs n_hat >= 1 and refine >= 1")
    L = math.ceil(L * n_hat - 1e-9) / n_hat
    return Grid(L=L, n=int(round(2 * L * n_hat)) * int(refine))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Heights sampled at the nodes of a grid"""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n + 1,):
            raise PreconditionError(f"expected {self.grid.n + 1} nodal values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericalError("grid function has non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.nodes

    def shifted(self, c):
        return GridFunction(self.grid, self.values + c)

    def scaled(self, c):
        return GridFunction(self.grid, self.values * c)


@dataclass(eq=False)
class FlowTrace:
    """Time-ordered snapshots of one run plus the metadata needed to reproduce it"""

    initial: object
    snapshots: list
    scheme: dict = field(default_factory=dict)
    total_area_initial: float = 0.0

    def __post_init__(self):
        if not self.snapshots:
            raise PreconditionError("a flow trace needs at least the initial snapshot")
        times = [t for t, _ in self.snapshots]
        if times[0] != 0.0:
            raise PreconditionError(f"first snapshot must be at t = 0 (got {times[0]})")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise PreconditionError("snapshot times must be strictly increasing")
        grid = self.snapshots[0][1].grid
        if any(f.grid != grid for _, f in self.snapshots):
            raise PreconditionError("all snapshots of a trace must share one grid")

    @property
    def grid(self):
        return self.snapshots[0][1].grid

    @property
    def times(self):
        return [t for t, _ in self.snapshots]

    @property
    def initial_snapshot(self):
        return self.snapshots[0][1]

    def at(self, t, atol=1e-12):
        """Snapshot recorded at time t"""
        for time, f in self.snapshots:
            if abs(time - t) <= atol * max(1.0, abs(t)):
                return f
        raise KeyError(f"no snapshot at t={t}")

    def positive_times(self):
        return [(t, f) for t, f in self.snapshots if t > 0]

    def rescaled(self, lam):
        """Parabolic rescaling y -> lam y(x/lam, t/lam^2), again a solution"""
        grid = Grid(L=self.grid.L * lam, n=self.grid.n)
        snapshots = [(t * lam * lam, GridFunction(grid, f.values * lam)) for t, f in self.snapshots]
        scheme = dict(self.scheme, h=grid.h, L=grid.L, rescaled_by=lam)
        return FlowTrace(self.initial, snapshots, scheme, self.total_area_initial * lam * lam)
