"""
Initial data descriptors

Each descriptor is a small immutable value with a JSON form:
    {"type": "witch_hat", "n": 10}
    {"type": "piecewise_linear", "xs": [...], "ys": [...]}
    {"type": "samples", "path": "file.csv"}            (or inline "xs"/"ys")
    {"type": "mollified", "base": {...}, "radius": r}
    {"type": "constant", "value": c}
    {"type": "truncated", "base": {...}, "radius": R}
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from solver.grid import GridFunction
from utils.errors import PreconditionError
from utils.file_loader import load_csv_columns

KERNEL_NODES = 201


class InitialData:
    """Base class: vectorized pointwise evaluation plus a JSON form"""

    type = "abstract"

    def evaluate(self, x):
        raise NotImplementedError

    def support(self):
        """(lo, hi) outside of which the data vanish, or None"""
        return None

    def breakpoints(self):
        return ()

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class WitchHat(InitialData):
    """n(1 - n|x|) on |x| < 1/n, zero elsewhere; unit area, peak n"""

    n: int
    type = "witch_hat"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise PreconditionError(f"witch hat needs an integer n >= 1 (got {self.n})")

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return self.n * np.clip(1.0 - self.n * np.abs(x), 0.0, None)

    def support(self):
        return (-1.0 / self.n, 1.0 / self.n)

    def breakpoints(self):
        return (-1.0 / self.n, 0.0, 1.0 / self.n)

    @property
    def threshold_time(self):
        return 1.0 / np.pi

    def to_dict(self):
        return {"type": self.type, "n": int(self.n)}


@dataclass(frozen=True)
class PiecewiseLinear(InitialData):
    """Linear interpolation of a breakpoint table, extended by zero"""

    xs: tuple
    ys: tuple
    type = "piecewise_linear"

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        ys = tuple(float(v) for v in self.ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise PreconditionError("piecewise-linear table needs matching xs/ys with at least two points")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise PreconditionError("piecewise-linear breakpoints must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def evaluate(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys, left=0.0, right=0.0)

    def support(self):
        return (self.xs[0], self.xs[-1])

    def breakpoints(self):
        return self.xs

    def covers(self, L):
        return self.xs[0] <= -L and self.xs[-1] >= L

    def to_dict(self):
        return {"type": self.type, "xs": list(self.xs), "ys": list(self.ys)}


@dataclass(frozen=True)
class SampledFunction(PiecewiseLinear):
    """Table read from a CSV file with columns x,y (or given inline)"""

    path: str = None
    type = "samples"

    @classmethod
    def from_csv(cls, path):
        cols = load_csv_columns(path, ["x", "y"])
        return cls(xs=tuple(cols["x"]), ys=tuple(cols["y"]), path=str(path))

    def to_dict(self):
        if self.path:
            return {"type": self.type, "path": self.path}
        return {"type": self.type, "xs": list(self.xs), "ys": list(self.ys)}


@dataclass(frozen=True)
class Constant(InitialData):
    value: float = 0.0
    type = "constant"

    def evaluate(self, x):
        return np.full(np.shape(x), float(self.value))

    def support(self):
        return None if self.value != 0 else (0.0, 0.0)

    def to_dict(self):
        return {"type": self.type, "value": float(self.value)}


def bump_kernel(radius, nodes=KERNEL_NODES):
    """
    Quadrature nodes and weights of the unit-mass bump exp(-1/(1 - (s/r)^2)) on (-r, r)

    Weights are normalized to sum to one, so constants are reproduced exactly.
    """
    u = (np.arange(nodes) + 0.5) / nodes * 2.0 - 1.0
    weights = np.exp(-1.0 / (1.0 - u * u))
    weights /= weights.sum()
    return radius * u, weights


@dataclass(frozen=True)
class Mollified(InitialData):
    """Convolution of a base descriptor with the unit-mass bump of the given radius"""

    base: InitialData
    radius: float
    type = "mollified"

    def __post_init__(self):
        if not self.radius > 0:
            raise PreconditionError(f"mollification radius must be > 0 (got {self.radius})")

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        shifts, weights = bump_kernel(self.radius)
        flat = x.reshape(-1)
        out = np.zeros_like(flat)
        # chunked to bound the (points x nodes) temporary
        for start in range(0, flat.size, 4096):
            chunk = flat[start:start + 4096]
            out[start:start + 4096] = self.base.evaluate(chunk[:, None] - shifts[None, :]) @ weights
        return out.reshape(x.shape)

    def support(self):
        base = self.base.support()
        if base is None:
            return None
        return (base[0] - self.radius, base[1] + self.radius)

    def to_table(self, spacing=None):
        """Dense breakpoint table of the mollified function"""
        support = self.support()
        if support is None:
            raise PreconditionError("mollified data without compact support has no finite table")
        spacing = self.radius / 20.0 if spacing is None else spacing
        xs = np.arange(support[0], support[1] + 0.5 * spacing, spacing)
        return PiecewiseLinear(xs=tuple(xs), ys=tuple(self.evaluate(xs)))

    def to_dict(self):
        return {"type": self.type, "base": self.base.to_dict(), "radius": float(self.radius)}


def smooth_cutoff(s):
    """1 for s <= 0, 0 for s >= 1, smooth in between"""
    s = np.asarray(s, dtype=float)
    a = np.where(1.0 - s > 0, np.exp(-1.0 / np.maximum(1.0 - s, 1e-300)), 0.0)
    b = np.where(s > 0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
    return a / (a + b)


@dataclass(frozen=True)
class Truncated(InitialData):
    """base(x) * phi(|x| - R): compactly supported approximation of L1 data"""

    base: InitialData
    radius: float
    type = "truncated"

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return self.base.evaluate(x) * smooth_cutoff(np.abs(x) - self.radius)

    def support(self):
        return (-self.radius - 1.0, self.radius + 1.0)

    def to_dict(self):
        return {"type": self.type, "base": self.base.to_dict(), "radius": float(self.radius)}


def initial_data_from_dict(data):
    """
    Build a descriptor from its JSON form

    Args:
        data (dict): Descriptor with a "type" key

    Returns:
        InitialData
    """
    kind = data.get("type")
    if kind == "witch_hat":
        return WitchHat(n=int(data["n"]))
    if kind == "piecewise_linear":
        return PiecewiseLinear(xs=data["xs"], ys=data["ys"])
    if kind == "samples":
        if data.get("path"):
            return SampledFunction.from_csv(data["path"])
        return SampledFunction(xs=data["xs"], ys=data["ys"])
    if kind == "mollified":
        return Mollified(base=initial_data_from_dict(data["base"]), radius=float(data["radius"]))
    if kind == "constant":
        return Constant(value=float(data.get("value", 0.0)))
    if kind == "truncated":
        return Truncated(base=initial_data_from_dict(data["base"]), radius=float(data["radius"]))
    raise PreconditionError(f"Unsupported initial data type: {kind}")


def sample_initial(init, grid):
    """
    Evaluate a descriptor at the grid nodes

    Witch hats give exact nodal values; tables are interpolated linearly and, when they do
    not cover [-L, L], extended by zero with a warning.
    """
    if isinstance(init, PiecewiseLinear) and not init.covers(grid.L):
        print(f"[WARNING] {init.type} table covers [{init.xs[0]:g}, {init.xs[-1]:g}], "
              f"extended by zero to [{-grid.L:g}, {grid.L:g}]")
    return GridFunction(grid, init.evaluate(grid.nodes))
