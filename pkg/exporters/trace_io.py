"""
Trace and wedge-profile persistence

A trace directory holds meta.json plus one t_<time>.csv (columns x,y) per snapshot.
A wedge file is a CSV with columns x,w,wprime and a JSON sidecar with the scalars.
Floats are written as decimal strings at the configured precision (15 digits).
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np

from solver.grid import FlowTrace, Grid, GridFunction
from solver.initial_data import initial_data_from_dict
from utils.config import format_decimal, load_settings
from utils.errors import CSFError, PreconditionError, TraceFormatError
from utils.file_loader import ensure_directory, load_csv_columns, load_json, save_csv, save_json
from wedge.diagnostics import first_integral_spread
from wedge.profile import WedgeProfile

META_FILE = "meta.json"
FORMAT_VERSION = 1
SCHEME_FLOATS = ("dt", "h", "L", "safety", "t_end", "snap_every", "rescaled_by")


def _digits():
    return int(load_settings()["output"]["precision"])


def snapshot_name(t, digits=15):
    return f"t_{format_decimal(t, digits)}.csv"


def write_trace(trace, directory):
    """
    Write a FlowTrace to a directory

    Returns:
        str: The directory
    """
    digits = _digits()
    ensure_directory(directory)
    entries = []
    for t, f in trace.snapshots:
        name = snapshot_name(t, digits)
        save_csv(zip(f.x, f.values), ["x", "y"], os.path.join(directory, name), digits=digits)
        entries.append({"t": format_decimal(t, digits), "file": name})
    scheme = {
        k: (format_decimal(v, digits) if isinstance(v, float) else v) for k, v in trace.scheme.items()
    }
    meta = {
        "format": FORMAT_VERSION,
        "grid": {"L": format_decimal(trace.grid.L, digits), "n": trace.grid.n},
        "initial": None if trace.initial is None else trace.initial.to_dict(),
        "scheme": scheme,
        "total_area_initial": format_decimal(trace.total_area_initial, digits),
        "snapshots": entries,
    }
    save_json(meta, os.path.join(directory, META_FILE), quiet=True)
    print(f"[OK] Trace with {len(entries)} snapshots written to {directory}")
    return str(directory)


def _read_initial(data, path):
    if data is None:
        return None
    try:
        return initial_data_from_dict(data)
    except (CSFError, KeyError, FileNotFoundError, ValueError) as e:
        print(f"[WARNING] Initial data descriptor in {path} not usable ({e}); refinement retry disabled")
        return None


def read_trace(directory):
    """
    Read a trace directory written by write_trace

    Raises:
        TraceFormatError: naming the offending file
    """
    directory = Path(directory)
    meta_path = directory / META_FILE
    if not meta_path.exists():
        raise TraceFormatError("missing trace metadata", meta_path)
    try:
        meta = load_json(meta_path)
        grid = Grid(L=float(meta["grid"]["L"]), n=int(meta["grid"]["n"]))
        entries = meta["snapshots"]
    except (KeyError, TypeError, ValueError) as e:
        raise TraceFormatError(f"malformed trace metadata ({e})", meta_path) from e

    nodes = grid.nodes
    snapshots = []
    for entry in entries:
        path = directory / entry["file"]
        try:
            cols = load_csv_columns(path, ["x", "y"])
        except FileNotFoundError as e:
            raise TraceFormatError("snapshot file missing", path) from e
        except ValueError as e:
            raise TraceFormatError(f"unreadable snapshot ({e})", path) from e
        if cols["x"].size != grid.n + 1:
            raise TraceFormatError(f"expected {grid.n + 1} nodes, found {cols['x'].size}", path)
        if not np.allclose(cols["x"], nodes, rtol=0.0, atol=1e-9 * grid.L):
            raise TraceFormatError("node positions do not match the grid in meta.json", path)
        try:
            snapshots.append((float(entry["t"]), GridFunction(grid, cols["y"])))
        except CSFError as e:
            raise TraceFormatError(str(e), path) from e

    scheme = dict(meta.get("scheme", {}))
    for key in SCHEME_FLOATS:
        if scheme.get(key) is not None:
            scheme[key] = float(scheme[key])
    try:
        trace = FlowTrace(
            initial=_read_initial(meta.get("initial"), meta_path),
            snapshots=snapshots,
            scheme=scheme,
            total_area_initial=float(meta.get("total_area_initial", 0.0)),
        )
    except PreconditionError as e:
        raise TraceFormatError(str(e), meta_path) from e
    print(f"[OK] Trace with {len(snapshots)} snapshots loaded from {directory}")
    return trace


def sidecar_path(path):
    return Path(path).with_suffix(".json")


def write_wedge(profile, path):
    """
    CSV x,w,wprime plus a JSON sidecar with d, symmetric point, tail coefficient, tolerance,
    area_check (|integral of W - pi/2|) and first_integral_spread
    """
    digits = _digits()
    save_csv(profile.samples.tolist(), ["x", "w", "wprime"], path, digits=digits)
    scalars = dict(profile.to_metadata())
    scalars["area_check"] = abs(profile.total_area - 0.5 * math.pi)
    scalars["first_integral_spread"] = first_integral_spread(profile)
    meta = {k: format_decimal(v, digits) for k, v in scalars.items()}
    save_json(meta, sidecar_path(path), quiet=True)
    print(f"[OK] Wedge profile written to {path}")
    return str(path)


def read_wedge(path):
    """Rebuild a WedgeProfile from write_wedge output"""
    path = Path(path)
    cols = load_csv_columns(path, ["x", "w", "wprime"])
    side = sidecar_path(path)
    if not side.exists():
        raise TraceFormatError("missing wedge metadata", side)
    meta = load_json(side)
    try:
        return WedgeProfile(
            x=cols["x"], w=cols["w"], wprime=cols["wprime"],
            d=float(meta["d"]),
            symmetric_point=float(meta["symmetric_point"]),
            tail_coefficient=float(meta["tail_coefficient"]),
            tolerance=float(meta["tolerance"]),
        )
    except KeyError as e:
        raise TraceFormatError(f"wedge metadata lacks {e}", side) from e
