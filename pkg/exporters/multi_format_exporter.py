"""
Plot-Data Export Module
Writes tidy CSV files (one row per (t, x), per estimate snapshot or per table row)
for any external plotting tool
"""

import os

import numpy as np

from experiments.report import ExperimentReport
from utils.config import load_settings
from utils.errors import PreconditionError
from utils.file_loader import ensure_directory, save_csv
from wedge.areas import scaled_wedge


class PlotDataExporter:
    """Export traces and reports as plot-ready CSV"""

    def __init__(self, digits=None):
        self.digits = int(load_settings()["output"]["precision"] if digits is None else digits)
        self.supported_kinds = ['snapshots', 'wedge-overlay', 'estimate-margins', 'experiment-table']

    def export(self, source, kind, output_dir, wedge=None, x_shift=0.0):
        """
        Export source to CSV files of the given kind

        Args:
            source: FlowTrace, list of EstimateReport, or ExperimentReport
            kind (str): One of supported_kinds
            output_dir (str): Directory for the CSV files
            wedge (WedgeProfile): Needed by wedge-overlay
            x_shift (float): Shift of the wedge barrier for wedge-overlay

        Returns:
            list: Paths of written files
        """
        ensure_directory(output_dir)

        if kind == 'snapshots':
            paths = [self.export_snapshots(source, output_dir)]
        elif kind == 'wedge-overlay':
            paths = [self.export_wedge_overlay(source, output_dir, wedge, x_shift)]
        elif kind == 'estimate-margins':
            paths = [self.export_estimate_margins(source, output_dir)]
        elif kind == 'experiment-table':
            paths = self.export_experiment_tables(source, output_dir)
        else:
            raise ValueError(f"Unsupported kind: {kind}")

        for path in paths:
            print(f"[OK] {kind} export completed: {path}")
        return paths

    def export_snapshots(self, trace, output_dir):
        """Columns t,x,y"""
        rows = []
        for t, f in trace.snapshots:
            rows.extend((t, x, y) for x, y in zip(f.x, f.values))
        return save_csv(rows, ['t', 'x', 'y'], os.path.join(output_dir, 'snapshots.csv'), self.digits)

    def export_wedge_overlay(self, trace, output_dir, wedge, x_shift=0.0):
        """Columns t,x,y,wedge_bound; the bound is W(x - x_shift, t), empty where undefined"""
        if wedge is None:
            raise PreconditionError("wedge-overlay export needs a wedge profile")
        rows = []
        for t, f in trace.snapshots:
            x = f.x
            bound = np.full(x.shape, np.nan)
            mask = x > x_shift
            if t > 0 and np.any(mask):
                bound[mask] = scaled_wedge(wedge, x[mask] - x_shift, t)
            for xi, yi, bi in zip(x, f.values, bound):
                rows.append((t, xi, yi, '' if np.isnan(bi) else bi))
        return save_csv(rows, ['t', 'x', 'y', 'wedge_bound'], os.path.join(output_dir, 'wedge_overlay.csv'), self.digits)

    def export_estimate_margins(self, reports, output_dir):
        """Columns estimate,t,check,margin over the applicable snapshot checks"""
        if isinstance(reports, ExperimentReport):
            reports = reports.estimates
        rows = []
        for report in reports:
            for check in report.per_snapshot:
                if check.applies and check.margin is not None:
                    rows.append((report.name, check.t, check.check, check.margin))
        return save_csv(rows, ['estimate', 't', 'check', 'margin'], os.path.join(output_dir, 'estimate_margins.csv'), self.digits)

    def export_experiment_tables(self, report, output_dir):
        """One CSV per table of an ExperimentReport, named <experiment>_<table>.csv"""
        if not isinstance(report, ExperimentReport):
            raise PreconditionError("experiment-table export needs an experiment report")
        paths = []
        for name, table in report.tables.items():
            rows = [['' if v is None else v for v in row] for row in table['rows']]
            path = os.path.join(output_dir, f"{report.name}_{name}.csv")
            paths.append(save_csv(rows, table['columns'], path, self.digits))
        return paths


def export_plot_data(source, kind, output_dir, wedge=None, x_shift=0.0):
    """Convenience wrapper around PlotDataExporter.export"""
    return PlotDataExporter().export(source, kind, output_dir, wedge=wedge, x_shift=x_shift)
