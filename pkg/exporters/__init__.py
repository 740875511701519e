"""
Exporters Module

Persistence and presentation of traces and reports:
- Trace directories (meta.json + t_<time>.csv) and wedge profile files
- Plot-ready tidy CSV (snapshots, wedge overlay, estimate margins, experiment tables)
- HTML summary of estimate reports via Jinja2

Usage:
    from exporters import write_trace, read_trace, export_plot_data, export_html

    write_trace(trace, "out/trace")
    export_plot_data(read_trace("out/trace"), "snapshots", "out/plots")
"""

from .html_generator import export as export_html
from .multi_format_exporter import PlotDataExporter, export_plot_data
from .trace_io import read_trace, read_wedge, snapshot_name, write_trace, write_wedge

__all__ = [
    'export_html',
    'PlotDataExporter', 'export_plot_data',
    'read_trace', 'read_wedge', 'snapshot_name', 'write_trace', 'write_wedge',
]
