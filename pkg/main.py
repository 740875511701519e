#!/usr/bin/env python3
"""
csf-lab - Main CLI Entry Point
Numerical lab for graphical curve shortening flow: wedge profile, solver, estimate checks
and experiments

Exit codes: 0 pass, 1 estimate or experiment check failed, 2 usage or input error,
3 numerical failure
"""

import sys
from pathlib import Path

import click

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from analysis import accumulated_area, gradient, harnack_quantity, norms
from estimates import (
    NEEDS_WEDGE, EstimateReport, parse_estimates, retry_refined, suite_passed, summarize, verify_trace,
)
from experiments import ExperimentReport, lp_sweep, run_delta_experiment, run_l1_pipeline
from exporters import PlotDataExporter, export_html, read_trace, read_wedge, write_trace, write_wedge
from solver import BOUNDARIES, Grid, aligned_grid, initial_data_from_dict, run
from utils.config import RunConfig, get_data_dir, load_settings
from utils.errors import NumericalError, PreconditionError, TraceFormatError
from utils.file_loader import load_json, save_csv, save_json
from wedge import solve_wedge, wedge_diagnostics

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

# never written into reports, so identical inputs give identical files
OUTPUT_PARAMS = ("out", "report", "html")


class NumberList(click.ParamType):
    """Comma-separated numbers, e.g. 10,20,40"""

    def __init__(self, kind=float):
        self.kind = kind
        self.name = "ints" if kind is int else "floats"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return [self.kind(v) for v in value]
        try:
            values = [self.kind(v) for v in str(value).split(",") if v.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of {self.name}", param, ctx)
        if not values:
            self.fail("empty list", param, ctx)
        return values


POSITIVE = click.FloatRange(min=0.0, min_open=True)
SAFETY = click.FloatRange(min=0.0, max=1.0, min_open=True, max_open=True)


def _default_out(name):
    return str(get_data_dir() / name)


def _run_config(command, params):
    return RunConfig(command, {k: v for k, v in params.items() if v is not None})


def _config_record(config):
    data = config.to_dict()
    data["params"] = {k: v for k, v in data["params"].items() if k not in OUTPUT_PARAMS}
    return data


def _load_wedge(path):
    if path:
        return read_wedge(path)
    click.echo("[RUN] No --wedge given, solving the wedge profile")
    return solve_wedge()


@click.group()
@click.version_option(version="1.0.0")
def cli():
    """csf-lab - graphical curve shortening flow lab"""
    pass


@cli.command()
@click.option('--tol', type=POSITIVE, help='ODE relative tolerance (default from settings)')
@click.option('--xmax', type=POSITIVE, help='Splice point for the asymptotic tail')
@click.option('--out', '-o', help='Output CSV (x,w,wprime) with JSON sidecar')
def wedge(tol, xmax, out):
    """Solve the right-angled wedge profile and write it with its diagnostics"""
    out = out or _default_out("wedge.csv")
    click.echo("[RUN] Shooting for the wedge profile")
    profile = solve_wedge(tol=tol, x_max=xmax)
    write_wedge(profile, out)

    diagnostics = wedge_diagnostics(profile)
    save_json(diagnostics, str(Path(out).with_name(Path(out).stem + "_diagnostics.json")))
    for key, value in diagnostics.items():
        if isinstance(value, float):
            click.echo(f"  {key}: {value:.6e}")
        else:
            click.echo(f"  {key}: {value}")
    return EXIT_OK


@cli.command()
@click.option('--init', '-i', required=True, help='Initial data JSON descriptor')
@click.option('--L', 'L', type=POSITIVE, default=20.0, show_default=True, help='Half-width of [-L, L]')
@click.option('--h', type=POSITIVE, default=0.01, show_default=True, help='Grid spacing')
@click.option('--t-end', 't_end', type=POSITIVE, required=True, help='Final time')
@click.option('--snap', type=POSITIVE, help='Snapshot spacing')
@click.option('--boundary', type=click.Choice(BOUNDARIES), help='Boundary condition')
@click.option('--safety', type=SAFETY, help='Fraction of the stability limit h^2/2')
@click.option('--out', '-o', help='Output trace directory')
def flow(init, L, h, t_end, snap, boundary, safety, out):
    """Flow initial data and write a trace directory"""
    out = out or _default_out("trace")
    descriptor = initial_data_from_dict(load_json(init))
    grid = Grid.from_spacing(L, h)
    click.echo(f"[RUN] Flowing {descriptor.type} on n={grid.n}, h={grid.h:g} to t={t_end:g}")
    trace = run(descriptor, grid, t_end, snap_every=snap, boundary=boundary, safety=safety)
    write_trace(trace, out)
    return EXIT_OK


@cli.command()
@click.option('--trace', '-t', required=True, help='Trace directory')
@click.option('--quantity', '-q', required=True,
              type=click.Choice(['area', 'harnack', 'gradient', 'norms']), help='Quantity to tabulate')
@click.option('--p', type=click.FloatRange(min=1.0, min_open=True), help='Exponent for the Lp norm')
@click.option('--out', '-o', help='Output CSV')
def analyze(trace, quantity, p, out):
    """Tabulate a derived quantity over every snapshot"""
    out = out or _default_out(f"{quantity}.csv")
    data = read_trace(trace)
    digits = int(load_settings()["output"]["precision"])

    if quantity == 'norms':
        fields = ['t', 'l1', 'sup', 'lip'] + (['lp'] if p else [])
        rows = []
        for t, f in data.snapshots:
            values = norms(f, p)
            rows.append([t] + [values[k] for k in fields[1:]])
    else:
        fields = ['t', 'x', quantity]
        rows = []
        for t, f in data.snapshots:
            if quantity == 'area':
                values = accumulated_area(f).values
            elif quantity == 'gradient':
                values = gradient(f).values
            else:
                values = harnack_quantity(f, t).values
            rows.extend([t, x, v] for x, v in zip(f.x, values))
    save_csv(rows, fields, out, digits)
    click.echo(f"[OK] {quantity} table written to {out}")
    return EXIT_OK


@cli.command()
@click.option('--trace', '-t', required=True, help='Trace directory')
@click.option('--wedge', '-w', help='Wedge profile CSV (solved when omitted and needed)')
@click.option('--estimates', '-e', default='all', show_default=True, help="'all' or comma list")
@click.option('--slack', type=POSITIVE, help='Fixed slack (default max(1e-3, 5h))')
@click.option('--shift', type=float, help='Shift m for height-controls-gradient (y + m > 0)')
@click.option('--x-shift', 'x_shift', type=float, help='Support edge for the wedge barrier')
@click.option('--p', type=click.FloatRange(min=1.0, min_open=True), help='Exponent for Lp smoothing')
@click.option('--against', help='Second trace directory for separation and comparison')
@click.option('--report', '-r', help='Output report JSON')
@click.option('--html', help='Also write an HTML summary')
def verify(trace, wedge, estimates, slack, shift, x_shift, p, against, report, html):
    """Check the estimates on a trace and write a report"""
    config = _run_config("verify", click.get_current_context().params)
    report = report or _default_out("report.json")
    names = parse_estimates(estimates)
    data = read_trace(trace)
    profile = _load_wedge(wedge) if NEEDS_WEDGE.intersection(names) else None
    other = read_trace(against) if against else None
    options = {"shift": shift, "x_shift": x_shift, "p": p}

    reports = verify_trace(data, names, wedge=profile, slack=slack, against=other,
                           strict=estimates != 'all', **options)
    if load_settings()["estimates"]["refine_retry"]:
        if data.initial is None:
            click.echo("[WARNING] Trace has no initial data descriptor, skipping refinement retry")
        else:
            reports = retry_refined(data, reports, wedge=profile, slack=slack, **options)

    for line in summarize(reports):
        click.echo(line)
    passed = suite_passed(reports)
    save_json({"pass": passed, "config": _config_record(config), "reports": reports}, report)
    if html:
        export_html(reports, html)
    return EXIT_OK if passed else EXIT_FAILED


@cli.group()
def experiment():
    """End-to-end experiments: witch-hat, l1, lp"""
    pass


def _finish_experiment(result, config, out):
    data = result.to_dict()
    data["config"] = _config_record(config)
    save_json(data, out)
    for line in result.summary_lines():
        click.echo(line)
    for key, value in result.metrics.items():
        if not isinstance(value, (dict, list)):
            click.echo(f"  {key}: {value}")
    return EXIT_OK if result.passed else EXIT_FAILED


@experiment.command('witch-hat')
@click.option('--n', 'n', type=NumberList(int), default='10,20,40', show_default=True, help='Hat parameters')
@click.option('--times', type=NumberList(float), default='0.1,0.2,0.3,0.5,1.0', show_default=True, help='Probe times')
@click.option('--L', 'L', type=POSITIVE, default=8.0, show_default=True, help='Half-width of [-L, L]')
@click.option('--refine', type=click.IntRange(min=1), help='Nodes per 1/max(n) (default from settings)')
@click.option('--jobs', '-j', type=click.IntRange(min=1), help='Worker processes')
@click.option('--wedge', '-w', help='Wedge profile CSV (solved when omitted)')
@click.option('--out', '-o', help='Output report JSON')
def witch_hat_command(n, times, L, refine, jobs, wedge, out):
    """Witch-hat family approaching a delta function"""
    config = _run_config("experiment witch-hat", click.get_current_context().params)
    out = out or _default_out("witch_hat_report.json")
    refine = refine or int(load_settings()["experiments"]["refine"])
    grid = aligned_grid(L, max(n), refine)
    profile = _load_wedge(wedge)
    click.echo(f"[RUN] Witch hats n={n} on n={grid.n}, h={grid.h:g}")
    result = run_delta_experiment(n, grid, times, wedge=profile, jobs=jobs)
    return _finish_experiment(result, config, out)


@experiment.command('l1')
@click.option('--init', '-i', required=True, help='Initial data JSON descriptor')
@click.option('--radii', type=NumberList(float), default='0.1,0.05,0.025', show_default=True, help='Mollification radii')
@click.option('--t-probe', 't_probe', type=NumberList(float), default='0.01,0.05,0.1', show_default=True, help='Probe times')
@click.option('--L', 'L', type=POSITIVE, default=8.0, show_default=True, help='Half-width of [-L, L]')
@click.option('--h', type=POSITIVE, default=0.005, show_default=True, help='Grid spacing')
@click.option('--jobs', '-j', type=click.IntRange(min=1), help='Worker processes')
@click.option('--out', '-o', help='Output report JSON')
def l1_command(init, radii, t_probe, L, h, jobs, out):
    """Mollification pipeline for L1 initial data"""
    config = _run_config("experiment l1", click.get_current_context().params)
    out = out or _default_out("l1_report.json")
    descriptor = initial_data_from_dict(load_json(init))
    grid = Grid.from_spacing(L, h)
    click.echo(f"[RUN] Mollifying {descriptor.type} at radii {radii}")
    result = run_l1_pipeline(descriptor, radii, grid, t_probe, jobs=jobs)
    return _finish_experiment(result, config, out)


@experiment.command('lp')
@click.option('--p', type=NumberList(float), default='1.5,2,3', show_default=True, help='Exponents p > 1')
@click.option('--n', 'n', type=NumberList(int), default='10,20,40', show_default=True, help='Hat parameters')
@click.option('--times', type=NumberList(float), default='0.05,0.1,0.2,0.3,0.5,1.0', show_default=True, help='Probe times')
@click.option('--L', 'L', type=POSITIVE, default=8.0, show_default=True, help='Half-width of [-L, L]')
@click.option('--refine', type=click.IntRange(min=1), help='Nodes per 1/max(n) (default from settings)')
@click.option('--jobs', '-j', type=click.IntRange(min=1), help='Worker processes')
@click.option('--wedge', '-w', help='Wedge profile CSV (solved when omitted)')
@click.option('--out', '-o', help='Output report JSON')
def lp_command(p, n, times, L, refine, jobs, wedge, out):
    """Lp smoothing sweep over the witch-hat family"""
    config = _run_config("experiment lp", click.get_current_context().params)
    out = out or _default_out("lp_report.json")
    refine = refine or int(load_settings()["experiments"]["refine"])
    grid = aligned_grid(L, max(n), refine)
    profile = _load_wedge(wedge)
    result = lp_sweep(p, n, grid, times, wedge=profile, jobs=jobs)
    return _finish_experiment(result, config, out)


def _load_report(path):
    data = load_json(path)
    if "tables" in data:
        return ExperimentReport.from_dict(data)
    if "reports" in data:
        return [EstimateReport.from_dict(r) for r in data["reports"]]
    return [EstimateReport.from_dict(data)]


@cli.command()
@click.option('--trace', '-t', help='Trace directory')
@click.option('--report', '-r', help='Report JSON (estimate or experiment)')
@click.option('--kind', '-k', required=True,
              type=click.Choice(['snapshots', 'wedge-overlay', 'estimate-margins', 'experiment-table']),
              help='Plot-data kind')
@click.option('--wedge', '-w', help='Wedge profile CSV for wedge-overlay')
@click.option('--x-shift', 'x_shift', type=float, default=0.0, show_default=True, help='Wedge barrier shift')
@click.option('--out', '-o', help='Output directory')
def export(trace, report, kind, wedge, x_shift, out):
    """Export plot-ready CSV from a trace or a report"""
    out = out or _default_out("plots")
    if kind in ('snapshots', 'wedge-overlay'):
        if not trace:
            raise click.UsageError(f"--trace is required for kind {kind}")
        source = read_trace(trace)
    else:
        if not report:
            raise click.UsageError(f"--report is required for kind {kind}")
        source = _load_report(report)
    profile = read_wedge(wedge) if kind == 'wedge-overlay' and wedge else None
    if kind == 'wedge-overlay' and profile is None:
        profile = _load_wedge(None)
    PlotDataExporter().export(source, kind, out, wedge=profile, x_shift=x_shift)
    return EXIT_OK


def _walk(argv):
    """Resolve the command path of argv; returns (command, path, remaining args)"""
    args = list(argv)
    command, path = cli, []
    while isinstance(command, click.Group):
        if not args:
            raise click.UsageError(f"Missing command for '{' '.join(['csf'] + path)}'")
        name = args.pop(0)
        sub = command.get_command(click.Context(command), name)
        if sub is None:
            raise click.UsageError(f"No such command '{name}'")
        command = sub
        path.append(name)
    return command, path, args


def parse_cli(argv):
    """
    Parse and validate a command line without running it

    Args:
        argv (list): Arguments after the program name, e.g. ["wedge", "--tol", "1e-10"]

    Returns:
        RunConfig: command path and validated parameters

    Raises:
        click.UsageError: unknown flag or out-of-range value, naming the flag
    """
    command, path, args = _walk(argv)
    ctx = command.make_context(" ".join(["csf"] + path), args)
    return _run_config(" ".join(path), ctx.params)


def main(argv=None):
    """Run the CLI and map outcomes to exit codes"""
    try:
        result = cli.main(args=argv, prog_name="csf", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("[ERROR] Aborted", err=True)
        return EXIT_FAILED
    except (PreconditionError, TraceFormatError, FileNotFoundError) as e:
        click.echo(f"[ERROR] {str(e)}", err=True)
        return EXIT_USAGE
    except NumericalError as e:
        click.echo(f"[ERROR] Numerical failure: {str(e)}", err=True)
        return EXIT_NUMERICAL
    except Exception as e:
        click.echo(f"[ERROR] Unexpected error: {type(e).__name__}: {str(e)}", err=True)
        return EXIT_NUMERICAL
    return result if isinstance(result, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
