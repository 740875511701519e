"""
HTML Summary Generator
Renders estimate reports to a single HTML page using Jinja2 templates
"""

import os
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, Template, TemplateNotFound, select_autoescape

from experiments.report import ExperimentReport

TEMPLATE_DIR = Path(__file__).parent.parent / "templates"


def export(reports, output_path, template_name="summary.html.j2", title="Estimate Summary"):
    """
    Export estimate reports to an HTML summary

    Args:
        reports (list): EstimateReport objects (or one ExperimentReport)
        output_path (str): Output file path
        template_name (str): Template file name in templates/
        title (str): Page title

    Returns:
        str: Path to generated HTML file
    """
    try:
        conclusions = {}
        if isinstance(reports, ExperimentReport):
            conclusions = reports.conclusions
            title = f"{title}: {reports.name}"
            reports = reports.estimates

        env = Environment(
            loader=FileSystemLoader(str(TEMPLATE_DIR)),
            autoescape=select_autoescape(["html", "j2"]),
        )
        try:
            template = env.get_template(template_name)
        except TemplateNotFound:
            print(f"[WARNING] Template {template_name} not found in {TEMPLATE_DIR}, using the plain layout")
            template = Template(get_default_template(), autoescape=True)

        rows = [report_row(r) for r in reports]
        html_content = template.render(
            report_title=title,
            statistics=generate_statistics(rows),
            reports=rows,
            conclusions=conclusions,
        )

        if os.path.dirname(str(output_path)):
            os.makedirs(os.path.dirname(str(output_path)), exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(html_content)

        print(f"[OK] HTML summary generated: {output_path}")
        return str(output_path)

    except Exception as e:
        print(f"[ERROR] Failed to generate HTML summary: {str(e)}")
        raise


def report_row(report):
    worst = report.worst
    return {
        "name": report.name,
        "passed": report.passed,
        "status": get_status_class(report),
        "threshold_time": report.threshold_time,
        "slack": report.slack,
        "worst_t": None if worst is None else worst.t,
        "worst_x": None if worst is None else worst.arg_x,
        "worst_violation": None if worst is None else worst.max_violation,
        "worst_check": None if worst is None else worst.check,
        "notes": list(report.notes),
    }


def generate_statistics(rows):
    return {
        "total": len(rows),
        "passed": sum(1 for r in rows if r["passed"]),
        "failed": sum(1 for r in rows if not r["passed"]),
    }


def get_status_class(report):
    if not report.per_snapshot:
        return "skipped"
    return "pass" if report.passed else "fail"


def get_default_template():
    """Plain fallback used when the requested template is missing from templates/"""
    return """<!DOCTYPE html>
<html lang="en">
<head><meta charset="UTF-8"><title>{{ report_title }}</title></head>
<body>
    <h1>{{ report_title }}</h1>
    <p>{{ statistics.passed }} of {{ statistics.total }} estimates passed, {{ statistics.failed }} failed.</p>
    <ul>
    {% for flag, ok in conclusions.items() %}<li>{{ flag }}: {{ 'yes' if ok else 'no' }}</li>
    {% endfor %}{% for r in reports %}<li>{{ r.name }}: {{ r.status }}</li>
    {% endfor %}
    </ul>
</body>
</html>
"""
