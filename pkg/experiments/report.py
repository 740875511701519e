"""
ExperimentReport: parameters, CSV-style tables and conclusion flags of one experiment
"""

from __future__ import annotations

from dataclasses import dataclass, field

from estimates.report import EstimateReport


@dataclass
class ExperimentReport:
    name: str
    parameters: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    conclusions: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    estimates: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.conclusions.values()) and all(r.passed for r in self.estimates)

    def add_table(self, name, columns, rows):
        """Store a table as a column list plus row lists; every row must match the columns"""
        columns = list(columns)
        rows = [list(row) for row in rows]
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"table {name}: row {row} does not match columns {columns}")
        self.tables[name] = {"columns": columns, "rows": rows}

    def table(self, name):
        """Rows of a table as dicts"""
        data = self.tables[name]
        return [dict(zip(data["columns"], row)) for row in data["rows"]]

    def to_dict(self):
        return {
            "name": self.name,
            "pass": self.passed,
            "parameters": dict(self.parameters),
            "conclusions": dict(self.conclusions),
            "metrics": dict(self.metrics),
            "notes": list(self.notes),
            "tables": {k: {"columns": v["columns"], "rows": v["rows"]} for k, v in self.tables.items()},
            "estimates": [r.to_dict() for r in self.estimates],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            name=data["name"],
            parameters=dict(data.get("parameters", {})),
            tables=dict(data.get("tables", {})),
            conclusions=dict(data.get("conclusions", {})),
            metrics=dict(data.get("metrics", {})),
            notes=list(data.get("notes", [])),
            estimates=[EstimateReport.from_dict(r) for r in data.get("estimates", [])],
        )

    def summary_lines(self):
        lines = []
        for flag, ok in self.conclusions.items():
            lines.append(f"{'[OK]' if ok else '[FAIL]'} {self.name}: {flag}")
        for report in self.estimates:
            lines.append(f"{'[OK]' if report.passed else '[FAIL]'} {self.name}: {report.name}")
        return lines
