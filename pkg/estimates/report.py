"""
EstimateReport: outcome of checking one inequality over a flow trace
"""

from __future__ import annotations

from dataclasses import dataclass, field

from utils.config import load_settings


@dataclass
class SnapshotCheck:
    """Worst signed violation (lhs - rhs) of one check on one snapshot; None when no node applies"""

    t: float
    max_violation: float = None
    arg_x: float = None
    check: str = "main"
    applies: bool = True
    arg_s: float = None

    @property
    def margin(self):
        return None if self.max_violation is None else -self.max_violation

    def to_dict(self):
        out = {
            "t": self.t,
            "check": self.check,
            "applies": self.applies,
            "max_violation": self.max_violation,
            "margin": self.margin,
            "arg_x": self.arg_x,
        }
        if self.arg_s is not None:
            out["arg_s"] = self.arg_s
        return out

    @classmethod
    def from_dict(cls, data):
        return cls(
            t=float(data["t"]),
            max_violation=None if data.get("max_violation") is None else float(data["max_violation"]),
            arg_x=None if data.get("arg_x") is None else float(data["arg_x"]),
            check=data.get("check", "main"),
            applies=bool(data.get("applies", True)),
            arg_s=None if data.get("arg_s") is None else float(data["arg_s"]),
        )


@dataclass
class EstimateReport:
    name: str
    threshold_time: float = None
    per_snapshot: list = field(default_factory=list)
    slack: float = 1e-3
    shift: float = None
    notes: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def _applicable(self):
        return [c for c in self.per_snapshot if c.applies and c.max_violation is not None]

    @property
    def passed(self):
        return all(c.max_violation <= self.slack for c in self._applicable())

    @property
    def worst(self):
        checks = self._applicable()
        if not checks:
            return None
        return max(checks, key=lambda c: c.max_violation)

    def add(self, check):
        self.per_snapshot.append(check)
        return check

    def checks(self, label):
        return [c for c in self.per_snapshot if c.check == label]

    def to_dict(self):
        worst = self.worst
        return {
            "name": self.name,
            "threshold_time": self.threshold_time,
            "pass": self.passed,
            "slack": self.slack,
            "shift": self.shift,
            "worst": None if worst is None else {
                "t": worst.t, "x": worst.arg_x, "violation": worst.max_violation, "check": worst.check,
            },
            "notes": list(self.notes),
            "extras": dict(self.extras),
            "per_snapshot": [c.to_dict() for c in self.per_snapshot],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            name=data["name"],
            threshold_time=data.get("threshold_time"),
            per_snapshot=[SnapshotCheck.from_dict(c) for c in data.get("per_snapshot", [])],
            slack=float(data.get("slack", 1e-3)),
            shift=data.get("shift"),
            notes=list(data.get("notes", [])),
            extras=dict(data.get("extras", {})),
        )


def default_slack(h):
    """max(floor, per_h * h) from the estimates settings"""
    cfg = load_settings()["estimates"]
    return max(float(cfg["slack_floor"]), float(cfg["slack_per_h"]) * h)


def worst_over_nodes(report, t, excess, x, mask=None, check="main"):
    """Record the largest entry of excess (lhs - rhs) over the masked nodes"""
    if mask is not None:
        excess = excess[mask]
        x = x[mask]
    if excess.size == 0:
        return report.add(SnapshotCheck(t=t, check=check, applies=False))
    i = int(excess.argmax())
    return report.add(SnapshotCheck(t=t, max_violation=float(excess[i]), arg_x=float(x[i]), check=check))
