"""
Configuration Loading
Reads config/settings.yaml, applies the CSF_DATA_DIR override and serializes per-command run parameters
"""

import copy
import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

SETTINGS_FILE = Path(__file__).parent.parent / "config" / "settings.yaml"
DATA_DIR_ENV = "CSF_DATA_DIR"

DEFAULT_SETTINGS = {
    "wedge": {
        "tol": 1e-10,
        "bisect_tol": 1e-14,
        "x_max": 8.0,
        "x_shoot": 12.0,
        "scan_min": 0.2,
        "scan_max": 1.2,
        "scan_points": 21,
        "samples": 4001,
    },
    "solver": {
        "safety": 0.8,
        "boundary": "dirichlet0",
        "decay_tol": 1e-12,
    },
    "estimates": {
        "slack_floor": 1e-3,
        "slack_per_h": 5.0,
        "refine_retry": True,
    },
    "experiments": {
        "refine": 10,
        "jobs": 1,
    },
    "output": {
        "directory": "output",
        "precision": 15,
    },
}

_settings_cache = None


def _merge(defaults, overrides):
    merged = copy.deepcopy(defaults)
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_settings(path=None, reload=False):
    """
    Load settings from settings.yaml merged over the built-in defaults

    Args:
        path (str): Alternative settings file (optional)
        reload (bool): Ignore the cached copy

    Returns:
        dict: Nested settings dictionary
    """
    global _settings_cache
    if _settings_cache is not None and path is None and not reload:
        return _settings_cache

    config_path = Path(path) if path else SETTINGS_FILE
    overrides = {}
    if not YAML_AVAILABLE:
        print("[WARNING] PyYAML not available, using built-in defaults")
    elif config_path.exists():
        with open(config_path, "r", encoding="utf-8") as f:
            overrides = yaml.safe_load(f) or {}
    else:
        print(f"[WARNING] Config file not found at {config_path}, using built-in defaults")

    settings = _merge(DEFAULT_SETTINGS, overrides)
    env_dir = os.getenv(DATA_DIR_ENV)
    if env_dir:
        settings["output"]["directory"] = env_dir

    if path is None:
        _settings_cache = settings
    return settings


def get_data_dir():
    """Default output root (CSF_DATA_DIR wins over settings.yaml)"""
    env_dir = os.getenv(DATA_DIR_ENV)
    if env_dir:
        return Path(env_dir)
    return Path(load_settings()["output"]["directory"])


def format_decimal(value, digits=15):
    """Decimal string at the given number of significant digits"""
    return format(float(value), f".{digits}g")


# Parameter types per command: float, floats, int, ints, str, bool
COMMAND_SCHEMAS = {
    "wedge": {"tol": "float", "xmax": "float", "out": "str"},
    "flow": {
        "init": "str", "L": "float", "h": "float", "t_end": "float", "snap": "float",
        "boundary": "str", "safety": "float", "out": "str",
    },
    "analyze": {"trace": "str", "quantity": "str", "p": "float", "out": "str"},
    "verify": {
        "trace": "str", "wedge": "str", "estimates": "str", "slack": "float", "against": "str",
        "shift": "float", "x_shift": "float", "p": "float", "report": "str", "html": "str",
    },
    "experiment witch-hat": {
        "n": "ints", "times": "floats", "L": "float", "refine": "int", "jobs": "int", "wedge": "str", "out": "str",
    },
    "experiment l1": {
        "init": "str", "radii": "floats", "t_probe": "floats", "L": "float", "h": "float",
        "jobs": "int", "out": "str",
    },
    "experiment lp": {
        "p": "floats", "n": "ints", "times": "floats", "L": "float", "refine": "int",
        "jobs": "int", "wedge": "str", "out": "str",
    },
    "export": {
        "trace": "str", "report": "str", "kind": "str", "wedge": "str", "x_shift": "float",
        "out": "str",
    },
}


def _encode(kind, value, digits):
    if value is None:
        return None
    if kind == "float":
        return format_decimal(value, digits)
    if kind == "floats":
        return [format_decimal(v, digits) for v in value]
    if kind == "int":
        return int(value)
    if kind == "ints":
        return [int(v) for v in value]
    if kind == "bool":
        return bool(value)
    return str(value)


def _decode(kind, value):
    if value is None:
        return None
    if kind == "float":
        return float(value)
    if kind == "floats":
        return [float(v) for v in value]
    if kind == "int":
        return int(value)
    if kind == "ints":
        return [int(v) for v in value]
    if kind == "bool":
        return bool(value)
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameter set of one CLI command"""

    command: str
    params: dict = field(default_factory=dict)

    def to_dict(self, digits=15):
        schema = COMMAND_SCHEMAS.get(self.command, {})
        encoded = {}
        for key, value in sorted(self.params.items()):
            encoded[key] = _encode(schema.get(key, "str"), value, digits)
        return {"command": self.command, "params": encoded}

    @classmethod
    def from_dict(cls, data):
        command = data["command"]
        if command not in COMMAND_SCHEMAS:
            raise ValueError(f"Unknown command in run config: {command}")
        schema = COMMAND_SCHEMAS[command]
        params = {key: _decode(schema.get(key, "str"), value) for key, value in data.get("params", {}).items()}
        return cls(command=command, params=params)
