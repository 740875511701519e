"""
File Loading and Saving Utilities
Handles JSON and CSV persistence for traces, profiles and reports
"""

import csv
import json
import math
import os

import numpy as np


def _to_builtin(obj):
    """json.dump fallback for numpy scalars and arrays"""
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def _clean_floats(obj):
    # JSON has no inf/nan
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _clean_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean_floats(v) for v in obj]
    return obj


def ensure_directory(path):
    """Create a directory (and parents) if needed and return it"""
    os.makedirs(path, exist_ok=True)
    return path


def save_json(data, file_path, pretty=True, quiet=False):
    """
    Save data to JSON file with proper formatting

    Args:
        data: Data to save (dict, list, dataclass with to_dict, ...)
        file_path (str): Path to save the JSON file
        pretty (bool): Whether to format JSON with indentation
        quiet (bool): Suppress the [OK] line
    """
    try:
        if file_path and os.path.dirname(str(file_path)):
            os.makedirs(os.path.dirname(str(file_path)), exist_ok=True)

        if hasattr(data, "to_dict"):
            data = data.to_dict()
        data = _clean_floats(json.loads(json.dumps(data, default=_to_builtin)))

        with open(file_path, "w", encoding="utf-8") as f:
            if pretty:
                json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=False)
            else:
                json.dump(data, f, ensure_ascii=False)
            f.write("\n")

        if not quiet:
            print(f"[OK] Data saved to {file_path}")

    except Exception as e:
        print(f"[ERROR] Failed to save JSON to {file_path}: {str(e)}")
        raise


def load_json(file_path, quiet=True):
    """
    Load data from JSON file

    Args:
        file_path (str): Path to JSON file
        quiet (bool): Suppress the [OK] line

    Returns:
        Data loaded from JSON file
    """
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"File not found: {file_path}")

    with open(file_path, "r", encoding="utf-8") as f:
        data = json.load(f)

    if not quiet:
        print(f"[OK] Data loaded from {file_path}")
    return data


def save_csv(rows, fieldnames, file_path, digits=15):
    """
    Write rows of numbers/strings to a CSV file with a header

    Floats are written at `digits` significant figures so reading them back gives
    exactly the written decimal value.

    Args:
        rows (iterable): Sequences aligned with fieldnames
        fieldnames (list): Column names
        file_path (str): Output path
        digits (int): Significant digits for floats

    Returns:
        str: Path to the written file
    """
    if os.path.dirname(str(file_path)):
        os.makedirs(os.path.dirname(str(file_path)), exist_ok=True)

    def fmt(value):
        if isinstance(value, (float, np.floating)):
            return format(float(value), f".{digits}g")
        return value

    with open(file_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return str(file_path)


def load_csv_columns(file_path, columns):
    """
    Read named numeric columns from a CSV file with a header

    Returns:
        dict: column name -> numpy array
    """
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"File not found: {file_path}")

    with open(file_path, "r", newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = [c for c in columns if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"Missing columns {missing} in {file_path}")
        data = {c: [] for c in columns}
        for row in reader:
            for c in columns:
                data[c].append(float(row[c]))
    return {c: np.asarray(v, dtype=float) for c, v in data.items()}
