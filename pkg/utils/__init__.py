"""
Shared utilities: JSON/CSV persistence, settings and the exception hierarchy

Usage:
    from utils import load_settings, save_json, PreconditionError
"""

from .config import (
    COMMAND_SCHEMAS, RunConfig, format_decimal, get_data_dir, load_settings,
)
from .errors import (
    BracketError, CSFError, NumericalError, PreconditionError, StabilityError,
    TraceFormatError,
)
from .file_loader import ensure_directory, load_csv_columns, load_json, save_csv, save_json

__all__ = [
    'COMMAND_SCHEMAS', 'RunConfig', 'format_decimal', 'get_data_dir', 'load_settings',
    'BracketError', 'CSFError', 'NumericalError', 'PreconditionError', 'StabilityError',
    'TraceFormatError',
    'ensure_directory', 'load_csv_columns', 'load_json', 'save_csv', 'save_json',
]
