"""
Exception hierarchy for csf-lab
Every failure raised by the library derives from CSFError so the CLI can map it to an exit code
"""


class CSFError(Exception):
    """Base class for all csf-lab errors"""


class PreconditionError(CSFError, ValueError):
    """An operation was called outside its domain (x <= 0, negative data, mismatched grids, ...)"""


class StabilityError(PreconditionError):
    """Requested time step exceeds the explicit stability limit"""


class NumericalError(CSFError, ArithmeticError):
    """Non-finite values or an integration that could not be completed"""


class BracketError(NumericalError):
    """No sign change of the shooting oracle over the scan range"""


class TraceFormatError(CSFError, ValueError):
    """A trace directory on disk is missing files or is internally inconsistent"""

    def __init__(self, message, path=None):
        self.path = str(path) if path is not None else None
        if self.path:
            message = f"{message} ({self.path})"
        super().__init__(message)
