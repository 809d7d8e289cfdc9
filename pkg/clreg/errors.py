"""Exception hierarchy shared by every clreg subpackage"""

from typing import Any, Dict, List, Optional


class ClregError(Exception):
    """Base class for all clreg errors"""


class ShapeError(ClregError, ValueError):
    """Array dimensions do not line up"""


class PreconditionError(ClregError, ValueError):
    """An operation was called with arguments outside its domain"""


class DegenerateError(ClregError, ValueError):
    """Zero variance or constant input where spread is required"""


class UndefinedMetricError(ClregError, ValueError):
    """Metric is not defined for the given accuracy matrix"""


class ConfigError(ClregError):
    """Run configuration failed validation"""

    def __init__(self, message: str, issues: Optional[List[Any]] = None):
        super().__init__(message)
        self.issues = list(issues or [])


class NumericalError(ClregError):
    """Training produced a non-finite loss or gradient"""

    def __init__(self, message: str, record: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.record = dict(record or {})
