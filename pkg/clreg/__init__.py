"""
clreg: regularisation-based continual learning testbed

Online EWC, SI and MAS on a minimal MLP with exact gradients, run over
synthetic subject-incremental streams, with the metrics, signal
preprocessing and diagnostic probes used to study them.
"""

__version__ = "0.1.0"

from .errors import (
    ClregError,
    ConfigError,
    DegenerateError,
    NumericalError,
    PreconditionError,
    ShapeError,
    UndefinedMetricError,
)
from .metrics import AccuracyMatrix, bwt, final_acc, fwt, macro_f1, mean_acc
from .runner import RunArtifacts, RunConfig, emit_reports, load_config, run_sequence
from .strategies import DEFAULT_LAMBDAS, SHIFTED_STREAM_LAMBDAS, make_strategy
from .stream import StreamSpec, generate_stream

_BASE_EXPORTS = [
    'AccuracyMatrix',
    'ClregError',
    'ConfigError',
    'DEFAULT_LAMBDAS',
    'DegenerateError',
    'NumericalError',
    'PreconditionError',
    'RunArtifacts',
    'RunConfig',
    'SHIFTED_STREAM_LAMBDAS',
    'ShapeError',
    'StreamSpec',
    'UndefinedMetricError',
    'bwt',
    'emit_reports',
    'final_acc',
    'fwt',
    'generate_stream',
    'load_config',
    'macro_f1',
    'make_strategy',
    'mean_acc',
    'run_sequence',
]

# Optional: MCP server (requires mcp package)
try:
    from .server import ClregMCPServer  # noqa: F401
    __all__ = _BASE_EXPORTS + ['ClregMCPServer']
except ImportError:
    # MCP dependencies not installed
    __all__ = list(_BASE_EXPORTS)
