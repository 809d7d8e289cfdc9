"""Run configuration, JSON loading and validation"""

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.network import Activation
from ..errors import ConfigError
from ..strategies import STRATEGY_NAMES
from ..stream.generator import StreamSpec

logger = logging.getLogger(__name__)

OPTIMIZER_NAMES = ('sgd', 'adam')


@dataclass
class ConfigIssue:
    """Single configuration problem"""
    field: str
    message: str
    suggestion: Optional[str] = None


@dataclass
class ConfigReport:
    """Result of config validation"""
    is_valid: bool
    issues: List[ConfigIssue]

    @property
    def has_issues(self):
        return len(self.issues) > 0

    def format_issues(self) -> str:
        """Numbered, human-readable issue list"""
        if not self.issues:
            return "No issues found."

        formatted = []
        for i, issue in enumerate(self.issues, 1):
            formatted.append(f"{i}. {issue.field}: {issue.message}")
            if issue.suggestion:
                formatted.append(f"   Suggestion: {issue.suggestion}")

        return "\n".join(formatted)


@dataclass
class ModelConfig:
    hidden: List[int] = field(default_factory=lambda: [32, 32])
    activation: str = "elu"


@dataclass
class OptimizerConfig:
    name: str = "adam"
    lr: float = 0.001


@dataclass
class RunConfig:
    """
    Everything one continual-learning run needs

    ``seeds`` drives repeated runs in sweeps; ``run_sequence`` uses the
    seed it is given (the first one by default).
    """
    stream: StreamSpec = field(default_factory=StreamSpec)
    model: ModelConfig = field(default_factory=ModelConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    epochs: int = 30
    batch_size: int = 32
    strategy: str = "naive"
    lam: float = 0.0
    gamma: float = 0.9
    xi_damp: float = 0.1
    n_fisher: int = 500
    seeds: List[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    shuffles: int = 5
    output_dir: str = "runs"

    @property
    def layer_sizes(self) -> List[int]:
        return [self.stream.D, *self.model.hidden, self.stream.K]

    def validate(self) -> ConfigReport:
        issues = [
            ConfigIssue(f"stream.{name}", message) for name, message in self.stream.issues()
        ]
        if self.strategy not in STRATEGY_NAMES:
            issues.append(ConfigIssue("strategy", f"Unknown strategy '{self.strategy}'",
                                      f"Use one of {', '.join(STRATEGY_NAMES)}"))
        if self.optimizer.name not in OPTIMIZER_NAMES:
            issues.append(ConfigIssue("optimizer.name", f"Unknown optimizer '{self.optimizer.name}'",
                                      f"Use one of {', '.join(OPTIMIZER_NAMES)}"))
        if self.optimizer.lr <= 0:
            issues.append(ConfigIssue("optimizer.lr", "Learning rate must be positive"))
        if self.model.activation not in {a.value for a in Activation}:
            issues.append(ConfigIssue("model.activation", f"Unknown activation '{self.model.activation}'",
                                      "Use 'elu' or 'tanh'"))
        if any(int(h) < 1 for h in self.model.hidden):
            issues.append(ConfigIssue("model.hidden", "Hidden layer widths must be >= 1"))
        if self.lam < 0:
            issues.append(ConfigIssue("lam", f"lambda must be >= 0, got {self.lam}"))
        if self.epochs < 1:
            issues.append(ConfigIssue("epochs", "epochs must be >= 1"))
        if self.batch_size < 1:
            issues.append(ConfigIssue("batch_size", "batch_size must be >= 1"))
        if not 0.0 < self.gamma <= 1.0:
            issues.append(ConfigIssue("gamma", f"gamma must lie in (0, 1], got {self.gamma}"))
        if self.xi_damp <= 0:
            issues.append(ConfigIssue("xi_damp", "xi_damp must be > 0"))
        if self.n_fisher < 1:
            issues.append(ConfigIssue("n_fisher", "n_fisher must be >= 1"))
        if not self.seeds:
            issues.append(ConfigIssue("seeds", "seeds must be non-empty", "e.g. [0, 1, 2, 3, 4]"))
        if self.shuffles < 1:
            issues.append(ConfigIssue("shuffles", "shuffles must be >= 1"))
        return ConfigReport(is_valid=not issues, issues=issues)

    def require_valid(self) -> "RunConfig":
        report = self.validate()
        if not report.is_valid:
            raise ConfigError(f"Invalid run configuration:\n{report.format_issues()}", report.issues)
        return self

    def with_overrides(self, **changes: Any) -> "RunConfig":
        """
        Copy with top-level fields replaced

        ``stream``, ``model`` and ``optimizer`` accept a dict of partial
        field changes as well as a full object.
        """
        nested = {"stream": self.stream, "model": self.model, "optimizer": self.optimizer}
        for name, current in nested.items():
            if isinstance(changes.get(name), dict):
                changes[name] = dataclasses.replace(current, **changes[name])
        copied = dataclasses.replace(
            self,
            stream=dataclasses.replace(self.stream),
            model=dataclasses.replace(self.model, hidden=list(self.model.hidden)),
            optimizer=dataclasses.replace(self.optimizer),
            seeds=list(self.seeds),
        )
        return dataclasses.replace(copied, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def _known_fields(cls) -> List[str]:
    return [f.name for f in dataclasses.fields(cls)]


# JSON types accepted for a field whose default has the key type
_ACCEPTED_TYPES = {int: (int,), float: (int, float), str: (str,)}


def _type_issues(obj: Any, prefix: str) -> List[ConfigIssue]:
    """Issues for scalar and integer-list fields holding a value of the wrong JSON type"""
    issues = []
    for f in dataclasses.fields(obj):
        value = getattr(obj, f.name)
        if f.default is not dataclasses.MISSING:
            accepted = _ACCEPTED_TYPES.get(type(f.default))
            if accepted is None:
                continue
            if isinstance(value, bool) or not isinstance(value, accepted):
                issues.append(ConfigIssue(
                    f"{prefix}{f.name}",
                    f"Expected {type(f.default).__name__}, got {type(value).__name__} ({value!r})",
                ))
        elif f.default_factory is not dataclasses.MISSING and isinstance(f.default_factory(), list):
            if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in value):
                issues.append(ConfigIssue(f"{prefix}{f.name}", f"Expected a list of integers, got {value!r}"))
    return issues


def _build(cls, data: Any, prefix: str, issues: List[ConfigIssue]):
    if not isinstance(data, dict):
        issues.append(ConfigIssue(prefix, f"Expected an object, got {type(data).__name__}"))
        return cls()
    known = _known_fields(cls)
    for key in sorted(set(data) - set(known)):
        issues.append(ConfigIssue(f"{prefix}.{key}", "Unknown key", f"Known keys: {', '.join(known)}"))
    return cls(**{k: v for k, v in data.items() if k in known})


def config_from_dict(data: Dict[str, Any]) -> RunConfig:
    """Build and validate a RunConfig from a JSON-like dict"""
    issues: List[ConfigIssue] = []
    data = dict(data)
    try:
        stream = _build(StreamSpec, data.pop("stream", {}), "stream", issues)
        model = _build(ModelConfig, data.pop("model", {}), "model", issues)
        optimizer = _build(OptimizerConfig, data.pop("optimizer", {}), "optimizer", issues)
        top = {k: v for k, v in data.items() if k in _known_fields(RunConfig)}
        for key in sorted(set(data) - set(top)):
            issues.append(ConfigIssue(key, "Unknown key"))
        config = RunConfig(stream=stream, model=model, optimizer=optimizer, **top)
    except TypeError as e:
        raise ConfigError(f"Malformed run configuration: {e}", issues) from e

    type_issues = _type_issues(config, "")
    for name in ("stream", "model", "optimizer"):
        type_issues.extend(_type_issues(getattr(config, name), f"{name}."))
    if type_issues:
        issues.extend(type_issues)
        raise ConfigError(f"Invalid run configuration:\n{ConfigReport(False, issues).format_issues()}", issues)

    try:
        report = config.validate()
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Malformed run configuration: {e}", issues) from e
    issues.extend(report.issues)
    if issues:
        raise ConfigError(f"Invalid run configuration:\n{ConfigReport(False, issues).format_issues()}", issues)
    return config


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read a JSON config file; raise ConfigError on any problem"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    config = config_from_dict(data)
    logger.info(f"Loaded config from {path} (strategy={config.strategy}, lam={config.lam})")
    return config
