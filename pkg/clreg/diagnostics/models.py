"""Probe result data models"""

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from ..errors import PreconditionError
from ..utils.serialization import write_json, write_rows_csv

logger = logging.getLogger(__name__)


@dataclass
class StatResult:
    """Test statistic and p-value of one hypothesis test"""
    statistic: float
    p_value: float
    n: int
    kind: str  # 'pearson', 't_one_sample'
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise PreconditionError(f"p-value {self.p_value} outside [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ProbeRow:
    """One row of probe output, e.g. one sample size or one task pair"""
    key: str
    values: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        bad = [name for name, value in self.values.items() if not np.isfinite(value)]
        if bad:
            raise PreconditionError(f"Probe row '{self.key}' has non-finite values for {bad}")

    def flat(self) -> dict:
        return {"key": self.key, **{k: float(v) for k, v in self.values.items()}}


@dataclass
class DiagnosticReport:
    """Rows of one probe plus its headline statistic and any secondary ones"""
    name: str
    rows: List[ProbeRow]
    stat: Optional[StatResult] = None
    extra_stats: Dict[str, StatResult] = field(default_factory=dict)

    def column_names(self) -> List[str]:
        columns = ["key"]
        for row in self.rows:
            columns.extend(name for name in row.values if name not in columns)
        return columns

    def row(self, key: str) -> ProbeRow:
        for row in self.rows:
            if row.key == key:
                return row
        raise KeyError(key)

    def summary(self) -> dict:
        return {
            "name": self.name,
            "n_rows": len(self.rows),
            "stat": self.stat.to_dict() if self.stat else None,
            "extra_stats": {k: v.to_dict() for k, v in sorted(self.extra_stats.items())},
        }

    def write(self, out_dir: Union[str, Path], overwritten: List[Path] = None) -> List[Path]:
        """Write ``probe_<name>.csv`` and ``probe_<name>.json``"""
        out_dir = Path(out_dir)
        csv_path = write_rows_csv(
            [row.flat() for row in self.rows],
            out_dir / f"probe_{self.name}.csv",
            self.column_names(),
            overwritten,
        )
        json_path = write_json(self.summary(), out_dir / f"probe_{self.name}.json", overwritten)
        logger.info(f"Wrote probe '{self.name}' ({len(self.rows)} rows) to {out_dir}")
        return [csv_path, json_path]
