"""Byte-stable JSON and CSV writers for run artifacts"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays and tuples into plain JSON types"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, float) and not np.isfinite(value):
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def _announce_overwrite(path: Path, overwritten: List[Path]):
    if path.exists():
        logger.warning(f"Overwriting existing file {path}")
        overwritten.append(path)


def write_json(data: Dict[str, Any], path: PathLike, overwritten: List[Path] = None) -> Path:
    """Sorted keys, two-space indent, trailing newline"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _announce_overwrite(path, overwritten if overwritten is not None else [])
    path.write_text(json.dumps(to_jsonable(data), indent=2, sort_keys=True) + "\n")
    return path


def write_rows_csv(
    rows: Sequence[Dict[str, Any]], path: PathLike, columns: Sequence[str] = None,
    overwritten: List[Path] = None,
) -> Path:
    """Write dict rows with a fixed column order (first-seen order when not given)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _announce_overwrite(path, overwritten if overwritten is not None else [])
    if columns is None:
        columns = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
    frame = pd.DataFrame(list(rows), columns=list(columns))
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")
    return path


def write_vector_csv(values: np.ndarray, path: PathLike, names: Sequence[str] = None,
                     overwritten: List[Path] = None) -> Path:
    """One ``index,name,value`` row per parameter"""
    values = np.asarray(values, dtype=np.float64).ravel()
    names = list(names) if names is not None else [""] * values.size
    rows = [{"index": i, "group": names[i], "value": float(v)} for i, v in enumerate(values)]
    return write_rows_csv(rows, path, ["index", "group", "value"], overwritten)
