"""CSV and JSON file formats.

Input CSV: comma separated, '.' decimal point, UTF-8, optional header row
(detected when the first row's value cell is not a number). Either one
value column, or a label column followed by one value column. A missing
value is an empty cell or any casing of ``nan``; trailing blank lines are
ignored, so a missing final value must be written as ``nan``.

Imputed CSV: header ``index,value,imputed_flag``, one row per index, values
printed with ``%.17g`` and flags as 0/1.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from l1impute.errors import DataError
from l1impute.mask import Mask
from l1impute.spectral import Signal

FLOAT_FORMAT = "%.17g"


@dataclass
class SeriesData:
    values: List[Optional[float]]
    labels: Optional[List[str]] = None
    header: Optional[List[str]] = None

    @property
    def complete(self) -> bool:
        return all(v is not None for v in self.values)


def _parse_cell(cell: str) -> Optional[float]:
    text = (cell or "").strip()
    if not text or text.lower() == "nan":
        return None
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise DataError(f"value is not finite: {text!r}")
    return value


def _is_number(cell: str) -> bool:
    text = (cell or "").strip()
    if not text or text.lower() == "nan":
        return True
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_series(path: str) -> SeriesData:
    try:
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}")
    except pd.errors.EmptyDataError:
        raise DataError(f"input file is empty: {path}")
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot parse CSV {path} ({exc})")

    if frame.shape[1] not in (1, 2):
        raise DataError(f"expected one value column (optionally after a label column), got {frame.shape[1]} columns")
    rows = frame.fillna("").values.tolist()
    while rows and all(not str(c).strip() for c in rows[-1]):
        rows.pop()
    header = None
    if rows and not _is_number(rows[0][-1]):
        header = [str(c) for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise DataError(f"no data rows in {path}")

    labels = None
    if frame.shape[1] == 2:
        if all(_is_number(row[0]) and (row[0] or "").strip() for row in rows):
            raise DataError("two numeric columns found; exactly one value column is allowed")
        labels = [str(row[0]) for row in rows]
    values = [_parse_cell(row[-1]) for row in rows]
    return SeriesData(values=values, labels=labels, header=header)


def write_imputed(path: str, g: Signal, mask: Mask) -> None:
    flags = mask.boolean().astype(int)
    frame = pd.DataFrame(
        {
            "index": np.arange(g.n),
            "value": g.values.real,
            "imputed_flag": flags,
        }
    )
    _ensure_parent(path)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_table(path_or_buffer, rows: Sequence[dict], columns: Sequence[str]) -> None:
    frame = pd.DataFrame(list(rows), columns=list(columns))
    if isinstance(path_or_buffer, str):
        _ensure_parent(path_or_buffer)
    frame.to_csv(path_or_buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="")


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def write_json(path: str, payload: Any) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps_json(payload))


def _ensure_parent(path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)


def complete_signal(data: SeriesData, what: str = "series") -> Signal:
    if not data.complete:
        missing = sum(1 for v in data.values if v is None)
        raise DataError(f"the {what} has {missing} missing values but must be complete")
    return Signal.time([float(v) for v in data.values])


def take(values: Iterable[Optional[float]], limit: Optional[int]) -> List[Optional[float]]:
    items = list(values)
    return items if not limit else items[: int(limit)]
