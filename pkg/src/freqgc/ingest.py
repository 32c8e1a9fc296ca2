"""Monthly CSV ingestion and date alignment."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import InputError

DEFAULT_SENTINELS = (-99.99, -999.0)


class IngestError(InputError):
    pass


def month_label(m: np.datetime64) -> str:
    return str(np.datetime64(m, "M"))


@dataclass(frozen=True)
class TimeSeries:
    """Consecutive monthly observations of one variable."""

    periods: np.ndarray  # datetime64[M]
    values: np.ndarray
    name: str = "series"

    def __post_init__(self):
        periods = np.asarray(self.periods, dtype="datetime64[M]")
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "periods", periods)
        object.__setattr__(self, "values", values)
        if periods.shape != values.shape or values.ndim != 1:
            raise IngestError("periods and values must be 1-d and of equal length")
        if not np.all(np.isfinite(values)):
            raise IngestError(f"{self.name}: non-finite values")
        if periods.size > 1:
            steps = np.diff(periods).astype(int)
            if np.any(steps != 1):
                i = int(np.argmax(steps != 1))
                raise IngestError(
                    f"{self.name}: months not consecutive after {month_label(periods[i])}")

    def __len__(self) -> int:
        return self.values.size

    @property
    def start(self) -> str:
        return month_label(self.periods[0])

    @property
    def end(self) -> str:
        return month_label(self.periods[-1])

    @classmethod
    def from_values(cls, values, start: str = "2000-01", name: str = "series") -> "TimeSeries":
        values = np.asarray(values, dtype=float)
        periods = np.datetime64(start, "M") + np.arange(values.size)
        return cls(periods, values, name)

    def slice(self, start, end) -> "TimeSeries":
        keep = (self.periods >= start) & (self.periods <= end)
        return TimeSeries(self.periods[keep], self.values[keep], self.name)


def _parse_month(text: str, fmt: str, line: int) -> np.datetime64:
    try:
        d = datetime.strptime(text.strip(), fmt)
    except ValueError:
        raise IngestError(f"line {line}: cannot parse date {text!r} with format {fmt!r}") from None
    return np.datetime64(f"{d.year:04d}-{d.month:02d}", "M")


def _is_sentinel(v: float, sentinels) -> bool:
    return any(math.isclose(v, s, rel_tol=0, abs_tol=1e-9) for s in sentinels)


def load_csv(path, series_column: str, date_column: str = "date", date_format: str = "%Y-%m",
             na_drop: bool = False, sentinels=DEFAULT_SENTINELS, name: str | None = None) -> TimeSeries:
    """Read one monthly series from a headed CSV file.

    Missing cells and sentinel codes are errors.  With ``na_drop`` they are
    tolerated only in leading or trailing rows, which are trimmed.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        reader.fieldnames = header
        for col in (date_column, series_column):
            if col not in header:
                raise IngestError(f"{path}: column {col!r} not found (have {header})")
        rows = []
        for rec in reader:
            line = reader.line_num
            date_text = (rec.get(date_column) or "").strip()
            if not date_text and not any((v or "").strip() for v in rec.values()):
                continue  # blank line
            month = _parse_month(date_text, date_format, line)
            cell = (rec.get(series_column) or "").strip()
            if cell == "":
                rows.append((line, month, None))
                continue
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(f"line {line}: non-numeric value {cell!r} "
                                  f"in column {series_column!r}") from None
            if not math.isfinite(v):
                raise IngestError(f"line {line}: non-finite value {cell!r}")
            rows.append((line, month, None if _is_sentinel(v, sentinels) else v))

    if na_drop:
        while rows and rows[0][2] is None:
            rows.pop(0)
        while rows and rows[-1][2] is None:
            rows.pop()
    for line, _, v in rows:
        if v is None:
            raise IngestError(f"line {line}: missing or sentinel value in column {series_column!r}")
    if not rows:
        raise IngestError(f"{path}: no observations")

    months = np.array([r[1] for r in rows], dtype="datetime64[M]")
    steps = np.diff(months).astype(int)
    for i, step in enumerate(steps):
        if step < 1:
            raise IngestError(f"line {rows[i + 1][0]}: month {month_label(months[i + 1])} "
                              "is out of order or duplicated")
        if step > 1:
            missing = ", ".join(month_label(months[i] + j) for j in range(1, min(step, 4)))
            more = "" if step <= 3 else ", ..."
            raise IngestError(f"gap in months between {month_label(months[i])} and "
                              f"{month_label(months[i + 1])}: missing {missing}{more}")
    return TimeSeries(months, np.array([r[2] for r in rows]), name or series_column)


def align(x: TimeSeries, y: TimeSeries) -> tuple:
    """Trim both series to the intersection of their date ranges."""
    start = max(x.periods[0], y.periods[0])
    end = min(x.periods[-1], y.periods[-1])
    if start > end:
        raise IngestError(f"no overlap between {x.name} ({x.start}..{x.end}) "
                          f"and {y.name} ({y.start}..{y.end})")
    return x.slice(start, end), y.slice(start, end)
