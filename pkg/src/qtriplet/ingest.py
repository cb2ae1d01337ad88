"""Price files and the return, volatility and increment series derived from them."""
from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np

from .errors import ParseError

MIN_ANALYSIS_LENGTH = 256


@dataclass(frozen=True)
class PriceSeries:
    label: str
    dates: tuple
    closes: np.ndarray

    def __post_init__(self):
        if len(self.dates) != len(self.closes):
            raise ValueError("dates and closes differ in length")
        if len(self.closes) < 2:
            raise ValueError("a price series needs at least 2 observations")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates must be strictly increasing")
        if not np.all(self.closes > 0):
            raise ValueError("closing prices must be positive")

    def __len__(self):
        return len(self.closes)


@dataclass(frozen=True)
class Series:
    """A labelled derived sequence (returns, volatilities or increments)."""

    label: str
    values: np.ndarray

    def __post_init__(self):
        pass

    def __len__(self):
        return len(self.values)


class ReturnSeries(Series):
    pass


class VolatilitySeries(Series):
    def __post_init__(self):
        if np.any(self.values < 0):
            raise ValueError("volatilities must be nonnegative")


class IncrementSeries(Series):
    pass


def _open_text(source) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"), newline="")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def parse_price_csv(source: Union[str, Path, bytes, IO], label: str | None = None) -> PriceSeries:
    """Read a ``date,close`` CSV (extra columns ignored, header match case-insensitive).

    Line numbers in errors count the header as line 1. Rows are sorted by
    date; duplicate dates are rejected.
    """
    if label is None:
        label = Path(source).stem if isinstance(source, (str, Path)) else ""
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty input", 1) from None
        names = [h.strip().lower().lstrip("\ufeff") for h in header]
        try:
            i_date, i_close = names.index("date"), names.index("close")
        except ValueError:
            raise ParseError("header must contain 'date' and 'close' columns", 1) from None
        rows = []
        seen = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) <= max(i_date, i_close):
                raise ParseError(f"expected at least {max(i_date, i_close) + 1} columns", lineno)
            try:
                date = dt.date.fromisoformat(row[i_date].strip())
            except ValueError:
                raise ParseError(f"bad date {row[i_date]!r} (want YYYY-MM-DD)", lineno) from None
            try:
                close = float(row[i_close])
            except ValueError:
                raise ParseError(f"bad close {row[i_close]!r}", lineno) from None
            if not np.isfinite(close):
                raise ParseError(f"non-finite close {row[i_close]!r}", lineno)
            if close <= 0:
                raise ParseError(f"close {close} <= 0; log-return undefined", lineno)
            if date in seen:
                raise ParseError(f"duplicate date {date} (first on line {seen[date]})", lineno)
            seen[date] = lineno
            rows.append((date, close))
    finally:
        if isinstance(source, (str, Path)):
            fh.close()
    if len(rows) < 2:
        raise ParseError(f"need at least 2 valid rows, got {len(rows)}")
    rows.sort(key=lambda r: r[0])
    return PriceSeries(label, tuple(r[0] for r in rows), np.array([r[1] for r in rows]))


def write_price_csv(path: Union[str, Path], dates, closes) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("date,close\n")
        for d, c in zip(dates, closes):
            fh.write(f"{d.isoformat()},{float(c)!r}\n")


def log_returns(p: PriceSeries) -> ReturnSeries:
    """R_t = ln(S_{t+1}/S_t) over consecutive rows (calendar gaps ignored)."""
    return ReturnSeries(p.label, np.log(p.closes[1:] / p.closes[:-1]))


def volatility(r: ReturnSeries) -> VolatilitySeries:
    return VolatilitySeries(r.label, np.abs(r.values))


def volatility_increments(v: VolatilitySeries) -> IncrementSeries:
    """Delta R_t = |R_{t+1}| - |R_t|."""
    if len(v.values) < 2:
        raise ValueError("increments need at least 2 volatilities")
    return IncrementSeries(v.label, np.diff(v.values))


def weekdays(start: dt.date, n: int) -> list:
    """The first ``n`` weekdays on or after ``start``."""
    out = []
    d = start
    while len(out) < n:
        if d.weekday() < 5:
            out.append(d)
        d += dt.timedelta(days=1)
    return out
