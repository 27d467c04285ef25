"""Real-data front end: price ingestion, pair spreads, realized volatility.

Input price CSVs need a header and one of two layouts:

* ``timestamp,open,high,low,close`` or ``timestamp,price`` with ISO-8601
  timestamps, or
* the vendor layout with an integer ``date`` column (YYYYMMDD) and an
  integer ``minute``/``time`` column (HHMM on a 24-hour clock).

Rows with unparseable timestamps or missing/nonpositive prices are dropped
and counted.  Rows are stably sorted by timestamp and on duplicate
timestamps the later row wins (with a warning).  Calendar cleaning beyond
that (holidays, session alignment) is the caller's responsibility.

The pair spread of two series is Y_t = ln(S_A(t)/S_A(0)) - ln(S_B(t)/S_B(0))
on the inner join of their timestamps, so Y_0 = 0 by construction.  Daily
realized volatility is the square root of the summed squared log returns
taken over consecutive intraday marks at a fixed minute interval.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .car1 import Path, SamplingGrid
from .errors import DomainError


@dataclass(eq=False)
class PriceSeries:
    """Strictly increasing timestamps with positive prices."""

    timestamps: np.ndarray = field(repr=False)  # datetime64[ns]
    prices: np.ndarray = field(repr=False)
    dropped: int = 0

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype="datetime64[ns]")
        self.prices = np.asarray(self.prices, dtype=float)
        if len(self.timestamps) != len(self.prices):
            raise DomainError("timestamps and prices must have equal length")
        if len(self.prices) == 0:
            raise DomainError("empty price series")
        if np.any(self.prices <= 0.0) or not np.all(np.isfinite(self.prices)):
            raise DomainError("prices must be positive and finite")
        if np.any(np.diff(self.timestamps).astype(np.int64) <= 0):
            raise DomainError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.prices)


def _combine_date_minute(frame: pd.DataFrame, minute_col: str) -> pd.Series:
    date = pd.to_datetime(frame["date"].astype("Int64").astype(str), format="%Y%m%d", errors="coerce")
    hhmm = pd.to_numeric(frame[minute_col], errors="coerce")
    offset = pd.to_timedelta((hhmm // 100) * 60 + (hhmm % 100), unit="m")
    return date + offset


def load_prices(file, column: str = "close") -> PriceSeries:
    """Load one price column from a CSV file, reporting dropped rows."""
    frame = pd.read_csv(file)
    if frame.empty:
        raise DomainError(f"no rows in {file}")
    frame.columns = [str(c).strip().lower() for c in frame.columns]

    if "timestamp" in frame.columns:
        ts = pd.to_datetime(frame["timestamp"], errors="coerce", format="ISO8601")
    elif "date" in frame.columns and ("minute" in frame.columns or "time" in frame.columns):
        ts = _combine_date_minute(frame, "minute" if "minute" in frame.columns else "time")
    else:
        raise DomainError(
            f"{file}: expected a 'timestamp' column or a 'date' + 'minute'/'time' pair"
        )

    for name in (column, "price", "close"):
        if name in frame.columns:
            price = pd.to_numeric(frame[name], errors="coerce")
            break
    else:
        raise DomainError(f"{file}: no price column (looked for {column!r} and 'price')")

    keep = ts.notna() & price.notna() & (price > 0.0)
    dropped = int((~keep).sum())
    ts, price = ts[keep], price[keep]
    if len(ts) == 0:
        raise DomainError(f"{file}: no valid rows after cleaning")

    order = np.argsort(ts.to_numpy(), kind="stable")
    ts = ts.to_numpy()[order]
    price = price.to_numpy()[order]
    # On duplicate timestamps the later row (in file order) wins.
    unique_mask = np.ones(len(ts), dtype=bool)
    unique_mask[:-1] = ts[1:] != ts[:-1]
    n_dup = int((~unique_mask).sum())
    if n_dup:
        warnings.warn(f"{file}: {n_dup} duplicate timestamps, keeping the later rows")
        ts, price = ts[unique_mask], price[unique_mask]
    return PriceSeries(timestamps=ts, prices=price, dropped=dropped)


def pair_spread(a: PriceSeries, b: PriceSeries) -> np.ndarray:
    """Relative log-price divergence of a pair on their joined timestamps."""
    common, ia, ib = np.intersect1d(a.timestamps, b.timestamps, return_indices=True)
    if len(common) == 0:
        raise DomainError("the two series share no timestamps")
    sa = a.prices[ia]
    sb = b.prices[ib]
    return np.log(sa / sa[0]) - np.log(sb / sb[0])


def daily_returns(series: PriceSeries, interval_minutes: int = 5) -> list[tuple[np.datetime64, np.ndarray]]:
    """Intraday log returns over consecutive interval marks, grouped by day.

    Only observations lying exactly on the interval grid are used; days
    providing fewer than two such marks are skipped with a warning.
    """
    if interval_minutes < 1:
        raise DomainError("interval must be at least one minute")
    days = series.timestamps.astype("datetime64[D]")
    minute_of_day = (series.timestamps - days).astype("timedelta64[m]").astype(np.int64)
    second_of_day = (series.timestamps - days).astype("timedelta64[s]").astype(np.int64)
    on_grid = (minute_of_day % interval_minutes == 0) & (second_of_day % 60 == 0)

    out: list[tuple[np.datetime64, np.ndarray]] = []
    skipped = 0
    for day in np.unique(days):
        sel = (days == day) & on_grid
        prices = series.prices[sel]
        if len(prices) < 2:
            skipped += 1
            continue
        out.append((day, np.diff(np.log(prices))))
    if skipped:
        warnings.warn(f"{skipped} day(s) without enough on-grid observations were skipped")
    if not out:
        raise DomainError("no day provided two or more on-grid observations")
    return out


def realized_volatility(day_returns: list[tuple[np.datetime64, np.ndarray]]) -> np.ndarray:
    """Per-day realized volatility: sqrt of the summed squared returns."""
    if not day_returns:
        raise DomainError("no daily return groups supplied")
    return np.array([np.sqrt(np.sum(r * r)) for _, r in day_returns])


@dataclass(frozen=True)
class PathMapping:
    """How a raw series was laid onto a sampling grid."""

    path: Path
    stride: int
    used: int
    available: int


def to_path(series: np.ndarray, grid: SamplingGrid) -> PathMapping:
    """Lay a raw series onto the grid: first N*M+1 points, or an evenly
    strided subset when the series is longer (stride = len // (N*M+1))."""
    series = np.asarray(series, dtype=float)
    total = grid.total_points
    if len(series) < total:
        raise DomainError(
            f"series has {len(series)} points but the grid needs {total}"
        )
    stride = len(series) // total
    idx = np.arange(total) * stride
    return PathMapping(
        path=Path(grid, series[idx]),
        stride=stride,
        used=int(idx[-1]) + 1,
        available=len(series),
    )


# --- CSV helpers shared by the command-line tools ------------------------------


def write_series_csv(file, y: np.ndarray, t: np.ndarray | None = None, header=("t", "y")) -> None:
    y = np.asarray(y, dtype=float)
    t = np.arange(len(y)) if t is None else np.asarray(t)
    frame = pd.DataFrame({header[0]: t, header[1]: y})
    frame.to_csv(file, index=False)


def read_series_csv(file) -> tuple[np.ndarray, np.ndarray]:
    frame = pd.read_csv(file)
    if frame.shape[1] < 2:
        raise DomainError(f"{file}: expected two columns")
    return frame.iloc[:, 0].to_numpy(dtype=float), frame.iloc[:, 1].to_numpy(dtype=float)


def path_from_series(
    y: np.ndarray,
    per_period: int | None = None,
    n_periods: int | None = None,
    t: np.ndarray | None = None,
) -> PathMapping:
    """Build a Path from a raw series, inferring the grid when possible.

    The per-period count M is taken from the time column spacing (1 / dt)
    unless given explicitly; N defaults to (len - 1) / M, which must then
    divide evenly.  An explicit shorter N selects the leading points (or a
    strided subset) through ``to_path``.
    """
    y = np.asarray(y, dtype=float)
    if per_period is None:
        if t is None:
            raise DomainError("per_period is required when no time column is available")
        steps = np.diff(np.asarray(t, dtype=float))
        if len(steps) == 0 or steps.min() <= 0:
            raise DomainError("time column must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-6, atol=1e-12):
            raise DomainError("time column is not evenly spaced; pass per_period explicitly")
        per_period = max(1, round(1.0 / steps[0]))
    if n_periods is None:
        if (len(y) - 1) % per_period:
            raise DomainError(
                f"series length {len(y)} does not sit on a whole number of periods "
                f"at per_period={per_period}; pass n_periods explicitly"
            )
        n_periods = (len(y) - 1) // per_period
    return to_path(y, SamplingGrid(n_periods, per_period))
