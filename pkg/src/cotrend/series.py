"""Annual time-series data model, file ingestion, and derived-series arithmetic.

Series are stored at full double precision with an explicit missing-value
mask; a year is never silently dropped. All values are immutable after
construction and every operation returns a new object, so instances are safe
to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    EmptySeriesError,
    ExtrapolationError,
    ParseError,
    PreconditionError,
    StructureError,
    UsageError,
)

UNITS = ("percent", "per-1000", "years", "ratio", "currency")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class AnnualSeries:
    """One named annual series over consecutive years.

    ``values`` holds one float per year starting at ``start_year``; entries
    where ``missing`` is True carry NaN and are ignored by arithmetic that
    requires complete data.
    """

    name: str
    start_year: int
    values: np.ndarray
    units: str = "ratio"
    missing: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).copy()
        if values.ndim != 1 or values.size == 0:
            raise DomainError(f"series {self.name!r}: values must be a non-empty 1-d sequence")
        if self.units not in UNITS:
            raise DomainError(f"series {self.name!r}: unknown units {self.units!r} (expected one of {UNITS})")
        if self.missing is None:
            missing = np.isnan(values)
        else:
            missing = np.asarray(self.missing, dtype=bool).copy()
            if missing.shape != values.shape:
                raise DomainError(f"series {self.name!r}: missing mask shape {missing.shape} != values shape {values.shape}")
            missing |= np.isnan(values)
        values[missing] = np.nan
        if not np.all(np.isfinite(values[~missing])):
            raise DomainError(f"series {self.name!r}: observed values must be finite")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "missing", _readonly(missing))

    def __len__(self) -> int:
        return self.values.size

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.start_year + len(self))

    @property
    def n_missing(self) -> int:
        return int(self.missing.sum())

    def is_complete(self) -> bool:
        return not self.missing.any()

    def value_at(self, year: int) -> float:
        if not self.start_year <= year <= self.end_year:
            raise DomainError(f"series {self.name!r}: year {year} outside {self.start_year}..{self.end_year}")
        return float(self.values[year - self.start_year])

    def window(self, first_year: int, last_year: int) -> "AnnualSeries":
        """Slice to [first_year, last_year] (both inclusive)."""
        if first_year > last_year:
            raise DomainError(f"empty year window {first_year}..{last_year}")
        if first_year < self.start_year or last_year > self.end_year:
            raise DomainError(
                f"series {self.name!r} covers {self.start_year}..{self.end_year}, "
                f"cannot window to {first_year}..{last_year}"
            )
        i = first_year - self.start_year
        j = last_year - self.start_year + 1
        return AnnualSeries(self.name, first_year, self.values[i:j], self.units, self.missing[i:j])

    def with_values(self, values: np.ndarray, name: str | None = None) -> "AnnualSeries":
        return AnnualSeries(name or self.name, self.start_year, values, self.units)


@dataclass(frozen=True)
class Frame:
    """Year-aligned collection of complete AnnualSeries: the regression dataset."""

    series: dict[str, AnnualSeries]
    year_range: tuple[int, int]

    def __post_init__(self):
        first, last = self.year_range
        if not self.series:
            raise DomainError("frame requires at least one series")
        for name, s in self.series.items():
            if s.start_year != first or s.end_year != last:
                raise DomainError(f"series {name!r} covers {s.start_year}..{s.end_year}, frame wants {first}..{last}")
            if not s.is_complete():
                raise PreconditionError(f"series {name!r} still has missing values; interpolate before framing")
        object.__setattr__(self, "series", dict(self.series))

    def __len__(self) -> int:
        return self.year_range[1] - self.year_range[0] + 1

    def __contains__(self, name: str) -> bool:
        return name in self.series

    def __getitem__(self, name: str) -> AnnualSeries:
        try:
            return self.series[name]
        except KeyError:
            raise UsageError(f"unknown column {name!r}; have {sorted(self.series)}") from None

    @property
    def names(self) -> list[str]:
        return list(self.series)

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.year_range[0], self.year_range[1] + 1)


def build_frame(series: dict[str, AnnualSeries], year_range: tuple[int, int] | None = None) -> Frame:
    """Align a set of complete series on a common year range.

    With ``year_range`` None the intersection of all series ranges is used.
    """
    if not series:
        raise DomainError("no series to frame")
    if year_range is None:
        first = max(s.start_year for s in series.values())
        last = min(s.end_year for s in series.values())
    else:
        first, last = year_range
    if first > last:
        raise DomainError("series have no common year range")
    windowed = {name: s.window(first, last) for name, s in series.items()}
    return Frame(windowed, (first, last))


def load_table(path, schema: dict[str, tuple[str, str]] | None = None) -> dict[str, AnnualSeries]:
    """Read a delimited text table (comma or tab) into named annual series.

    The header row is required; its first column must be ``year``. Empty
    cells mark missing values. ``schema`` optionally maps a source column
    header to ``(name, units)``; unmapped columns keep their header name
    with units ``ratio``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip() != ""]
    if not lines:
        raise StructureError(f"{path}: empty file")
    delim = "\t" if "\t" in lines[0] else ","
    header = [c.strip() for c in lines[0].split(delim)]
    if len(header) < 2:
        raise StructureError(f"{path}: need a year column and at least one value column")
    if header[0].lower() != "year":
        raise StructureError(f"{path}: first column must be 'year', got {header[0]!r}")

    years: list[int] = []
    columns: list[list[float]] = [[] for _ in header[1:]]
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(delim)]
        if len(cells) != len(header):
            raise StructureError(f"{path}:{lineno}: expected {len(header)} cells, got {len(cells)}")
        try:
            year = int(cells[0])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: bad year {cells[0]!r}", row=lineno, column=header[0]) from None
        years.append(year)
        for j, cell in enumerate(cells[1:]):
            if cell == "":
                columns[j].append(math.nan)
                continue
            try:
                columns[j].append(float(cell))
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: non-numeric value {cell!r} in column {header[j + 1]!r}",
                    row=lineno,
                    column=header[j + 1],
                ) from None

    if len(set(years)) != len(years):
        dup = sorted({y for y in years if years.count(y) > 1})
        raise StructureError(f"{path}: duplicate year(s) {dup}")
    expected = list(range(years[0], years[0] + len(years)))
    if years != expected:
        raise StructureError(f"{path}: years must be consecutive and increasing, got {years[:8]}...")

    out: dict[str, AnnualSeries] = {}
    for j, col in enumerate(header[1:]):
        name, units = (schema or {}).get(col, (col, "ratio"))
        out[name] = AnnualSeries(name, years[0], np.array(columns[j]), units)
    return out


def interpolate_missing(s: AnnualSeries, half_window: int = 3) -> AnnualSeries:
    """Fill interior gaps with an inverse-distance weighted moving average.

    Each missing year t is replaced by sum(w_i * v_i) / sum(w_i) over the
    ``half_window`` nearest years on each side, with weights 1/|year_i - t|.
    Because gap neighbours may themselves be gaps, the rule is applied as a
    fixed-point iteration started from straight-line interpolation and run
    until the largest change is below 1e-10 (at most 100 sweeps).
    """
    if half_window < 1:
        raise DomainError(f"half_window must be >= 1, got {half_window}")
    if s.missing.all():
        raise EmptySeriesError(f"series {s.name!r}: all values missing")
    if s.is_complete():
        return s
    if s.missing[0] or s.missing[-1]:
        end = "first" if s.missing[0] else "last"
        raise ExtrapolationError(f"series {s.name!r}: {end} value missing; refusing to extrapolate")
    if (~s.missing).sum() < 2:
        raise PreconditionError(f"series {s.name!r}: need at least 2 observed values")

    n = len(s)
    missing_idx = np.flatnonzero(s.missing)
    obs_idx = np.flatnonzero(~s.missing)
    work = np.interp(np.arange(n), obs_idx, s.values[obs_idx])
    work[obs_idx] = s.values[obs_idx]  # keep observed entries bit-identical

    # Neighbour stencils are fixed up front: the half_window nearest indices
    # on each side, fewer near the ends.
    stencils = []
    for i in missing_idx:
        left = np.arange(max(0, i - half_window), i)
        right = np.arange(i + 1, min(n, i + half_window + 1))
        nbr = np.concatenate([left, right])
        w = 1.0 / np.abs(nbr - i)
        stencils.append((i, nbr, w))

    for _ in range(100):
        biggest = 0.0
        for i, nbr, w in stencils:
            new = float(np.dot(w, work[nbr]) / w.sum())
            biggest = max(biggest, abs(new - work[i]))
            work[i] = new
        if biggest < 1e-10:
            break

    return AnnualSeries(s.name, s.start_year, work, s.units)


def dependency_ratio(pop_child: float, pop_senior: float, pop_working: float) -> float:
    """Dependants per 100 working-age persons: 100*(children + seniors)/working."""
    if pop_working <= 0:
        raise DomainError(f"working-age population must be positive, got {pop_working}")
    if pop_child < 0 or pop_senior < 0:
        raise DomainError("population counts must be non-negative")
    return 100.0 * (pop_child + pop_senior) / pop_working


def real_rate(nominal: float, inflation: float) -> float:
    """Inflation-adjusted rate: nominal minus inflation, both in percent."""
    return nominal - inflation


def growth_rate(s: AnnualSeries) -> AnnualSeries:
    """Year-over-year percent changes; output starts one year later."""
    if not s.is_complete():
        raise PreconditionError(f"series {s.name!r}: growth rate requires a complete series")
    if len(s) < 2:
        raise DomainError(f"series {s.name!r}: need at least 2 values")
    v = s.values
    if np.any(v <= 0):
        raise DomainError(f"series {s.name!r}: growth rate undefined for non-positive values")
    g = 100.0 * (v[1:] - v[:-1]) / v[:-1]
    return AnnualSeries(f"{s.name}.growth", s.start_year + 1, g, "percent")


def change_over_period(s: AnnualSeries) -> float:
    """Last value minus first value, in the series' own units."""
    if not s.is_complete():
        raise PreconditionError(f"series {s.name!r}: change requires a complete series")
    if len(s) < 2:
        raise DomainError(f"series {s.name!r}: need at least 2 values")
    return float(s.values[-1] - s.values[0])


def mean_annual_pct_change(s: AnnualSeries) -> float:
    """Total percent change over the period divided by the number of rows.

    Companion convention to :func:`change_over_period` for report tables
    whose published counterparts express the change as an average annual
    percentage of the initial level.
    """
    if not s.is_complete():
        raise PreconditionError(f"series {s.name!r}: change requires a complete series")
    if len(s) < 2:
        raise DomainError(f"series {s.name!r}: need at least 2 values")
    first = float(s.values[0])
    if first == 0:
        raise DomainError(f"series {s.name!r}: first value is zero")
    return 100.0 * (float(s.values[-1]) - first) / first / len(s)
