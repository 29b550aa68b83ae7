"""Reference distributions and embedded finite-sample critical-value tables.

Survival functions are computed from the regularized incomplete gamma and
beta functions and the complementary error function; everything here is a
pure function over immutable tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betainc, erfc, gammaincc

from .errors import DomainError

FAMILIES = ("standard-normal", "student-t", "chi-square", "f")

LEVELS = (0.01, 0.05, 0.10)


@dataclass(frozen=True)
class DistRef:
    """A reference law: family plus degrees of freedom (0 when unused)."""

    family: str
    df1: float = 0.0
    df2: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r} (expected one of {FAMILIES})")
        need = {"standard-normal": 0, "student-t": 1, "chi-square": 1, "f": 2}[self.family]
        for i, df in enumerate((self.df1, self.df2), start=1):
            if i <= need and not (df > 0 and math.isfinite(df)):
                raise DomainError(f"{self.family}: df{i} must be positive and finite, got {df}")

    def label(self) -> str:
        if self.family == "standard-normal":
            return "N(0,1)"
        if self.family == "student-t":
            return f"t({self.df1:g})"
        if self.family == "chi-square":
            return f"chi2({self.df1:g})"
        return f"F({self.df1:g},{self.df2:g})"


def survival(d: DistRef, x: float) -> float:
    """Upper tail probability P(X > x)."""
    if not math.isfinite(x):
        if math.isnan(x):
            raise DomainError("survival: x must be finite")
        return 0.0 if x > 0 else 1.0
    if d.family == "standard-normal":
        return 0.5 * float(erfc(x / math.sqrt(2.0)))
    if d.family == "chi-square":
        if x <= 0:
            return 1.0
        return float(gammaincc(d.df1 / 2.0, x / 2.0))
    if d.family == "student-t":
        nu = d.df1
        tail = 0.5 * float(betainc(nu / 2.0, 0.5, nu / (nu + x * x)))
        return tail if x >= 0 else 1.0 - tail
    # F
    if x <= 0:
        return 1.0
    d1, d2 = d.df1, d.df2
    return float(betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)))


def normal_sf(x: float) -> float:
    return survival(DistRef("standard-normal"), x)


def student_t_sf(x: float, df: float) -> float:
    return survival(DistRef("student-t", df), x)


def chi_square_sf(x: float, df: float) -> float:
    return survival(DistRef("chi-square", df), x)


def f_sf(x: float, df1: float, df2: float) -> float:
    return survival(DistRef("f", df1, df2), x)


@dataclass(frozen=True)
class CriticalValueTable:
    """Finite-sample critical values for one test and deterministic spec.

    ``entries`` maps (sample_size, level) -> critical value; sample_size
    ``inf`` holds the asymptotic row. Lookups interpolate linearly in 1/T
    between the bracketing rows.
    """

    test: str
    deterministic_spec: str
    entries: dict[tuple[float, float], float]

    def levels(self) -> tuple[float, ...]:
        return tuple(sorted({lv for (_, lv) in self.entries}))

    def sample_sizes(self) -> list[float]:
        return sorted({t for (t, _) in self.entries})

    def value(self, sample_size: float, level: float) -> float:
        if level not in self.levels():
            raise DomainError(f"{self.test}: unsupported level {level}; table has {self.levels()}")
        grid = self.sample_sizes()
        if sample_size <= 0:
            raise DomainError(f"{self.test}: sample size must be positive")
        if sample_size <= grid[0]:
            return self.entries[(grid[0], level)]
        u = 1.0 / sample_size
        # grid is ascending in T, so descending in u = 1/T
        for t_lo, t_hi in zip(grid[:-1], grid[1:]):
            u_hi, u_lo = 1.0 / t_lo, (0.0 if math.isinf(t_hi) else 1.0 / t_hi)
            if u_lo <= u <= u_hi:
                v_lo = self.entries[(t_hi, level)]
                v_hi = self.entries[(t_lo, level)]
                if u_hi == u_lo:
                    return v_lo
                w = (u - u_lo) / (u_hi - u_lo)
                return v_lo + w * (v_hi - v_lo)
        return self.entries[(grid[-1], level)]


# Dickey-Fuller tau response surfaces, cv = b0 + b1/T + b2/T^2 + b3/T^3
# (Cheung & Lai 1995 / MacKinnon 2010 finite-sample results).
_ADF_SURFACE = {
    "none": {
        0.01: (-2.56574, -2.2358, -3.627, 0.0),
        0.05: (-1.94100, -0.2686, -3.365, 31.223),
        0.10: (-1.61682, 0.2656, -2.714, 25.364),
    },
    "constant": {
        0.01: (-3.43035, -6.5393, -16.786, -79.433),
        0.05: (-2.86154, -2.8903, -4.234, -40.040),
        0.10: (-2.56677, -1.5384, -2.809, 0.0),
    },
    "constant+trend": {
        0.01: (-3.95877, -9.0531, -28.428, -134.155),
        0.05: (-3.41049, -4.3904, -9.036, -45.374),
        0.10: (-3.12705, -2.5856, -3.925, -22.380),
    },
}

_ADF_T_GRID = (10, 12, 15, 18, 22, 25, 30, 35, 40, 50, 60, 75, 100, 150, 250, 500, math.inf)


def _surface_cv(coef: tuple[float, float, float, float], T: float) -> float:
    b0, b1, b2, b3 = coef
    if math.isinf(T):
        return b0
    return b0 + b1 / T + b2 / T**2 + b3 / T**3


def _build_adf_table(spec: str) -> CriticalValueTable:
    entries = {}
    for level, coef in _ADF_SURFACE[spec].items():
        for T in _ADF_T_GRID:
            entries[(float(T), level)] = round(_surface_cv(coef, T), 5)
    return CriticalValueTable("adf", spec, entries)


ADF_TABLES = {spec: _build_adf_table(spec) for spec in _ADF_SURFACE}

# Kwiatkowski-Phillips-Schmidt-Shin asymptotic critical values.
KPSS_TABLES = {
    "level": CriticalValueTable(
        "kpss", "constant", {(math.inf, 0.10): 0.347, (math.inf, 0.05): 0.463, (math.inf, 0.01): 0.739}
    ),
    "trend": CriticalValueTable(
        "kpss", "constant+trend", {(math.inf, 0.10): 0.119, (math.inf, 0.05): 0.146, (math.inf, 0.01): 0.216}
    ),
}

# Brown-Durbin-Evans boundary coefficients for the recursive-residual
# cumulative-sum test.
CUSUM_COEFFICIENTS = CriticalValueTable(
    "cusum-coefficient",
    "none",
    {(math.inf, 0.01): 1.143, (math.inf, 0.05): 0.948, (math.inf, 0.10): 0.850},
)


def adf_critical_value(T: float, level: float, spec: str = "constant") -> float:
    """Finite-sample Dickey-Fuller tau critical value for ``T`` observations."""
    if spec not in ADF_TABLES:
        raise DomainError(f"unknown deterministic spec {spec!r}; expected one of {tuple(ADF_TABLES)}")
    if not T >= 10:
        raise DomainError(f"adf critical values need T >= 10, got {T}")
    return ADF_TABLES[spec].value(float(T), level)


def kpss_critical_value(level: float, spec: str = "level") -> float:
    """Asymptotic KPSS critical value (``level`` or ``trend`` stationarity)."""
    if spec not in KPSS_TABLES:
        raise DomainError(f"unknown KPSS spec {spec!r}; expected 'level' or 'trend'")
    return KPSS_TABLES[spec].value(math.inf, level)


def cusum_coefficient(level: float) -> float:
    """Boundary slope coefficient for the CUSUM stability test."""
    return CUSUM_COEFFICIENTS.value(math.inf, level)
