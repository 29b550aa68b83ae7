"""Augmented Dickey-Fuller and KPSS tests with SIC-based lag selection.

The ADF regression is dy_t = [const] + [trend] + gamma*y_{t-1}
+ sum(delta_i * dy_{t-i}) + e_t; the reported statistic is the t-ratio on
gamma, compared against embedded finite-sample critical values. Because the
statistic's null law is nonstandard, p-values are reported as table brackets
plus an approximate point estimate from normal-quantile interpolation
between the bracketing critical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .distributions import LEVELS, adf_critical_value, kpss_critical_value
from .errors import DegenerateSeriesError, DomainError, PreconditionError, SingularDesignError
from .linreg import OlsFit, ols_fit_xy, _sic_from_rss
from .testresult import Statistic, TestResult, decisions_from_lower_tail, decisions_from_upper_tail

DETERMINISTIC_SPECS = ("none", "constant", "constant+trend")


@dataclass(frozen=True)
class AdfSpec:
    """Configuration of one ADF run."""

    deterministic: str = "constant"
    max_lag: int | str = "auto"
    selection: str = "sic"

    def __post_init__(self):
        if self.deterministic not in DETERMINISTIC_SPECS:
            raise DomainError(f"unknown deterministic spec {self.deterministic!r}")
        if self.selection not in ("sic", "fixed"):
            raise DomainError(f"unknown lag selection {self.selection!r}")
        if self.max_lag != "auto" and (not isinstance(self.max_lag, int) or self.max_lag < 0):
            raise DomainError(f"max_lag must be 'auto' or a non-negative integer, got {self.max_lag!r}")

    def resolve_max_lag(self, T: int) -> int:
        n_det = {"none": 0, "constant": 1, "constant+trend": 2}[self.deterministic]
        # estimability: the common selection sample must keep df > 0 at the
        # largest candidate
        df_bound = (T - 3 - n_det) // 2
        if self.max_lag == "auto":
            schwert = int(12 * (T / 100.0) ** 0.25)
            bound = min(schwert, df_bound, (T - 1) // 3)
            return max(bound, 0)
        if self.max_lag * 3 >= T:
            raise PreconditionError(f"max_lag {self.max_lag} violates max_lag < T/3 with T={T}")
        if self.max_lag > df_bound:
            raise PreconditionError(f"max_lag {self.max_lag} leaves no residual degrees of freedom (T={T})")
        return self.max_lag


@dataclass(frozen=True)
class AdfResult:
    """ADF outcome; ``statistic`` is gamma_hat / SE(gamma_hat) of ``regression``."""

    statistic: float
    chosen_lag: int
    critical_values: dict[float, float]
    p_bracket: str
    p_value_approx: float
    gamma_hat: float
    regression: OlsFit
    deterministic: str
    effective_n: int
    decision_at: dict[float, str]

    def rejects(self, level: float = 0.05) -> bool:
        return self.decision_at[level] == "reject"


def _adf_design(y: np.ndarray, lag: int, deterministic: str, drop: int):
    """Rows of the test regression, skipping the first ``drop`` differences."""
    T = y.size
    dy = np.diff(y)
    rows = np.arange(drop, T - 1)  # dy indices used as response
    cols = []
    names = []
    if deterministic in ("constant", "constant+trend"):
        cols.append(np.ones(rows.size))
        names.append("const")
    if deterministic == "constant+trend":
        cols.append(rows.astype(float) + 1.0)
        names.append("trend")
    cols.append(y[rows])
    names.append("y.l1")
    gamma_index = len(names) - 1
    for i in range(1, lag + 1):
        cols.append(dy[rows - i])
        names.append(f"dy.l{i}")
    X = np.column_stack(cols)
    return dy[rows], X, names, gamma_index


def _fit_adf(y: np.ndarray, lag: int, deterministic: str, drop: int) -> tuple[OlsFit, int]:
    resp, X, names, gamma_index = _adf_design(y, lag, deterministic, drop)
    try:
        fit = ols_fit_xy(resp, X, names, has_intercept=deterministic != "none", response_name="d(y)")
    except SingularDesignError as exc:
        raise DegenerateSeriesError(f"ADF regression is degenerate: {exc}") from exc
    return fit, gamma_index


def _check_series(y: np.ndarray, caller: str) -> np.ndarray:
    v = np.asarray(y, dtype=float)
    if v.ndim != 1:
        raise DomainError(f"{caller}: series must be 1-d")
    if v.size < 10:
        raise PreconditionError(f"{caller}: need at least 10 observations, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise PreconditionError(f"{caller}: series must be complete and finite")
    return v


def select_lag_sic(y: np.ndarray, spec: AdfSpec = AdfSpec()) -> int:
    """Smallest-SIC lag order, all candidates fitted on a common sample."""
    v = _check_series(y, "select_lag_sic")
    max_lag = spec.resolve_max_lag(v.size)
    if max_lag == 0:
        return 0
    best_lag, best_sic = 0, math.inf
    for p in range(0, max_lag + 1):
        fit, _ = _fit_adf(v, p, spec.deterministic, drop=max_lag)
        val = _sic_from_rss(fit.rss, fit.n, fit.k)
        if val < best_sic - 1e-12:
            best_lag, best_sic = p, val
    return best_lag


def adf_test(y: np.ndarray, spec: AdfSpec = AdfSpec()) -> AdfResult:
    """ADF unit-root test (H0: unit root, H1: stationary)."""
    v = _check_series(y, "adf_test")
    if spec.selection == "sic":
        lag = select_lag_sic(v, spec)
    else:
        lag = spec.resolve_max_lag(v.size)
    fit, gi = _fit_adf(v, lag, spec.deterministic, drop=lag)
    gamma = float(fit.coefficients[gi])
    se = float(fit.std_errors[gi])
    if se == 0.0 or not math.isfinite(se):
        raise DegenerateSeriesError("ADF regression fits exactly; statistic undefined")
    stat = gamma / se
    n_eff = fit.n
    cvs = {lv: adf_critical_value(n_eff, lv, spec.deterministic) for lv in LEVELS}
    return AdfResult(
        statistic=stat,
        chosen_lag=lag,
        critical_values=cvs,
        p_bracket=_lower_tail_bracket(stat, cvs),
        p_value_approx=_interp_p(stat, cvs, lower_tail=True),
        gamma_hat=gamma,
        regression=fit,
        deterministic=spec.deterministic,
        effective_n=n_eff,
        decision_at=decisions_from_lower_tail(stat, cvs),
    )


def kpss_test(y: np.ndarray, spec: str = "level", bandwidth: int | str = "auto") -> TestResult:
    """KPSS stationarity test (H0: stationary around the chosen deterministic part)."""
    v = _check_series(y, "kpss_test")
    if spec not in ("level", "trend"):
        raise DomainError(f"unknown KPSS spec {spec!r}; expected 'level' or 'trend'")
    T = v.size
    if spec == "level":
        e = v - v.mean()
    else:
        t = np.arange(1.0, T + 1.0)
        Z = np.column_stack([np.ones(T), t])
        e = v - Z @ np.linalg.lstsq(Z, v, rcond=None)[0]

    if bandwidth == "auto":
        m = int(4 * (T / 100.0) ** 0.25)
    else:
        if not isinstance(bandwidth, int) or bandwidth < 0:
            raise DomainError(f"bandwidth must be 'auto' or a non-negative integer, got {bandwidth!r}")
        m = bandwidth
    m = min(m, T - 1)

    gamma0 = float(e @ e) / T
    lrv = gamma0
    for j in range(1, m + 1):
        w = 1.0 - j / (m + 1.0)
        lrv += 2.0 * w * float(e[j:] @ e[:-j]) / T
    if lrv <= 0.0:
        raise DegenerateSeriesError("long-run variance is not positive; KPSS undefined")

    s = np.cumsum(e)
    stat = float(s @ s) / (T * T * lrv)
    cvs = {lv: kpss_critical_value(lv, spec) for lv in LEVELS}
    res = Statistic("KPSS", stat, None, (), None)
    return TestResult(
        test_name=f"kpss-{spec}",
        null_hypothesis=f"{spec} stationarity",
        statistics=(res,),
        decision_at=decisions_from_upper_tail(stat, cvs),
        critical_values=cvs,
        p_bracket=_upper_tail_bracket(stat, cvs),
    )


def _lower_tail_bracket(stat: float, cvs: dict[float, float]) -> str:
    if stat < cvs[0.01]:
        return "<0.01"
    if stat < cvs[0.05]:
        return "0.01-0.05"
    if stat < cvs[0.10]:
        return "0.05-0.10"
    return ">0.10"


def _upper_tail_bracket(stat: float, cvs: dict[float, float]) -> str:
    if stat > cvs[0.01]:
        return "<0.01"
    if stat > cvs[0.05]:
        return "0.01-0.05"
    if stat > cvs[0.10]:
        return "0.05-0.10"
    return ">0.10"


def _interp_p(stat: float, cvs: dict[float, float], lower_tail: bool) -> float:
    """Approximate p-value: linear in the normal quantile between table anchors."""
    pairs = sorted(((cv, lv) for lv, cv in cvs.items()), key=lambda c: c[0])
    xs = [c for c, _ in pairs]
    zs = [float(ndtri(lv)) for _, lv in pairs]
    if not lower_tail:
        xs, zs = [-x for x in reversed(xs)], list(reversed(zs))
        stat = -stat
    if stat <= xs[0]:
        i = 0
    elif stat >= xs[-1]:
        i = len(xs) - 2
    else:
        i = next(j for j in range(len(xs) - 1) if xs[j] <= stat <= xs[j + 1])
    slope = (zs[i + 1] - zs[i]) / (xs[i + 1] - xs[i])
    z = zs[i] + slope * (stat - xs[i])
    return float(min(max(ndtr(z), 1e-6), 1.0 - 1e-6))
