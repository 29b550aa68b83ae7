"""Engle-Granger two-step cointegration and CUSUM parameter stability.

The cointegration verdict follows a hybrid rule over the residuals of the
static regression: cointegrated only when the ADF test rejects a unit root
AND the KPSS test does not reject stationarity; the reverse pair is
not-cointegrated; anything else is conflicting evidence. Residual tests run
without deterministic terms because static-fit residuals are mean-zero by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import LEVELS, adf_critical_value, cusum_coefficient
from .errors import DegenerateStatisticError, DomainError
from .linreg import Design, OlsFit, ols_fit, recursive_residuals
from .testresult import TestResult, decisions_from_lower_tail
from .unitroot import AdfResult, AdfSpec, adf_test, kpss_test

CRITICAL_VALUE_MODES = ("paper-adf", "engle-granger")

# Residual-based cointegration critical values (constant in the static
# regression), by the number of variables in the cointegrating relation.
# Response-surface form b0 + b1/T + b2/T^2, MacKinnon (2010)-style; N=1 is
# the plain Dickey-Fuller constant case and is handled by the ADF table.
_EG_SURFACE = {
    2: {0.01: (-3.89644, -10.9519, -22.527), 0.05: (-3.33613, -6.1101, -6.823), 0.10: (-3.04445, -4.2412, -2.720)},
    3: {0.01: (-4.29374, -14.4354, -33.195), 0.05: (-3.74066, -8.5632, -10.852), 0.10: (-3.45218, -6.2143, -3.718)},
    4: {0.01: (-4.64332, -18.1031, -37.972), 0.05: (-4.09600, -11.2349, -11.175), 0.10: (-3.81020, -8.3931, -4.137)},
    5: {0.01: (-4.95756, -21.8883, -45.142), 0.05: (-4.41519, -14.0406, -12.575), 0.10: (-4.13157, -10.7417, -3.784)},
    6: {0.01: (-5.24568, -25.6688, -57.737), 0.05: (-4.70693, -16.9178, -17.492), 0.10: (-4.42501, -13.1875, -5.104)},
}


def engle_granger_critical_value(T: float, level: float, n_variables: int) -> float:
    """Critical value for a residual ADF with estimated cointegrating vector."""
    if level not in LEVELS:
        raise DomainError(f"unsupported level {level}")
    if n_variables < 2:
        raise DomainError("cointegration needs at least 2 variables")
    n = min(n_variables, max(_EG_SURFACE))
    b0, b1, b2 = _EG_SURFACE[n][level]
    return b0 + b1 / T + b2 / T**2


def hybrid_verdict(adf_rejects_unit_root: bool, kpss_rejects_stationarity: bool) -> str:
    """Three-valued decision rule combining the two residual tests."""
    if adf_rejects_unit_root and not kpss_rejects_stationarity:
        return "cointegrated"
    if not adf_rejects_unit_root and kpss_rejects_stationarity:
        return "not-cointegrated"
    return "conflicting-evidence"


@dataclass(frozen=True)
class CointegrationResult:
    static_fit: OlsFit
    residual_adf: AdfResult
    residual_kpss: TestResult
    verdict: str
    critical_value_mode: str
    level: float

    @property
    def cointegrated(self) -> bool:
        return self.verdict == "cointegrated"


def engle_granger(d: Design, mode: str = "paper-adf", level: float = 0.05) -> CointegrationResult:
    """Two-step test: static OLS fit, then joint ADF/KPSS verdict on residuals."""
    if mode not in CRITICAL_VALUE_MODES:
        raise DomainError(f"unknown critical-value mode {mode!r}; expected one of {CRITICAL_VALUE_MODES}")
    if level not in LEVELS:
        raise DomainError(f"unsupported level {level}")
    fit = ols_fit(d)
    resid = fit.residuals

    adf = adf_test(resid, AdfSpec(deterministic="none", max_lag="auto", selection="sic"))
    if mode == "paper-adf":
        cvs = {lv: adf_critical_value(adf.effective_n, lv, "constant") for lv in LEVELS}
    else:
        n_vars = 1 + len(d.regressors)
        cvs = {lv: engle_granger_critical_value(adf.effective_n, lv, n_vars) for lv in LEVELS}
    adf = AdfResult(
        statistic=adf.statistic,
        chosen_lag=adf.chosen_lag,
        critical_values=cvs,
        p_bracket=adf.p_bracket,
        p_value_approx=adf.p_value_approx,
        gamma_hat=adf.gamma_hat,
        regression=adf.regression,
        deterministic=adf.deterministic,
        effective_n=adf.effective_n,
        decision_at=decisions_from_lower_tail(adf.statistic, cvs),
    )

    kpss = kpss_test(resid, spec="level", bandwidth="auto")

    verdict = hybrid_verdict(adf.rejects(level), kpss.rejects(level))

    return CointegrationResult(
        static_fit=fit,
        residual_adf=adf,
        residual_kpss=kpss,
        verdict=verdict,
        critical_value_mode=mode,
        level=level,
    )


@dataclass(frozen=True)
class CusumResult:
    """Cumulative sum of scaled recursive residuals with significance bounds.

    ``psi`` runs over t = k+1..T; ``t_index`` holds those positions
    (1-based). Boundaries are the straight lines +-a*(sqrt(T-k)
    + 2(t-k)/sqrt(T-k)) evaluated on the same grid.
    """

    psi: np.ndarray
    t_index: np.ndarray
    sigma_hat: float
    upper: np.ndarray
    lower: np.ndarray
    level: float
    n: int
    k: int
    breach: bool
    first_breach_t: int | None

    @property
    def scaled_recursive_residuals(self) -> np.ndarray:
        return np.diff(np.concatenate([[0.0], self.psi]))


def cusum_bounds(T: int, k: int, level: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Boundary lines over t = k..T (the plotting range, start point included)."""
    if T <= k:
        raise DomainError(f"need T > k, got T={T}, k={k}")
    a = cusum_coefficient(level)
    t = np.arange(k, T + 1, dtype=float)
    root = math.sqrt(T - k)
    upper = a * (root + 2.0 * (t - k) / root)
    return upper, -upper


def cusum(d: Design, level: float = 0.05) -> CusumResult:
    """Brown-Durbin-Evans CUSUM test of coefficient stability."""
    w = recursive_residuals(d)
    T, k = d.n, d.k
    sigma = math.sqrt(ols_fit(d).rss / (T - k))
    if sigma == 0.0:
        raise DegenerateStatisticError("perfect fit: sigma_hat is zero, CUSUM undefined")
    psi = np.cumsum(w) / sigma
    upper_full, lower_full = cusum_bounds(T, k, level)
    upper, lower = upper_full[1:], lower_full[1:]  # align to t = k+1..T
    over = np.abs(psi) > upper
    breach = bool(over.any())
    first = int(np.argmax(over)) + k + 1 if breach else None
    return CusumResult(
        psi=psi,
        t_index=np.arange(k + 1, T + 1),
        sigma_hat=sigma,
        upper=upper,
        lower=lower,
        level=level,
        n=T,
        k=k,
        breach=breach,
        first_breach_t=first,
    )
