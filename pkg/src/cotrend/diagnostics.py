"""Residual and specification diagnostics for a fitted linear model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DistRef, chi_square_sf, f_sf, student_t_sf
from .errors import DegenerateSeriesError, DomainError, PreconditionError
from .linreg import Design, OlsFit, ols_fit_xy
from .series import Frame
from .testresult import Statistic, TestResult, decisions_from_p


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.labels), len(self.labels)):
            raise DomainError("correlation matrix shape does not match labels")
        object.__setattr__(self, "values", v)

    def r(self, a: str, b: str) -> float:
        return float(self.values[self.labels.index(a), self.labels.index(b)])

    def lower_triangle(self):
        """Rows of (label, [r against earlier labels + unit diagonal])."""
        out = []
        for i, lab in enumerate(self.labels):
            out.append((lab, [float(self.values[i, j]) for j in range(i + 1)]))
        return out


def pearson_matrix(f: Frame, order: list[str] | None = None) -> CorrelationMatrix:
    """Pairwise Pearson correlations of the frame's series."""
    labels = list(order) if order is not None else f.names
    if len(labels) < 2:
        raise PreconditionError("need at least 2 series for a correlation matrix")
    data = np.column_stack([f[name].values for name in labels])
    sd = data.std(axis=0)
    for j, name in enumerate(labels):
        if sd[j] == 0.0:
            raise DegenerateSeriesError(f"series {name!r} has zero variance")
    r = np.corrcoef(data, rowvar=False)
    r = np.clip(r, -1.0, 1.0)
    np.fill_diagonal(r, 1.0)
    r = (r + r.T) / 2.0
    return CorrelationMatrix(tuple(labels), r)


def _check_fit_matches(fit: OlsFit, d: Design):
    if fit.n != d.n or fit.k != d.k or tuple(d.names) != fit.names:
        raise PreconditionError("fit does not correspond to the given design")


def breusch_pagan(fit: OlsFit, d: Design) -> TestResult:
    """Heteroskedasticity test: squared residuals regressed on the regressors.

    Reports the LM form n*R^2 ~ chi2(k_aux) and the auxiliary joint-F form
    ~ F(k_aux, n - k_aux - 1).
    """
    _check_fit_matches(fit, d)
    if not d.regressors:
        raise PreconditionError("breusch-pagan needs at least one non-intercept regressor")
    n = d.n
    k_aux = len(d.regressors)
    Z = np.column_stack([np.ones(n)] + [s.values for s in d.regressors])
    aux = ols_fit_xy(fit.residuals**2, Z, ["const"] + [s.name for s in d.regressors])
    lm = n * aux.r2
    lm_p = chi_square_sf(lm, k_aux)
    df2 = n - k_aux - 1
    if aux.r2 >= 1.0:
        f_val, f_p = math.inf, 0.0
    else:
        f_val = (aux.r2 / k_aux) / ((1.0 - aux.r2) / df2)
        f_p = f_sf(f_val, k_aux, df2)
    stats = (
        Statistic("LM", lm, DistRef("chi-square", k_aux), (k_aux,), lm_p),
        Statistic("F", f_val, DistRef("f", k_aux, df2), (k_aux, df2), f_p),
    )
    return TestResult(
        test_name="breusch-pagan",
        null_hypothesis="homoscedasticity",
        statistics=stats,
        decision_at=decisions_from_p(lm_p),
    )


def breusch_godfrey(fit: OlsFit, d: Design, order: int = 2) -> TestResult:
    """Serial-correlation LM test with ``order`` residual lags (pre-sample lags zero)."""
    _check_fit_matches(fit, d)
    if order < 1:
        raise PreconditionError(f"lag order must be >= 1, got {order}")
    n, k = d.n, d.k
    if order >= n - k:
        raise PreconditionError(f"lag order {order} too large for n={n}, k={k}")
    e = fit.residuals
    lags = np.zeros((n, order))
    for j in range(1, order + 1):
        lags[j:, j - 1] = e[:-j]
    Z = np.column_stack([d.matrix(), lags])
    names = d.names + [f"resid.l{j}" for j in range(1, order + 1)]
    aux = ols_fit_xy(e, Z, names, has_intercept=d.intercept)
    lm = n * aux.r2
    lm_p = chi_square_sf(lm, order)
    df2 = n - k - order
    if aux.r2 >= 1.0:
        f_val, f_p = math.inf, 0.0
    else:
        f_val = (aux.r2 / order) / ((1.0 - aux.r2) / df2)
        f_p = f_sf(f_val, order, df2)
    stats = (
        Statistic("LM", lm, DistRef("chi-square", order), (order,), lm_p),
        Statistic("F", f_val, DistRef("f", order, df2), (order, df2), f_p),
    )
    return TestResult(
        test_name="breusch-godfrey",
        null_hypothesis="no serial correlation",
        statistics=stats,
        decision_at=decisions_from_p(lm_p),
    )


def jarque_bera(x: np.ndarray) -> TestResult:
    """Normality test from sample skewness and kurtosis (/n moment estimators)."""
    v = np.asarray(x, dtype=float)
    n = v.size
    if n < 4:
        raise PreconditionError(f"need at least 4 observations, got {n}")
    centered = v - v.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        raise DegenerateSeriesError("zero variance; normality test undefined")
    skew = float(np.mean(centered**3)) / m2**1.5
    kurt = float(np.mean(centered**4)) / m2**2
    jb = (n / 6.0) * (skew**2 + (kurt - 3.0) ** 2 / 4.0)
    p = chi_square_sf(jb, 2)
    stat = Statistic("JB", jb, DistRef("chi-square", 2), (2,), p)
    return TestResult(
        test_name="jarque-bera",
        null_hypothesis="normality",
        statistics=(stat,),
        decision_at=decisions_from_p(p),
    )


def ramsey_reset(fit: OlsFit, d: Design, max_power: int = 2) -> TestResult:
    """Specification test: do powers of the fitted values add explanatory power?

    Powers 2..max_power of the standardized fitted values are appended to the
    design (standardizing first keeps the augmented matrix well conditioned;
    it does not change the test because the fitted values already lie in the
    regressor span). Reports F, the added-term t when a single power is
    added, and the LR form n*ln(RSS_r/RSS_u) ~ chi2(#added).
    """
    _check_fit_matches(fit, d)
    if max_power < 2:
        raise PreconditionError(f"max_power must be >= 2, got {max_power}")
    yhat = fit.fitted
    sd = yhat.std()
    if sd == 0.0:
        raise DegenerateSeriesError("fitted values are constant; RESET undefined")
    z = (yhat - yhat.mean()) / sd
    added = max_power - 1
    powers = np.column_stack([z**p for p in range(2, max_power + 1)])
    Z = np.column_stack([d.matrix(), powers])
    names = d.names + [f"fitted^{p}" for p in range(2, max_power + 1)]
    aux = ols_fit_xy(d.y, Z, names, has_intercept=d.intercept)

    n = d.n
    df2 = n - d.k - added
    rss_r, rss_u = fit.rss, aux.rss
    if rss_u <= 0.0:
        f_val, f_p = math.inf, 0.0
        lr = math.inf
        lr_p = 0.0
    else:
        f_val = max(rss_r - rss_u, 0.0) / added / (rss_u / df2)
        f_p = f_sf(f_val, added, df2)
        lr = n * math.log(max(rss_r / rss_u, 1.0))
        lr_p = chi_square_sf(lr, added)
    stats = [Statistic("F", f_val, DistRef("f", added, df2), (added, df2), f_p)]
    if added == 1:
        t_val = float(aux.t_stats[-1])
        if math.isfinite(t_val):
            t_p = 2.0 * student_t_sf(abs(t_val), df2)
            stats.append(Statistic("t", t_val, DistRef("student-t", df2), (df2,), t_p))
    stats.append(Statistic("LR", lr, DistRef("chi-square", added), (added,), lr_p))
    return TestResult(
        test_name="ramsey-reset",
        null_hypothesis="the model is well-specified (no omitted nonlinearity)",
        statistics=tuple(stats),
        decision_at=decisions_from_p(f_p),
    )
