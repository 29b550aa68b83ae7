"""Ordinary least squares: estimation, fit statistics, recursive residuals.

The solver uses a QR decomposition of the column-scaled design matrix; the
normal equations are never formed for the point estimates. Rank problems are
reported by naming the offending column, which matters here because annual
socio-economic regressors are routinely near-collinear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .distributions import DistRef, f_sf, student_t_sf
from .errors import (
    DegenerateStatisticError,
    DomainError,
    PreconditionError,
    SingularDesignError,
    SingularPrefixError,
)
from .series import AnnualSeries
from .testresult import Statistic, TestResult, decisions_from_p

CONDITION_LIMIT = 1e12

# Residual sum of squares below this (relative to the response scale) is
# treated as an exact fit: F and t lose meaning and become sentinels.
_PERFECT_RTOL = 1e-12


@dataclass(frozen=True)
class Design:
    """Response plus ordered regressors, year-aligned and complete."""

    response: AnnualSeries
    regressors: tuple[AnnualSeries, ...]
    intercept: bool = True

    def __post_init__(self):
        object.__setattr__(self, "regressors", tuple(self.regressors))
        if not self.regressors and not self.intercept:
            raise DomainError("design needs at least one regressor or an intercept")
        span = (self.response.start_year, self.response.end_year)
        for s in (self.response, *self.regressors):
            if not s.is_complete():
                raise PreconditionError(f"series {s.name!r} has missing values; interpolate before fitting")
            if (s.start_year, s.end_year) != span:
                raise DomainError(
                    f"series {s.name!r} covers {s.start_year}..{s.end_year}, response covers {span[0]}..{span[1]}"
                )
        names = [s.name for s in self.regressors]
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate regressor names in {names}")
        if self.n <= self.k:
            raise PreconditionError(f"need more observations ({self.n}) than parameters ({self.k})")

    @property
    def n(self) -> int:
        return len(self.response)

    @property
    def k(self) -> int:
        return len(self.regressors) + (1 if self.intercept else 0)

    @property
    def names(self) -> list[str]:
        base = ["const"] if self.intercept else []
        return base + [s.name for s in self.regressors]

    def matrix(self) -> np.ndarray:
        cols = []
        if self.intercept:
            cols.append(np.ones(self.n))
        cols.extend(s.values for s in self.regressors)
        return np.column_stack(cols)

    @property
    def y(self) -> np.ndarray:
        return self.response.values


@dataclass(frozen=True)
class OlsFit:
    """Immutable result of one least-squares fit."""

    names: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    r2: float
    adj_r2: float
    f_stat: float
    f_prob: float
    sic: float
    dw: float
    n: int
    k: int
    rss: float
    tss: float
    has_intercept: bool
    response_name: str = "y"

    @property
    def df_resid(self) -> int:
        return self.n - self.k

    @property
    def sigma2(self) -> float:
        return self.rss / self.df_resid

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def is_perfect(self) -> bool:
        return self.rss <= _PERFECT_RTOL**2 * max(self.tss, float(np.dot(self.fitted, self.fitted)), 1e-300)


def _qr_solve(X: np.ndarray, y: np.ndarray, names: list[str]):
    """Scaled QR solve; returns (beta, xtx_inv, rss, fitted, residuals)."""
    n, k = X.shape
    scale = np.sqrt((X * X).sum(axis=0))
    scale[scale == 0.0] = 1.0
    Xs = X / scale
    q, r = np.linalg.qr(Xs)
    diag = np.abs(np.diag(r))
    dmax = diag.max() if diag.size else 0.0
    cond = np.inf if diag.min() == 0.0 else np.linalg.cond(Xs)
    if cond > CONDITION_LIMIT:
        worst = int(np.argmin(diag / (dmax if dmax > 0 else 1.0)))
        raise SingularDesignError(
            f"design is rank deficient (condition {cond:.3g} > {CONDITION_LIMIT:.0g}); "
            f"column {names[worst]!r} is (nearly) a linear combination of the others",
            column=names[worst],
        )
    beta_s = solve_triangular(r, q.T @ y)
    beta = beta_s / scale
    rinv = solve_triangular(r, np.eye(k))
    xtx_inv = (rinv @ rinv.T) / np.outer(scale, scale)
    fitted = X @ beta
    residuals = y - fitted
    return beta, xtx_inv, float(residuals @ residuals), fitted, residuals


def ols_fit_xy(
    y: np.ndarray,
    X: np.ndarray,
    names: list[str] | None = None,
    has_intercept: bool = True,
    response_name: str = "y",
) -> OlsFit:
    """Fit y on a prepared design matrix X (intercept column included by caller)."""
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise DomainError(f"shape mismatch: X {X.shape}, y {y.shape}")
    n, k = X.shape
    if n <= k:
        raise PreconditionError(f"need more observations ({n}) than parameters ({k})")
    names = list(names) if names is not None else [f"x{i}" for i in range(k)]

    beta, xtx_inv, rss, fitted, residuals = _qr_solve(X, y, names)

    if has_intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)

    perfect = rss <= _PERFECT_RTOL**2 * max(tss, float(y @ y), 1e-300)
    sigma2 = rss / (n - k)
    se = np.sqrt(np.clip(np.diag(xtx_inv), 0.0, None) * sigma2)

    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / np.where(se > 0, se, 1.0), np.where(beta == 0, np.nan, np.inf * np.sign(beta)))
    p = np.array([2.0 * student_t_sf(abs(v), n - k) if math.isfinite(v) else (math.nan if math.isnan(v) else 0.0) for v in t])

    if tss > 0:
        r2 = 1.0 - rss / tss
        r2 = min(max(r2, 0.0), 1.0)
    else:
        r2 = 1.0 if perfect else 0.0
    denom = n - k
    adj_factor = (n - 1) / denom if has_intercept else n / denom
    adj_r2 = 1.0 - (1.0 - r2) * adj_factor

    if has_intercept and k > 1:
        if perfect:
            f_stat, f_prob = math.inf, 0.0
        else:
            num = max(tss - rss, 0.0) / (k - 1)
            f_stat = num / sigma2
            f_prob = f_sf(f_stat, k - 1, n - k)
    else:
        f_stat, f_prob = math.nan, math.nan

    sic_val = _sic_from_rss(rss, n, k)
    dw = _dw_or_nan(residuals)

    return OlsFit(
        names=tuple(names),
        coefficients=beta,
        std_errors=se,
        t_stats=t,
        p_values=p,
        residuals=residuals,
        fitted=fitted,
        r2=float(r2),
        adj_r2=float(adj_r2),
        f_stat=float(f_stat),
        f_prob=float(f_prob),
        sic=sic_val,
        dw=dw,
        n=n,
        k=k,
        rss=rss,
        tss=tss,
        has_intercept=has_intercept,
        response_name=response_name,
    )


def ols_fit(d: Design) -> OlsFit:
    """Estimate the linear model described by ``d``."""
    return ols_fit_xy(d.y, d.matrix(), d.names, d.intercept, d.response.name)


def f_test_joint(fit: OlsFit) -> TestResult:
    """Joint significance test against the intercept-only model."""
    if not fit.has_intercept:
        raise PreconditionError("joint F test requires a model with an intercept")
    if fit.k < 2:
        raise PreconditionError("joint F test requires at least one non-intercept regressor")
    df1, df2 = fit.k - 1, fit.n - fit.k
    if fit.is_perfect():
        f_val, p = math.inf, 0.0
    else:
        f_val = ((fit.tss - fit.rss) / df1) / (fit.rss / df2)
        f_val = max(f_val, 0.0)
        p = f_sf(f_val, df1, df2)
    stat = Statistic("F", f_val, DistRef("f", df1, df2), (df1, df2), p)
    return TestResult(
        test_name="joint-significance-F",
        null_hypothesis="all non-intercept coefficients are zero",
        statistics=(stat,),
        decision_at=decisions_from_p(p),
    )


def _sic_from_rss(rss: float, n: int, k: int) -> float:
    if rss <= 0.0:
        return -math.inf
    return math.log(rss / n) + k * math.log(n) / n


def sic(fit: OlsFit) -> float:
    """Schwarz criterion ln(RSS/n) + k ln(n)/n; no additive constants."""
    return _sic_from_rss(fit.rss, fit.n, fit.k)


def _dw_or_nan(e: np.ndarray) -> float:
    denom = float(e @ e)
    if denom == 0.0 or e.size < 2:
        return math.nan
    return float(np.sum(np.diff(e) ** 2) / denom)


def durbin_watson(residuals: np.ndarray) -> float:
    """Durbin-Watson first-order autocorrelation statistic."""
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise DomainError(f"need at least 2 residuals, got {e.size}")
    if float(e @ e) == 0.0:
        raise DegenerateStatisticError("all residuals are zero; Durbin-Watson undefined")
    return _dw_or_nan(e)


def recursive_residuals_xy(y: np.ndarray, X: np.ndarray, names: list[str] | None = None) -> np.ndarray:
    """Standardized one-step-ahead prediction errors w_t for t = k+1..T.

    Uses rank-one updates of the prefix inverse Gram matrix; agrees with
    refitting each prefix from scratch to floating-point accuracy.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    n, k = X.shape
    if n <= k:
        raise PreconditionError(f"need more observations ({n}) than parameters ({k})")
    names = list(names) if names is not None else [f"x{i}" for i in range(k)]

    head = X[:k]
    scale = np.sqrt((head * head).sum(axis=0))
    scale[scale == 0.0] = 1.0
    cond = np.linalg.cond(head / scale)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularPrefixError(
            f"leading {k}x{k} sub-design is singular (condition {cond:.3g}); "
            "recursive residuals start undefined",
            t=k,
        )

    p_mat = np.linalg.inv(head.T @ head)
    b = p_mat @ head.T @ y[:k]
    w = np.empty(n - k)
    for t in range(k, n):
        x = X[t]
        px = p_mat @ x
        denom = 1.0 + float(x @ px)
        err = y[t] - float(x @ b)
        w[t - k] = err / math.sqrt(denom)
        b = b + px * (err / denom)
        p_mat = p_mat - np.outer(px, px) / denom
    return w


def recursive_residuals(d: Design) -> np.ndarray:
    """Recursive residuals of a design (length n - k)."""
    return recursive_residuals_xy(d.y, d.matrix(), d.names)
