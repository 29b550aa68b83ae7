"""cotrend: deterministic econometrics for annual time series.

A small library plus CLI covering the full arc of a long-run regression
study: ingestion of delimited annual tables, weighted-moving-average gap
interpolation, Pearson correlations, ADF/KPSS unit-root tests with SIC lag
selection, OLS with residual and specification diagnostics, Engle-Granger
cointegration with a hybrid ADF+KPSS verdict, and CUSUM coefficient
stability, all reproducible bit for bit.
"""

from .cointegration import (
    CointegrationResult,
    CusumResult,
    cusum,
    cusum_bounds,
    engle_granger,
    engle_granger_critical_value,
)
from .diagnostics import (
    CorrelationMatrix,
    breusch_godfrey,
    breusch_pagan,
    jarque_bera,
    pearson_matrix,
    ramsey_reset,
)
from .distributions import (
    CriticalValueTable,
    DistRef,
    adf_critical_value,
    chi_square_sf,
    cusum_coefficient,
    f_sf,
    kpss_critical_value,
    normal_sf,
    student_t_sf,
    survival,
)
from .errors import (
    CotrendError,
    DataError,
    DegenerateSeriesError,
    DegenerateStatisticError,
    DomainError,
    EmptySeriesError,
    ExtrapolationError,
    NumericError,
    ParseError,
    PreconditionError,
    SingularDesignError,
    SingularPrefixError,
    StructureError,
    UsageError,
)
from .linreg import (
    Design,
    OlsFit,
    durbin_watson,
    f_test_joint,
    ols_fit,
    ols_fit_xy,
    recursive_residuals,
    recursive_residuals_xy,
    sic,
)
from .pipeline import RunConfig, load_config, replicate
from .series import (
    AnnualSeries,
    Frame,
    build_frame,
    change_over_period,
    dependency_ratio,
    growth_rate,
    interpolate_missing,
    load_table,
    mean_annual_pct_change,
    real_rate,
)
from .testresult import Statistic, TestResult
from .unitroot import AdfResult, AdfSpec, adf_test, kpss_test, select_lag_sic
from .__about__ import version as __version__

__all__ = [name for name in dir() if not name.startswith("_")]
