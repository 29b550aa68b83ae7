"""Config-driven replication pipeline: ingest, interpolate, analyze, emit.

``replicate`` runs the whole study on one annual dataset and writes a fixed
bundle of report files (table1..table7, figure4, manifest). The run is
deterministic: identical configs produce byte-identical bundles, and the
manifest records the config hash plus a checksum of every file involved.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __about__
from .cointegration import cusum, cusum_bounds, engle_granger
from .diagnostics import breusch_godfrey, breusch_pagan, jarque_bera, pearson_matrix, ramsey_reset
from .errors import CotrendError, UsageError
from .linreg import Design, f_test_joint, ols_fit
from .report import FORMATS, Table, render, render_cusum_figure, suffix_for
from .series import (
    AnnualSeries,
    build_frame,
    change_over_period,
    interpolate_missing,
    load_table,
    mean_annual_pct_change,
    real_rate,
)
from .unitroot import AdfSpec, adf_test

BUILTIN = "builtin"

_LEVELS_OK = (0.01, 0.05, 0.10)


def bundled_path(name: str) -> Path:
    """Path of a data file shipped inside the package."""
    return Path(str(resources.files("cotrend").joinpath("data", name)))


@dataclass(frozen=True)
class RunConfig:
    """Resolved pipeline configuration; every field has a working default."""

    data_path: str = BUILTIN
    rates_path: str = BUILTIN
    demographics_path: str = BUILTIN
    response: str = "Expenditure"
    regressors: tuple[str, ...] = ("Birth", "GDP", "Employment", "Oldies", "Urban")
    year_start: int = 1995
    year_end: int = 2019
    half_window: int = 3
    units: dict[str, str] = field(default_factory=lambda: {"Birth": "per-1000"})
    adf_deterministic: str = "constant"
    adf_deterministic_overrides: dict[str, str] = field(default_factory=dict)
    adf_max_lag: int | str = "auto"
    bg_order: int = 2
    reset_max_power: int = 2
    cusum_level: float = 0.05
    critical_value_mode: str = "paper-adf"
    kpss_bandwidth: int | str = "auto"
    output_dir: str = "cotrend-report"
    output_formats: tuple[str, ...] = ("delimited",)
    figure_render: bool = True
    seed: int = 20240901

    def __post_init__(self):
        if self.response in self.regressors:
            raise UsageError(f"response {self.response!r} cannot also be a regressor")
        if not self.regressors:
            raise UsageError("need at least one regressor")
        if self.year_start > self.year_end:
            raise UsageError(f"year_start {self.year_start} > year_end {self.year_end}")
        if self.cusum_level not in _LEVELS_OK:
            raise UsageError(f"cusum_level must be one of {_LEVELS_OK}")
        for fmt in self.output_formats:
            if fmt not in FORMATS:
                raise UsageError(f"unknown output format {fmt!r}; expected subset of {FORMATS}")
        if not self.output_formats:
            raise UsageError("need at least one output format")

    def deterministic_for(self, variable: str) -> str:
        return self.adf_deterministic_overrides.get(variable, self.adf_deterministic)

    def resolved_path(self, which: str) -> Path:
        value = getattr(self, f"{which}_path")
        if value == BUILTIN:
            return bundled_path({"data": "china.csv", "rates": "china_rates.csv", "demographics": "china_demographics.csv"}[which])
        return Path(value)

    def canonical_items(self) -> list[tuple[str, str]]:
        units = ";".join(f"{k}:{v}" for k, v in sorted(self.units.items()))
        overrides = ";".join(f"{k}:{v}" for k, v in sorted(self.adf_deterministic_overrides.items()))
        return [
            ("data_path", self.data_path),
            ("rates_path", self.rates_path),
            ("demographics_path", self.demographics_path),
            ("response", self.response),
            ("regressors", ",".join(self.regressors)),
            ("years", f"{self.year_start}:{self.year_end}"),
            ("half_window", str(self.half_window)),
            ("units", units),
            ("adf_deterministic", self.adf_deterministic),
            ("adf_deterministic_overrides", overrides),
            ("adf_max_lag", str(self.adf_max_lag)),
            ("bg_order", str(self.bg_order)),
            ("reset_max_power", str(self.reset_max_power)),
            ("cusum_level", f"{self.cusum_level:g}"),
            ("critical_value_mode", self.critical_value_mode),
            ("kpss_bandwidth", str(self.kpss_bandwidth)),
            ("output_formats", ",".join(self.output_formats)),
            ("figure_render", "true" if self.figure_render else "false"),
            ("seed", str(self.seed)),
        ]

    def config_hash(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(text.encode()).hexdigest()


_CONFIG_KEYS = {
    "data_path",
    "rates_path",
    "demographics_path",
    "response",
    "regressors",
    "years",
    "half_window",
    "units",
    "adf_deterministic",
    "adf_max_lag",
    "bg_order",
    "reset_max_power",
    "cusum_level",
    "critical_value_mode",
    "kpss_bandwidth",
    "output_dir",
    "output_formats",
    "figure_render",
    "seed",
}


def load_config(path=None, overrides: dict[str, str] | None = None) -> RunConfig:
    """Read a flat ``key = value`` config file; missing keys keep defaults."""
    raw: dict[str, str] = {}
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = stripped.split("=", 1)
            raw[key.strip()] = value.strip()
    if overrides:
        raw.update(overrides)

    kwargs = {}
    for key, value in raw.items():
        base = key.split(".", 1)[0]
        if base not in _CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        if key.startswith("adf_deterministic."):
            kwargs.setdefault("adf_deterministic_overrides", {})[key.split(".", 1)[1]] = value
            continue
        if key == "years":
            first, _, last = value.partition(":")
            try:
                kwargs["year_start"], kwargs["year_end"] = int(first), int(last)
            except ValueError:
                raise UsageError(f"years must look like 1995:2019, got {value!r}") from None
        elif key == "regressors":
            kwargs["regressors"] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "units":
            pairs = {}
            for item in value.split(","):
                if not item.strip():
                    continue
                name, _, unit = item.partition(":")
                if not unit:
                    raise UsageError(f"units entries must look like Name:unit, got {item!r}")
                pairs[name.strip()] = unit.strip()
            kwargs["units"] = pairs
        elif key == "output_formats":
            kwargs["output_formats"] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key in ("half_window", "bg_order", "reset_max_power", "seed"):
            kwargs[key] = _parse_int(key, value)
        elif key in ("adf_max_lag", "kpss_bandwidth"):
            kwargs[key] = value if value == "auto" else _parse_int(key, value)
        elif key == "cusum_level":
            try:
                kwargs[key] = float(value)
            except ValueError:
                raise UsageError(f"{key} must be a number, got {value!r}") from None
        elif key == "figure_render":
            if value.lower() not in ("true", "false", "yes", "no", "1", "0"):
                raise UsageError(f"figure_render must be boolean, got {value!r}")
            kwargs[key] = value.lower() in ("true", "yes", "1")
        else:
            kwargs[key] = value
    return RunConfig(**kwargs)


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {value!r}") from None


class PipelineError(CotrendError):
    """A stage of the replication pipeline failed."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class ReplicationResult:
    """Everything a caller might want back from one replicate run."""

    paths: tuple[Path, ...]
    config: RunConfig
    frame: object
    fit: object
    joint_f: object
    correlations: object
    adf_results: dict
    bp: object
    bg: object
    jb: object
    coint: object
    reset: object
    cusum_result: object


def _apply_units(series: dict[str, AnnualSeries], units: dict[str, str]) -> dict[str, AnnualSeries]:
    out = {}
    for name, s in series.items():
        unit = units.get(name, "percent")
        out[name] = s if s.units == unit else replace(s, units=unit)
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def replicate(config: RunConfig) -> ReplicationResult:
    """Run the full analysis and write the report bundle to config.output_dir."""
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, table: Table):
        for fmt in config.output_formats:
            path = out_dir / f"{name}{suffix_for(fmt)}"
            path.write_text(render(table, fmt), encoding="utf-8")
            if path not in written:
                written.append(path)

    stage = "load"
    try:
        data_file = config.resolved_path("data")
        raw = load_table(data_file)
        raw = _apply_units(raw, config.units)
        for name in (config.response, *config.regressors):
            if name not in raw:
                raise UsageError(f"column {name!r} not present in {data_file}")

        stage = "interpolate"
        filled = {name: interpolate_missing(s, config.half_window) if not s.is_complete() else s for name, s in raw.items()}

        stage = "frame"
        variables = [config.response, *config.regressors]
        frame = build_frame({n: filled[n] for n in variables}, (config.year_start, config.year_end))

        stage = "table1"
        emit("table1", _table1(config))

        stage = "table2"
        emit("table2", _table2(config))

        stage = "table3"
        corr = pearson_matrix(frame, variables)
        emit("table3", _table3(corr))

        stage = "table4"
        adf_results = {}
        rows = []
        for name in variables:
            spec = AdfSpec(config.deterministic_for(name), config.adf_max_lag, "sic")
            res = adf_test(frame[name].values, spec)
            alt_spec_name = "constant+trend" if spec.deterministic != "constant+trend" else "constant"
            alt = adf_test(frame[name].values, AdfSpec(alt_spec_name, config.adf_max_lag, "sic"))
            adf_results[name] = res
            rows.append(
                (
                    name,
                    res.deterministic,
                    res.chosen_lag,
                    res.statistic,
                    res.critical_values[0.01],
                    res.critical_values[0.05],
                    res.critical_values[0.10],
                    res.p_bracket,
                    res.p_value_approx,
                    res.decision_at[0.05],
                    alt.deterministic,
                    alt.statistic,
                    alt.p_bracket,
                )
            )
        emit(
            "table4",
            Table(
                "table4",
                (
                    "variable",
                    "deterministic",
                    "lag",
                    "statistic",
                    "cv_1pct",
                    "cv_5pct",
                    "cv_10pct",
                    "p_bracket",
                    "p_approx",
                    "decision_5pct",
                    "alt_deterministic",
                    "alt_statistic",
                    "alt_p_bracket",
                ),
                tuple(rows),
                title="Unit-root tests (H0: unit root), SIC lag selection",
            ),
        )

        stage = "table5"
        design = Design(frame[config.response], tuple(frame[n] for n in config.regressors), intercept=True)
        fit = ols_fit(design)
        joint = f_test_joint(fit)
        emit("table5", _table5(fit, joint))

        stage = "table6"
        bp = breusch_pagan(fit, design)
        bg = breusch_godfrey(fit, design, config.bg_order)
        jb = jarque_bera(fit.residuals)
        emit("table6", _table6(bp, bg, jb))

        stage = "table7"
        coint = engle_granger(design, mode=config.critical_value_mode, level=0.05)
        reset = ramsey_reset(fit, design, config.reset_max_power)
        emit("table7", _table7(coint, reset))

        stage = "figure4"
        cus = cusum(design, config.cusum_level)
        years = frame.years
        fig_rows = []
        upper_full, lower_full = cusum_bounds(cus.n, cus.k, config.cusum_level)
        for i, t in enumerate(range(cus.k, cus.n + 1)):
            year = int(years[t - 1])
            psi = None if t == cus.k else float(cus.psi[t - cus.k - 1])
            fig_rows.append((year, t, psi, float(lower_full[i]), float(upper_full[i])))
        emit(
            "figure4",
            Table(
                "figure4",
                ("year", "t", "psi", "lower", "upper"),
                tuple(fig_rows),
                title=f"CUSUM path and {config.cusum_level:.0%} bounds"
                + ("; no breach" if not cus.breach else f"; first breach at t={cus.first_breach_t}"),
            ),
        )
        if config.figure_render:
            svg = out_dir / "figure4.svg"
            psi_years = [int(years[t - 1]) for t in cus.t_index]
            render_cusum_figure(svg, psi_years, cus.psi, cus.lower, cus.upper, config.cusum_level)
            written.append(svg)

        stage = "manifest"
        manifest = out_dir / "manifest.txt"
        lines = [f"config_hash = {config.config_hash()}", f"library = cotrend {__about__.version}", f"seed = {config.seed}"]
        for key, value in config.canonical_items():
            lines.append(f"config.{key} = {value}")
        for which in ("data", "rates", "demographics"):
            lines.append(f"input.{which} = {getattr(config, which + '_path')} sha256:{_sha256(config.resolved_path(which))}")
        for path in written:
            lines.append(f"output.{path.name} = sha256:{_sha256(path)}")
        manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(manifest)
    except PipelineError:
        raise
    except Exception as exc:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise PipelineError(stage, exc) from exc

    return ReplicationResult(
        paths=tuple(written),
        config=config,
        frame=frame,
        fit=fit,
        joint_f=joint,
        correlations=corr,
        adf_results=adf_results,
        bp=bp,
        bg=bg,
        jb=jb,
        coint=coint,
        reset=reset,
        cusum_result=cus,
    )


def _table1(config: RunConfig) -> Table:
    rates = load_table(config.resolved_path("rates"))
    try:
        inflation, nominal = rates["Inflation"], rates["NominalDepositRate"]
    except UsageError:
        raise UsageError("rates file must have columns 'Inflation' and 'NominalDepositRate'") from None
    rows = []
    for year, infl, nom in zip(inflation.years, inflation.values, nominal.values):
        rows.append((str(int(year)), float(infl), float(nom), real_rate(float(nom), float(infl))))
    n = len(rows)
    rows.append(
        (
            "average",
            sum(r[1] for r in rows) / n,
            sum(r[2] for r in rows) / n,
            sum(r[3] for r in rows) / n,
        )
    )
    return Table(
        "table1",
        ("year", "inflation", "nominal_deposit_rate", "real_deposit_rate"),
        tuple(rows),
        title="Net returns of bank deposits (percent)",
    )


def _table2(config: RunConfig) -> Table:
    demo = load_table(config.resolved_path("demographics"))
    names = list(demo)
    years = demo[names[0]].years
    rows: list[tuple] = []
    for i, year in enumerate(years):
        rows.append((str(int(year)), *(float(demo[n].values[i]) for n in names)))
    rows.append(("change-over-period", *(change_over_period(demo[n]) for n in names)))
    rows.append(("avg-annual-pct-change", *(mean_annual_pct_change(demo[n]) for n in names)))
    flags = []
    for n in names:
        differs = abs(change_over_period(demo[n]) - mean_annual_pct_change(demo[n])) > 0.005
        flags.append("conventions-differ" if differs else "ok")
    rows.append(("change-convention-flag", *flags))
    return Table(
        "table2",
        ("year", *names),
        tuple(rows),
        title="Demographic data; the two closing change conventions are reported side by side",
    )


def _table3(corr) -> Table:
    labels = corr.labels
    rows = []
    for label, values in corr.lower_triangle():
        padded = list(values) + [None] * (len(labels) - len(values))
        rows.append((label, *padded))
    return Table("table3", ("variable", *labels), tuple(rows), title="Pearson correlation matrix (lower triangle)")


def _table5(fit, joint) -> Table:
    rows = []
    for i, name in enumerate(fit.names):
        rows.append(
            (name, float(fit.coefficients[i]), float(fit.std_errors[i]), float(fit.t_stats[i]), float(fit.p_values[i]))
        )
    rows.append(("R-squared", fit.r2, None, None, None))
    rows.append(("Adj-R-squared", fit.adj_r2, None, None, None))
    fstat = joint.stat("F")
    rows.append(("F-stat", fstat.value, None, None, fstat.p_value))
    rows.append(("SIC", fit.sic, None, None, None))
    rows.append(("DW-stat", fit.dw, None, None, None))
    rows.append(("n", float(fit.n), None, None, None))
    return Table(
        "table5",
        ("term", "estimate", "std_error", "t_stat", "p_value"),
        tuple(rows),
        title=f"OLS estimates, dependent variable: {fit.response_name}",
    )


def _df_label(stat) -> str:
    return ",".join(f"{int(v)}" for v in stat.df)


def _table6(bp, bg, jb) -> Table:
    rows = []
    for res in (bp, bg):
        for s in res.statistics:
            rows.append((res.test_name, res.null_hypothesis, s.name, s.value, _df_label(s), s.p_value, res.decision_at[0.05]))
    s = jb.statistic
    rows.append((jb.test_name, jb.null_hypothesis, s.name, s.value, _df_label(s), s.p_value, jb.decision_at[0.05]))
    return Table(
        "table6",
        ("test", "null_hypothesis", "stat", "value", "df", "p_value", "decision_5pct"),
        tuple(rows),
        title="Residual diagnostics",
    )


def _table7(coint, reset) -> Table:
    rows = []
    adf = coint.residual_adf
    rows.append(
        (
            "cointegration",
            "residual-adf",
            "tau",
            adf.statistic,
            f"lag={adf.chosen_lag}",
            adf.p_value_approx,
            adf.p_bracket,
            adf.critical_values[0.05],
            adf.decision_at[0.05],
        )
    )
    kp = coint.residual_kpss
    rows.append(
        (
            "cointegration",
            kp.test_name,
            kp.statistic.name,
            kp.statistic.value,
            "",
            None,
            kp.p_bracket,
            kp.critical_values[0.05],
            kp.decision_at[0.05],
        )
    )
    rows.append(("cointegration", "verdict", "", None, f"mode={coint.critical_value_mode}", None, "", None, coint.verdict))
    for s in reset.statistics:
        rows.append(("specification", reset.test_name, s.name, s.value, _df_label(s), s.p_value, "", None, reset.decision_at[0.05]))
    return Table(
        "table7",
        ("part", "test", "stat", "value", "detail", "p_value", "p_bracket", "cv_5pct", "decision_5pct"),
        tuple(rows),
        title="Cointegration and specification checks",
    )
