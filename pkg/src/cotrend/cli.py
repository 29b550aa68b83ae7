"""Command-line front end.

Exit status taxonomy: 0 success, 2 usage errors (bad flags, unknown
columns, bad config), 3 data errors (missing or malformed input files),
4 numeric degeneracy (singular designs, zero-variance series), 1 anything
else.
"""

from __future__ import annotations

import argparse
import sys

from .cointegration import cusum, engle_granger
from .diagnostics import breusch_godfrey, breusch_pagan, jarque_bera, pearson_matrix, ramsey_reset
from .errors import CotrendError, DataError, NumericError, UsageError
from .linreg import Design, f_test_joint, ols_fit
from .pipeline import BUILTIN, PipelineError, RunConfig, load_config, replicate
from .report import Table, cli_format_to_internal, render
from .series import build_frame, interpolate_missing, load_table
from .unitroot import AdfSpec, adf_test, kpss_test

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _add_data_options(p: argparse.ArgumentParser):
    p.add_argument("--data", default=BUILTIN, help="delimited annual table (default: bundled dataset)")
    p.add_argument("--years", default=None, metavar="FIRST:LAST", help="restrict to a year window")
    p.add_argument("--half-window", type=int, default=3, help="interpolation half window (default 3)")
    p.add_argument(
        "--format",
        choices=("plain", "csv", "json-lines"),
        default="plain",
        help="output encoding (default plain)",
    )


def _add_design_options(p: argparse.ArgumentParser):
    p.add_argument("--response", required=True, help="dependent variable column")
    p.add_argument("--var", action="append", default=None, metavar="NAME", help="regressor column (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cotrend", description="Deterministic annual time-series econometrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replicate", help="run the full pipeline and write the report bundle")
    p.add_argument("--config", default=None, help="flat key=value config file (defaults reproduce the bundled study)")
    p.add_argument("--output-dir", default=None, help="override the configured output directory")

    p = sub.add_parser("corr", help="Pearson correlation matrix")
    _add_data_options(p)
    p.add_argument("--var", action="append", default=None, metavar="NAME", help="columns (default: all)")

    p = sub.add_parser("unitroot", help="ADF (or KPSS) unit-root test per variable")
    _add_data_options(p)
    p.add_argument("--var", action="append", default=None, metavar="NAME", help="columns (default: all)")
    p.add_argument("--test", choices=("adf", "kpss"), default="adf")
    p.add_argument("--deterministic", choices=("none", "constant", "constant+trend"), default="constant")
    p.add_argument("--max-lag", default="auto", help="'auto' (Schwert bound) or an integer")
    p.add_argument("--selection", choices=("sic", "fixed"), default="sic")
    p.add_argument("--kpss-spec", choices=("level", "trend"), default="level")
    p.add_argument("--bandwidth", default="auto", help="KPSS Bartlett bandwidth, 'auto' or integer")

    p = sub.add_parser("fit", help="OLS fit with fit statistics")
    _add_data_options(p)
    _add_design_options(p)

    p = sub.add_parser("diagnose", help="residual and specification diagnostics of an OLS fit")
    _add_data_options(p)
    _add_design_options(p)
    p.add_argument("--bg-order", type=int, default=2)
    p.add_argument("--reset-max-power", type=int, default=2)

    p = sub.add_parser("cointegrate", help="Engle-Granger two-step cointegration test")
    _add_data_options(p)
    _add_design_options(p)
    p.add_argument("--mode", choices=("paper-adf", "engle-granger"), default="paper-adf")

    p = sub.add_parser("cusum", help="CUSUM coefficient stability test")
    _add_data_options(p)
    _add_design_options(p)
    p.add_argument("--level", type=float, default=0.05, choices=(0.01, 0.05, 0.10))

    return parser


def _load_frame(args, columns: list[str] | None):
    path = RunConfig().resolved_path("data") if args.data == BUILTIN else args.data
    series = load_table(path)
    if columns:
        for name in columns:
            if name not in series:
                raise UsageError(f"unknown column {name!r}; file has {sorted(series)}")
        series = {name: series[name] for name in columns}
    filled = {n: interpolate_missing(s, args.half_window) if not s.is_complete() else s for n, s in series.items()}
    year_range = None
    if args.years:
        first, _, last = args.years.partition(":")
        try:
            year_range = (int(first), int(last))
        except ValueError:
            raise UsageError(f"--years must look like 1995:2019, got {args.years!r}") from None
    return build_frame(filled, year_range)


def _emit(table: Table, fmt: str):
    sys.stdout.write(render(table, cli_format_to_internal(fmt)))


def _parse_max_lag(raw):
    if raw == "auto":
        return "auto"
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"--max-lag must be 'auto' or an integer, got {raw!r}") from None


def _design_from_args(args) -> tuple[Design, object]:
    if not args.var:
        raise UsageError("need at least one --var regressor")
    if args.response in args.var:
        raise UsageError(f"response {args.response!r} cannot also be a regressor")
    frame = _load_frame(args, [args.response] + args.var)
    return Design(frame[args.response], tuple(frame[v] for v in args.var), intercept=True), frame


def cmd_replicate(args) -> int:
    config = load_config(args.config)
    if args.output_dir:
        import dataclasses

        config = dataclasses.replace(config, output_dir=args.output_dir)
    result = replicate(config)
    for path in result.paths:
        print(path)
    print(f"replicate: wrote {len(result.paths)} files to {config.output_dir}")
    return EXIT_OK


def cmd_corr(args) -> int:
    frame = _load_frame(args, args.var)
    corr = pearson_matrix(frame, args.var)
    labels = corr.labels
    rows = []
    for label, values in corr.lower_triangle():
        rows.append((label, *values, *([None] * (len(labels) - len(values)))))
    _emit(Table("corr", ("variable", *labels), tuple(rows)), args.format)
    return EXIT_OK


def cmd_unitroot(args) -> int:
    frame = _load_frame(args, args.var)
    names = args.var or frame.names
    rows = []
    if args.test == "adf":
        spec = AdfSpec(args.deterministic, _parse_max_lag(args.max_lag), args.selection)
        for name in names:
            r = adf_test(frame[name].values, spec)
            rows.append(
                (name, r.deterministic, r.chosen_lag, r.statistic, r.critical_values[0.05], r.p_bracket, r.p_value_approx, r.decision_at[0.05])
            )
        cols = ("variable", "deterministic", "lag", "statistic", "cv_5pct", "p_bracket", "p_approx", "decision_5pct")
    else:
        bandwidth = args.bandwidth if args.bandwidth == "auto" else int(args.bandwidth)
        for name in names:
            r = kpss_test(frame[name].values, args.kpss_spec, bandwidth)
            rows.append((name, args.kpss_spec, r.statistic.value, r.critical_values[0.05], r.p_bracket, r.decision_at[0.05]))
        cols = ("variable", "spec", "statistic", "cv_5pct", "p_bracket", "decision_5pct")
    _emit(Table("unitroot", cols, tuple(rows)), args.format)
    return EXIT_OK


def _fit_table(fit, joint) -> Table:
    rows = []
    for i, name in enumerate(fit.names):
        rows.append((name, float(fit.coefficients[i]), float(fit.std_errors[i]), float(fit.t_stats[i]), float(fit.p_values[i])))
    rows.append(("R-squared", fit.r2, None, None, None))
    rows.append(("Adj-R-squared", fit.adj_r2, None, None, None))
    f = joint.stat("F")
    rows.append(("F-stat", f.value, None, None, f.p_value))
    rows.append(("SIC", fit.sic, None, None, None))
    rows.append(("DW-stat", fit.dw, None, None, None))
    return Table("fit", ("term", "estimate", "std_error", "t_stat", "p_value"), tuple(rows))


def cmd_fit(args) -> int:
    design, _ = _design_from_args(args)
    fit = ols_fit(design)
    _emit(_fit_table(fit, f_test_joint(fit)), args.format)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    design, _ = _design_from_args(args)
    fit = ols_fit(design)
    rows = []
    for res in (breusch_pagan(fit, design), breusch_godfrey(fit, design, args.bg_order), jarque_bera(fit.residuals), ramsey_reset(fit, design, args.reset_max_power)):
        for s in res.statistics:
            df = ",".join(f"{int(v)}" for v in s.df)
            rows.append((res.test_name, res.null_hypothesis, s.name, s.value, df, s.p_value, res.decision_at[0.05]))
    _emit(Table("diagnose", ("test", "null_hypothesis", "stat", "value", "df", "p_value", "decision_5pct"), tuple(rows)), args.format)
    return EXIT_OK


def cmd_cointegrate(args) -> int:
    design, _ = _design_from_args(args)
    res = engle_granger(design, mode=args.mode)
    adf, kp = res.residual_adf, res.residual_kpss
    rows = [
        ("residual-adf", adf.statistic, adf.critical_values[0.05], adf.p_bracket, adf.decision_at[0.05]),
        ("residual-kpss", kp.statistic.value, kp.critical_values[0.05], kp.p_bracket, kp.decision_at[0.05]),
        ("verdict", None, None, f"mode={res.critical_value_mode}", res.verdict),
    ]
    _emit(Table("cointegrate", ("test", "statistic", "cv_5pct", "note", "decision_5pct"), tuple(rows)), args.format)
    return EXIT_OK


def cmd_cusum(args) -> int:
    design, frame = _design_from_args(args)
    res = cusum(design, args.level)
    years = frame.years
    rows = []
    for i, t in enumerate(res.t_index):
        rows.append((int(years[t - 1]), int(t), float(res.psi[i]), float(res.lower[i]), float(res.upper[i])))
    _emit(Table("cusum", ("year", "t", "psi", "lower", "upper"), tuple(rows)), args.format)
    if res.breach:
        year = int(years[res.first_breach_t - 1])
        print(f"breach at t={res.first_breach_t} (year {year}) at {res.level:.0%} level")
    else:
        print(f"no breach at {res.level:.0%} level")
    return EXIT_OK


_COMMANDS = {
    "replicate": cmd_replicate,
    "corr": cmd_corr,
    "unitroot": cmd_unitroot,
    "fit": cmd_fit,
    "diagnose": cmd_diagnose,
    "cointegrate": cmd_cointegrate,
    "cusum": cmd_cusum,
}


def _exit_code_for(exc: CotrendError) -> int:
    if isinstance(exc, PipelineError):
        inner = exc.cause
        if isinstance(inner, CotrendError):
            return _exit_code_for(inner)
        return EXIT_UNEXPECTED
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, DataError):
        return EXIT_DATA
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    return EXIT_UNEXPECTED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CotrendError as exc:
        print(f"cotrend {args.command}: error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    except FileNotFoundError as exc:
        print(f"cotrend {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
