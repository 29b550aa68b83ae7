"""Report tables and figure rendering.

Three output encodings share one Table value: ``plain`` pretty-prints with
the 2-decimal convention used in published tables, ``csv`` and ``jsonl``
carry full double precision (shortest round-trip representation). All
emission is deterministic: no timestamps, no environment-dependent state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

FORMATS = ("plain-table", "delimited", "structured-records")

_SUFFIX = {"plain-table": ".txt", "delimited": ".csv", "structured-records": ".jsonl"}


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    title: str = ""

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"table {self.name}: row width {len(r)} != {len(self.columns)} columns")


def suffix_for(fmt: str) -> str:
    return _SUFFIX[fmt]


def _plain_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        if math.isnan(v):
            return "."
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        s = f"{v:.2f}"
        return "0.00" if s == "-0.00" else s
    return str(v)


def _full_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def render_plain(table: Table) -> str:
    cells = [list(table.columns)] + [[_plain_cell(v) for v in row] for row in table.rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(table.columns))]
    numeric = [all(isinstance(row[j], (int, float)) or row[j] is None for row in table.rows) for j in range(len(table.columns))]
    lines = []
    if table.title:
        lines.append(table.title)
    for i, row in enumerate(cells):
        out = []
        for j, cell in enumerate(row):
            out.append(cell.rjust(widths[j]) if numeric[j] and i > 0 else cell.ljust(widths[j]))
        lines.append("  ".join(out).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_delimited(table: Table) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_full_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_jsonl(table: Table) -> str:
    lines = []
    for row in table.rows:
        rec = {}
        for col, v in zip(table.columns, row):
            if isinstance(v, float) and (math.isnan(v) or math.isinf(v)):
                v = _full_cell(v)
            rec[col] = v
        lines.append(json.dumps(rec, separators=(",", ":"), sort_keys=False, allow_nan=False))
    return "\n".join(lines) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "plain-table":
        return render_plain(table)
    if fmt == "delimited":
        return render_delimited(table)
    if fmt == "structured-records":
        return render_jsonl(table)
    raise ValueError(f"unknown format {fmt!r}")


def cli_format_to_internal(fmt: str) -> str:
    return {"plain": "plain-table", "csv": "delimited", "json-lines": "structured-records"}[fmt]


def render_cusum_figure(path, years, psi, lower, upper, level: float) -> None:
    """Write a deterministic SVG of the CUSUM path and its significance bounds."""
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": "cotrend", "figure.figsize": (7.0, 4.2), "font.size": 9}):
        fig, ax = plt.subplots()
        ax.plot(years, psi, color="#1f4e9c", lw=1.6, label="cumulative sum")
        ax.plot(years, upper, color="#c03434", lw=1.2, ls="--", label=f"{level:.0%} significance bounds")
        ax.plot(years, lower, color="#c03434", lw=1.2, ls="--")
        ax.axhline(0.0, color="0.6", lw=0.8)
        ax.set_xlabel("year")
        ax.set_ylabel("scaled cumulative sum of recursive residuals")
        ax.set_title("Coefficient stability (CUSUM)")
        ax.legend(loc="upper left", frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
