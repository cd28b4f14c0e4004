"""Figure rendering for the simulator's CSV schemas.

Input CSVs must match the producer's column layout exactly; anything else is
refused with the offending column named. Data is plotted as-is: point
coordinates equal CSV values, in row order. Zero-failure estimates cannot sit
on a log axis, so they are drawn at their Wilson upper bound with a downward
marker.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

matplotlib.rcParams["svg.hashsalt"] = "lrc-mld-plots"

BER_HEADER = (
    "experiment,n,r,t,channel,param,trials,failures,p_hat,"
    "ci_low,ci_high,bound_chernoff_log2,exact_log2,seed"
)
FIG2_HEADER = "alpha,log2_n,t_real,union_chernoff_log2,union_exact_log2"
SWEEP_HEADER = "n,r,t,kind,w,trials,uncorrectable,fraction,ci_low,ci_high,seed"

SCHEMAS = {"fig1": BER_HEADER, "fig2": FIG2_HEADER, "weights": SWEEP_HEADER}


class SchemaError(ValueError):
    """CSV header or content does not match the expected schema."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str  # fig1 | fig2 | weights
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def _check_header(header: list[str], kind: str, path: str) -> list[str]:
    expected = SCHEMAS[kind].split(",")
    for i, name in enumerate(expected):
        if i >= len(header):
            raise SchemaError(f"{path}: missing column {name!r}")
        if header[i] != name:
            raise SchemaError(f"{path}: expected column {name!r}, found {header[i]!r}")
    if len(header) > len(expected):
        raise SchemaError(f"{path}: unexpected column {header[len(expected)]!r}")
    return expected


def load_rows(paths, kind: str) -> list[dict]:
    rows: list[dict] = []
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            columns = _check_header(header, kind, path)
            for line in reader:
                if len(line) != len(columns):
                    raise SchemaError(f"{path}: row has {len(line)} fields, expected {len(columns)}")
                rows.append(dict(zip(columns, line)))
    if not rows:
        raise SchemaError("no data rows in input")
    return rows


def _num(value: str) -> float | None:
    return None if value == "" else float(value)


def _grouped(rows: list[dict], key: str) -> dict[str, list[dict]]:
    groups: dict[str, list[dict]] = {}
    for row in rows:
        groups.setdefault(row[key], []).append(row)
    return groups


def _plot_estimates(ax, xs, rows, series_label):
    """Error-bar points for nonzero estimates, down-markers at the Wilson
    upper bound for zero-failure ones."""
    pos_x, pos_y, err_lo, err_hi, zero_x, zero_y = [], [], [], [], [], []
    for x, row in zip(xs, rows):
        p_hat, lo, hi = _num(row["p_hat"]), _num(row["ci_low"]), _num(row["ci_high"])
        if p_hat is None:
            continue
        if p_hat > 0.0:
            pos_x.append(x)
            pos_y.append(p_hat)
            err_lo.append(p_hat - lo)
            err_hi.append(hi - p_hat)
        else:
            zero_x.append(x)
            zero_y.append(hi)
    line = None
    if pos_x:
        line = ax.errorbar(
            pos_x, pos_y, yerr=[err_lo, err_hi], marker="o", markersize=4,
            linestyle="-", capsize=2, label=series_label,
        )
    if zero_x:
        color = line.lines[0].get_color() if line is not None else None
        ax.plot(
            zero_x, zero_y, marker="v", linestyle="none", color=color,
            label=None if line is not None else f"{series_label} (0 failures, CI top)",
        )


def _render_fig1(rows: list[dict], ax) -> None:
    for regime, group in _grouped(rows, "experiment").items():
        xs = [math.log2(float(r["n"])) for r in group]
        _plot_estimates(ax, xs, group, f"{regime} empirical")
        bound_x = [x for x, r in zip(xs, group) if r["bound_chernoff_log2"] != ""]
        bound_y = [2.0 ** float(r["bound_chernoff_log2"]) for r in group if r["bound_chernoff_log2"] != ""]
        if bound_x:
            ax.plot(bound_x, bound_y, linestyle="--", label=f"{regime} bound")
    ax.set_xlabel("log2 n")
    ax.set_ylabel("bit decoding failure probability")
    ax.set_title("Empirical bit failure vs exponential bound")


def _render_fig2(rows: list[dict], ax) -> None:
    for alpha, group in _grouped(rows, "alpha").items():
        xs = [float(r["log2_n"]) for r in group]
        ys = [2.0 ** float(r["union_chernoff_log2"]) for r in group]
        ax.plot(xs, ys, marker="o", markersize=3, label=f"alpha={float(alpha):g}")
    ax.axhline(1.0, color="gray", linestyle=":", linewidth=1)
    ax.set_xlabel("log2 n")
    ax.set_ylabel("union bound on block failure")
    ax.set_title("Block-failure union bound vs availability exponent")


def _render_weights(rows: list[dict], ax) -> None:
    for kind, group in _grouped(rows, "kind").items():
        xs = [float(r["w"]) for r in group]
        mapped = [
            {"p_hat": r["fraction"], "ci_low": r["ci_low"], "ci_high": r["ci_high"]}
            for r in group
        ]
        _plot_estimates(ax, xs, mapped, f"{kind} patterns")
    ax.set_xlabel("pattern weight")
    ax.set_ylabel("uncorrectable fraction")
    ax.set_title("Uncorrectable fraction by pattern weight")


def render(spec: PlotSpec):
    """Render the figure and write it to spec.output; returns the Figure."""
    rows = load_rows(spec.inputs, spec.kind)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        if spec.kind == "fig1":
            _render_fig1(rows, ax)
        elif spec.kind == "fig2":
            _render_fig2(rows, ax)
        else:
            _render_weights(rows, ax)
        ax.set_yscale("log")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        metadata = {"Date": None} if spec.output.endswith(".svg") else {}
        fig.savefig(spec.output, dpi=120, metadata=metadata)
    finally:
        plt.close(fig)
    return fig
