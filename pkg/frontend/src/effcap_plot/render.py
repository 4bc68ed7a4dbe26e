"""Figure assembly: analytic curves as lines, asymptotes dashed, Monte
Carlo estimates as markers with error bars."""

from dataclasses import dataclass
from enum import Enum

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .reader import AXIS_ANTENNAS, AXIS_SNR, SchemaError, SweepTable, read_sweep_csv


class FigureKind(Enum):
    VS_SNR = "vs-snr"
    VS_ANTENNAS = "vs-antennas"


_AXIS_FOR_KIND = {FigureKind.VS_SNR: AXIS_SNR, FigureKind.VS_ANTENNAS: AXIS_ANTENNAS}
_X_LABEL = {FigureKind.VS_SNR: "ρ (dB)", FigureKind.VS_ANTENNAS: "L"}
Y_LABEL = "Effective throughput (bits/s/Hz)"


@dataclass(frozen=True)
class PlotJob:
    """Inputs, figure kind and output path for one chart."""

    inputs: tuple
    kind: FigureKind
    output: str


@dataclass(frozen=True)
class Series:
    """One legend entry: the (mu, m, method) slice of the input tables."""

    mu: float
    m: float
    method: str
    x: tuple
    y: tuple
    yerr: tuple

    @property
    def label(self) -> str:
        return f"μ={self.mu:g}, m={self.m:g} ({self.method})"


def collect_series(tables) -> list:
    """Group rows by (mu, m, method), each sorted along the axis."""
    buckets = {}
    for table in tables:
        for row in table.rows:
            buckets.setdefault((row["mu"], row["m"], row["method"]), []).append(row)
    series = []
    for (mu, m, method), rows in sorted(buckets.items()):
        rows.sort(key=lambda r: r["axis_value"])
        series.append(Series(
            mu=mu, m=m, method=method,
            x=tuple(r["axis_value"] for r in rows),
            y=tuple(r["rate"] for r in rows),
            yerr=tuple(r["stderr"] if r["stderr"] is not None else 0.0 for r in rows),
        ))
    return series


def load_tables(job: PlotJob) -> list:
    tables = [read_sweep_csv(path) for path in job.inputs]
    want = _AXIS_FOR_KIND[job.kind]
    for table in tables:
        if table.axis != want:
            raise SchemaError(
                f"{table.path}: axis '{table.axis}' does not match figure kind "
                f"'{job.kind.value}' (needs '{want}')")
    return tables


def build_figure(job: PlotJob):
    """Build the matplotlib figure; returns (figure, series list)."""
    series = collect_series(load_tables(job))
    fig, ax = plt.subplots(figsize=(7.0, 4.8))
    for s in series:
        if s.method == "mc":
            ax.errorbar(s.x, s.y, yerr=s.yerr, fmt="o", ms=4, capsize=2,
                        linestyle="none", label=s.label)
        elif s.method == "asym":
            ax.plot(s.x, s.y, linestyle="--", label=s.label)
        else:
            ax.plot(s.x, s.y, linestyle="-", label=s.label)
    ax.set_xlabel(_X_LABEL[job.kind])
    ax.set_ylabel(Y_LABEL)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig, series


def render(job: PlotJob) -> list:
    """Write the chart to job.output; returns the plotted series."""
    fig, series = build_figure(job)
    try:
        fig.savefig(job.output, dpi=150)
    finally:
        plt.close(fig)
    return series
