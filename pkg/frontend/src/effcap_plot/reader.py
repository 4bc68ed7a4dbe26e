"""Sweep-CSV parsing and validation.

This package is read-only over the CSV wire contract: a `# schema=1`
comment line, a fixed header, one row per (axis value, method). It never
imports the library that produced the files and never recomputes a rate.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

SCHEMA_LINE = "# schema=1"
EXPECTED_COLUMNS = ("axis", "axis_value", "kappa", "mu", "m", "gamma_bar_db",
                    "a_exp", "antennas", "rho_db", "method", "rate_bps_hz",
                    "stderr", "diag_nodes", "diag_trials", "seed", "error")
AXIS_SNR = "rho_db"
AXIS_ANTENNAS = "antennas"


class SchemaError(ValueError):
    """The file does not follow schema version 1."""


class EmptySeriesError(ValueError):
    """No plottable rows survived parsing."""


@dataclass(frozen=True)
class SweepTable:
    """One parsed sweep file: its axis name and the usable data rows."""

    path: str
    axis: str
    rows: tuple


def read_sweep_csv(path) -> SweepTable:
    """Parse and validate one sweep CSV.

    Rows carrying an error message or an empty rate (method validity holes)
    are dropped; they are legitimate in the file but have nothing to plot.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_LINE:
            raise SchemaError(f"{path}: expected leading '{SCHEMA_LINE}' line, got {first!r}")
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != EXPECTED_COLUMNS:
            raise SchemaError(f"{path}: header does not match schema 1")
        rows = []
        axes = set()
        for raw in reader:
            axes.add(raw["axis"])
            if raw["error"] or not raw["rate_bps_hz"]:
                continue
            rows.append({
                "axis_value": float(raw["axis_value"]),
                "mu": float(raw["mu"]),
                "m": float(raw["m"]),
                "method": raw["method"],
                "rate": float(raw["rate_bps_hz"]),
                "stderr": float(raw["stderr"]) if raw["stderr"] else None,
            })
    if len(axes) > 1:
        raise SchemaError(f"{path}: mixed axis values {sorted(axes)}")
    if not axes:
        raise EmptySeriesError(f"{path}: no data rows")
    if not rows:
        raise EmptySeriesError(f"{path}: every row is an error or has no rate")
    return SweepTable(path=str(path), axis=axes.pop(), rows=tuple(rows))
