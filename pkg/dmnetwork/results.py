"""SweepResult carrier, time grids and file emission (CSV + optional workbook)."""

import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from dmnetwork import config
from dmnetwork.exceptions import GridError

logger = logging.getLogger(__name__)


def make_grid(t_max, dt):
    """``0, dt, 2dt, ... <= t_max`` rounded so every value prints exactly."""
    if not (math.isfinite(dt) and dt > 0):
        raise GridError(f"dt must be positive, got {dt!r}")
    if not (math.isfinite(t_max) and t_max > 0):
        raise GridError(f"t_max must be positive, got {t_max!r}")
    count = int(math.floor(t_max / dt + 1e-9)) + 1
    return np.round(np.arange(count) * dt, config.GRID_DECIMALS)


def check_grid(t_grid):
    """
    Validate a caller-supplied time grid.

    Args:
        t_grid: Times, any array-like

    Returns:
        np.ndarray: The grid as a flat float array

    Raises:
        GridError: If the grid is empty, negative, non-finite or not strictly increasing
    """
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if t.size == 0:
        raise GridError("time grid is empty")
    if not np.all(np.isfinite(t)) or t[0] < 0:
        raise GridError("time grid must be finite and start at t >= 0")
    if np.any(np.diff(t) <= 0):
        raise GridError("time grid must be strictly increasing")
    return t


def evaluate_grid(t_grid, state_at, measures):
    """One row per ``t``: ``{"t": t, column: measure(t, state_at(t)), ...}``.

    A measure keyed by a tuple of column names returns one value per name.
    Rows are assembled in grid order, so the table does not depend on how the
    per-time evaluations were scheduled.
    """
    columns = ["t"]
    for key, _ in measures:
        columns.extend(key if isinstance(key, tuple) else (key,))
    rows = []
    for t in t_grid:
        t = float(t)
        state = state_at(t)
        row = {"t": t}
        for key, measure in measures:
            value = measure(t, state)
            if isinstance(key, tuple):
                row.update(zip(key, value))
            else:
                row[key] = value
        rows.append(row)
    return pd.DataFrame(rows, columns=columns)


@dataclass(eq=False)
class SweepResult:
    """Time-series table (first column ``t``) plus the parameters that made it."""

    table: pd.DataFrame
    manifest: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if list(self.table.columns[:1]) != ["t"]:
            raise GridError(f"first column must be 't', got {list(self.table.columns)}")
        if len(self.table) and np.any(np.diff(self.table["t"].to_numpy()) <= 0):
            raise GridError("t column must be strictly increasing")

    @property
    def columns(self):
        return list(self.table.columns)

    @property
    def rows(self):
        return [tuple(r) for r in self.table.itertuples(index=False, name=None)]

    def column(self, name):
        return self.table[name].to_numpy()


def format_manifest(manifest):
    return "".join(
        f"# {key}: {json.dumps(manifest[key], sort_keys=True)}\n" for key in sorted(manifest)
    )


def emit_csv(result, path):
    """Write the manifest as ``# key: value`` lines, then the table.

    ``path == "-"`` writes to stdout. An empty table is refused before any
    file is created.
    """
    if result.table.empty:
        raise GridError("refusing to write an empty sweep")
    if path == "-":
        _write_csv(result, sys.stdout)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        _write_csv(result, handle)
    logger.info("Sweep saved to %s (%d rows)", path, len(result.table))


def _write_csv(result, handle):
    handle.write(format_manifest(result.manifest))
    result.table.to_csv(
        handle, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n"
    )


def load_csv(path):
    """
    Read a CSV written by ``emit_csv``.

    Args:
        path (str): File path

    Returns:
        SweepResult: The table and the manifest parsed from the ``# key: value`` lines
    """
    manifest = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(": ")
            manifest[key] = json.loads(value)
    table = pd.read_csv(path, comment="#")
    return SweepResult(table, manifest)


def emit_workbook(result, path):
    """Inspection workbook: ``sweep`` and ``manifest`` sheets plus one sheet per extra table."""
    manifest = pd.DataFrame(
        [(key, json.dumps(result.manifest[key], sort_keys=True)) for key in sorted(result.manifest)],
        columns=["key", "value"],
    )
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(directory):
        os.makedirs(directory)
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        result.table.to_excel(writer, sheet_name="sweep", index=False)
        manifest.to_excel(writer, sheet_name="manifest", index=False)
        for name, extra in result.extras.items():
            extra.to_excel(writer, sheet_name=name[:31], index=False)
    logger.info("Workbook saved to %s", path)
