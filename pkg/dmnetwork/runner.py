"""Command-line entry point: figure presets, sweeps, CSV emission and replay.

Usage examples:
  python -m dmnetwork figure --fig fig2 --out fig2.csv
  python -m dmnetwork sweep --axis x --pairs 1-2,2-3 --strength 0.4 --tmax 10
  python -m dmnetwork sweep --measure fidelity --axis x --pairs 1-2 --xlsx fig8.xlsx
  python -m dmnetwork replay fig2.csv --out fig2_again.csv
"""

import argparse
import itertools
import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import pandas as pd

from dmnetwork import config
from dmnetwork.dmnet import METHODS, DMCoupling, global_purity, grown_network
from dmnetwork.entmeas import (
    axis_label,
    concurrence_measures,
    death_intervals,
    min_concurrence_measure,
)
from dmnetwork.exceptions import (
    ConvergenceError,
    CouplingError,
    DimensionError,
    DMNetworkError,
    InvalidStateError,
    NotHermitianError,
    PresetError,
)
from dmnetwork.results import SweepResult, emit_csv, emit_workbook, evaluate_grid, load_csv, make_grid
from dmnetwork.teleport import UnknownQubit, fidelity_measures

logger = logging.getLogger(__name__)

__all__ = [
    "PRESETS",
    "ClaimCheck",
    "audit",
    "emit_csv",
    "emit_workbook",
    "load_csv",
    "main",
    "replay",
    "run_figure",
    "run_sweep",
]

MEASURES = ("concurrence", "min_concurrence", "fidelity")
MEASURE_ALIASES = {"min": "min_concurrence"}

PRESETS = {
    "fig2": {"measure": "concurrence", "axis": "z", "pairs": [(1, 2), (1, 3), (1, 4)]},
    "fig3": {"measure": "concurrence", "axis": "z", "pairs": [(3, 4), (2, 3), (2, 4)]},
    "fig4": {
        "measure": "concurrence",
        "axis": "x",
        "pairs": [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
    },
    "fig5": {"measure": "min_concurrence", "axes": ("z", "x")},
    "fig7": {
        "measure": "concurrence",
        "axis": "z",
        "pairs": [(1, 5), (1, 6), (1, 3)],
        "bell_pairs": 3,
    },
    "fig8": {"measure": "fidelity", "axis": "x", "pairs": [(1, 2), (1, 4), (2, 3)]},
}

OVERRIDE_DEFAULTS = {
    "strength": config.DEFAULT_STRENGTH,
    "t_max": config.DEFAULT_T_MAX,
    "dt": config.DEFAULT_DT,
    "method": config.DEFAULT_METHOD,
    "corrections": config.DEFAULT_CORRECTIONS,
    "input_alpha2": config.DEFAULT_INPUT_ALPHA2,
    "average_inputs": False,
}

SWEEP_KEYS = (
    "axis",
    "strength",
    "t_max",
    "dt",
    "pairs",
    "measure",
    "method",
    "corrections",
    "input_alpha2",
    "bell_pairs",
    "dvec",
    "average_inputs",
)

BOUND_TOL = 1e-10


def _coupling(axis, strength, dvec):
    """
    The (2, 3) link of a sweep.

    Args:
        axis (str): Axis used when ``dvec`` is None
        strength (float): Strength along ``axis``
        dvec (tuple): General strength vector, or None

    Returns:
        DMCoupling: The link between the first two pairs
    """
    if dvec is not None:
        return DMCoupling(tuple(dvec), (2, 3))
    return DMCoupling.along(axis, strength, (2, 3))


def _check_pairs(pairs, node_count):
    """Normalise pairs to int tuples; raises DimensionError for out-of-range or repeated nodes."""
    checked = []
    for pair in pairs:
        pair = tuple(int(q) for q in pair)
        if len(pair) != 2 or pair[0] == pair[1] or min(pair) < 1 or max(pair) > node_count:
            raise DimensionError(f"pair {pair} is not two distinct nodes of 1..{node_count}")
        checked.append(pair)
    return checked


def _check_bounds(table):
    values = table.drop(columns="t").to_numpy(dtype=float)
    if values.size and (values.min() < -BOUND_TOL or values.max() > 1.0 + BOUND_TOL):
        raise InvalidStateError(
            f"sweep values leave [0, 1]: min {values.min():.3e}, max {values.max():.3e}"
        )


def run_sweep(
    axis=config.DEFAULT_AXIS,
    strength=config.DEFAULT_STRENGTH,
    t_max=config.DEFAULT_T_MAX,
    dt=config.DEFAULT_DT,
    pairs=None,
    measure="concurrence",
    method=config.DEFAULT_METHOD,
    corrections=config.DEFAULT_CORRECTIONS,
    input_alpha2=config.DEFAULT_INPUT_ALPHA2,
    bell_pairs=config.DEFAULT_BELL_PAIRS,
    dvec=None,
    average_inputs=False,
):
    """Evaluate one measure over ``t = 0, dt, ... <= t_max`` of the linked network.

    ``pairs`` are the node pairs (concurrence) or sender/receiver routes
    (fidelity); ``min_concurrence`` ignores them. ``dvec`` replaces the
    single-axis coupling by a general strength vector.

    Args:
        axis (str): Coupling axis; also the column suffix
        strength (float): Coupling strength D
        t_max (float): Last grid time
        dt (float): Grid step
        pairs (list): Node pairs or routes; None selects every pair, or route 1-2
        measure (str): "concurrence", "min_concurrence" or "fidelity"
        method (str): "analytic" or "oracle"
        corrections (bool): Receiver applies the Pauli corrections
        input_alpha2 (float): ``|alpha|^2`` of the teleported qubit
        bell_pairs (int): Number of Bell pairs in the network
        dvec (tuple): General strength vector, or None
        average_inputs (bool): Average fidelity over all inputs

    Returns:
        SweepResult: Table, manifest with every effective parameter, and for
        fixed-input fidelity an ``outcomes`` extra table

    Raises:
        PresetError: For an unknown measure or method
        DimensionError: For a pair outside the network
        CouplingError: For the analytic method on a general strength vector
        InvalidStateError: If the global state or a measure leaves its bounds
    """
    measure = MEASURE_ALIASES.get(measure, measure)
    if measure not in MEASURES:
        raise PresetError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    if method not in METHODS:
        raise PresetError(f"unknown method {method!r}; expected one of {METHODS}")
    coupling = _coupling(axis, strength, dvec)
    if method == "analytic" and coupling.axis is None:
        raise CouplingError("the analytic method needs a single-axis coupling")
    grid = make_grid(float(t_max), float(dt))
    bell_pairs = int(bell_pairs)
    node_count = 2 * bell_pairs
    if measure == "min_concurrence":
        pairs = []
    elif pairs is None:
        if measure == "fidelity":
            pairs = [(1, 2)]
        else:
            pairs = list(itertools.combinations(range(1, node_count + 1), 2))
    pairs = _check_pairs(pairs, node_count)
    # column suffix follows the requested axis even when every component is zero
    label = axis if dvec is None else axis_label(coupling)

    outcome_rows = None
    if measure == "concurrence":
        measures = concurrence_measures(pairs, label)
    elif measure == "min_concurrence":
        measures = [min_concurrence_measure(label)]
    else:
        qubit = UnknownQubit.from_alpha2(float(input_alpha2))
        outcome_rows = None if average_inputs else []
        measures = fidelity_measures(
            pairs, label, qubit, bool(corrections), bool(average_inputs), outcome_rows
        )

    def state_at(t):
        net = grown_network(bell_pairs, coupling, t, method)
        purity = global_purity(net)
        if abs(purity - 1.0) > config.HERMITIAN_TOL:
            raise InvalidStateError(f"global purity {purity!r} at t={t}")
        return net

    logger.info(
        "Sweep %s on %d nodes, D=%s, %d grid points, method %s",
        measure, node_count, list(coupling.strength), len(grid), method,
    )
    table = evaluate_grid(grid, state_at, measures)
    _check_bounds(table)
    manifest = {
        "command": "sweep",
        "axis": axis,
        "strength": float(strength),
        "t_max": float(t_max),
        "dt": float(dt),
        "pairs": [list(p) for p in pairs],
        "measure": measure,
        "method": method,
        "corrections": bool(corrections),
        "input_alpha2": float(input_alpha2),
        "bell_pairs": bell_pairs,
        "dvec": None if dvec is None else [float(d) for d in dvec],
        "average_inputs": bool(average_inputs),
        "grid_points": len(grid),
        "units": config.UNITS_NOTE,
    }
    extras = {"outcomes": pd.concat(outcome_rows, ignore_index=True)} if outcome_rows else {}
    return SweepResult(table, manifest, extras)


def _overrides(overrides):
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(OVERRIDE_DEFAULTS))
    if unknown:
        raise PresetError(f"unknown override(s) {unknown}; allowed: {sorted(OVERRIDE_DEFAULTS)}")
    params = dict(OVERRIDE_DEFAULTS)
    params.update(overrides)
    try:
        for key in ("strength", "t_max", "dt", "input_alpha2"):
            params[key] = float(params[key])
    except (TypeError, ValueError) as exc:
        raise PresetError(f"malformed override: {exc}") from None
    for key in ("corrections", "average_inputs"):
        if not isinstance(params[key], bool):
            raise PresetError(f"override {key} must be a boolean, got {params[key]!r}")
    return params


def run_figure(preset, overrides=None):
    """Data behind one figure, on the default D = 0.2, t in [0, 20] grid."""
    if preset not in PRESETS:
        raise PresetError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}")
    setup = PRESETS[preset]
    params = _overrides(overrides)
    if "axes" in setup:
        parts = [run_sweep(axis=axis, measure=setup["measure"], **params) for axis in setup["axes"]]
        table = pd.concat(
            [parts[0].table] + [p.table.drop(columns="t") for p in parts[1:]], axis=1
        )
        extras = {}
    else:
        result = run_sweep(
            axis=setup["axis"],
            pairs=setup["pairs"],
            measure=setup["measure"],
            bell_pairs=setup.get("bell_pairs", config.DEFAULT_BELL_PAIRS),
            **params,
        )
        table, extras = result.table, result.extras
    manifest = {"command": "figure", "preset": preset, "units": config.UNITS_NOTE}
    manifest.update(params)
    return SweepResult(table, manifest, extras)


def replay(path):
    """Rerun the sweep described by an emitted CSV's manifest."""
    manifest = load_csv(path).manifest
    command = manifest.get("command")
    if command == "figure":
        overrides = {k: manifest[k] for k in OVERRIDE_DEFAULTS if k in manifest}
        return run_figure(manifest.get("preset"), overrides)
    if command == "sweep":
        return run_sweep(**{k: manifest[k] for k in SWEEP_KEYS if k in manifest})
    raise PresetError(f"{path} has no replayable manifest (command {command!r})")


@dataclass(frozen=True)
class ClaimCheck:
    """A published claim about a figure next to the value the oracle gives."""

    claim: str
    published_value: float
    oracle_value: float
    holds: bool


def _first_local_max(t, values, tol=BOUND_TOL):
    for k in range(1, len(values) - 1):
        if values[k] > tol and values[k] >= values[k - 1] and values[k] > values[k + 1]:
            return float(t[k])
    return None


def _first_zero(t, values):
    return next((iv.start for iv in death_intervals(t, values) if iv.start > t[0]), None)


def _near(value, target, window):
    return value is not None and abs(value - target) <= window


def _claims(preset, result, strength):
    t = result.column("t")
    col = result.column
    if preset == "fig2":
        peak = float(col("C_13z").max())
        yield ClaimCheck("max C_13z lies in [0.74, 0.84]", 0.79, peak, 0.74 <= peak <= 0.84)
    elif preset == "fig3":
        gap = float(np.abs(col("C_23z") - col("C_24z")).max())
        yield ClaimCheck("C_23z equals C_24z", 0.0, gap, gap <= 1e-9)
        first_peak = _first_local_max(t, col("C_23z"))
        target = math.pi / (4.0 * strength)
        yield ClaimCheck("C_23z first maximum", target, first_peak, _near(first_peak, target, 0.1))
        first_zero = _first_zero(t, col("C_23z"))
        target = math.pi / (2.0 * strength)
        yield ClaimCheck("C_23z first vanishes", target, first_zero, _near(first_zero, target, 0.1))
    elif preset == "fig4":
        gap = float(np.abs(col("C_13x") - col("C_24x")).max())
        yield ClaimCheck("C_13x equals C_24x", 0.0, gap, gap <= 1e-9)
        peak = float(col("C_13x").max())
        yield ClaimCheck("C_13x reaches 1", 1.0, peak, peak >= 1.0 - 1e-6)
    elif preset == "fig5":
        floor = float(min(col("Cmin_z").min(), col("Cmin_x").min()))
        yield ClaimCheck("C_min stays above 0.7", 0.7, floor, floor > 0.7)
    elif preset == "fig7":
        margin = float(col("C_15z").max() - col("C_13z").max())
        yield ClaimCheck("max C_15z is much smaller than max C_13z", None, margin, margin < 0.0)
    elif preset == "fig8":
        f12 = col("F_12x")
        at_min = float(t[int(np.argmin(f12))])
        yield ClaimCheck("F_12x minimum near t = 2.6", 2.6, at_min, 2.3 <= at_min <= 2.9)
        yield ClaimCheck("F_12x starts at 1", 1.0, float(f12[0]), abs(f12[0] - 1.0) <= 1e-12)


def audit(preset, result):
    """Check the published statements about ``preset`` against the oracle table.

    Disagreements are logged as deviations and never raised.
    """
    if preset not in PRESETS:
        raise PresetError(f"unknown preset {preset!r}")
    strength = float(result.manifest.get("strength", config.DEFAULT_STRENGTH))
    checks = list(_claims(preset, result, strength))
    for check in checks:
        if check.holds:
            logger.info("Claim reproduced: %s (oracle %s)", check.claim, check.oracle_value)
        else:
            logger.warning(
                "Claim not reproduced: %s (published %s, oracle %s)",
                check.claim, check.published_value, check.oracle_value,
            )
    return checks


def _pairs_arg(text):
    try:
        pairs = []
        for item in text.split(","):
            i, j = item.strip().split("-")
            pairs.append((int(i), int(j)))
        return pairs
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i-j[,i-j...], got {text!r}") from None


def _dvec_arg(text):
    try:
        dvec = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected Dx,Dy,Dz, got {text!r}") from None
    if len(dvec) != 3:
        raise argparse.ArgumentTypeError(f"expected three components, got {text!r}")
    return dvec


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected on or off, got {text!r}")
    return text == "on"


def build_parser():
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", default="-", help="CSV path, '-' for stdout.")
    output.add_argument("--xlsx", default=None, help="Optional inspection workbook path.")
    output.add_argument("--log-level", default="INFO", help="Logging level (DEBUG, INFO, ...).")

    physics = argparse.ArgumentParser(add_help=False)
    physics.add_argument("--strength", type=float, default=config.DEFAULT_STRENGTH)
    physics.add_argument("--tmax", type=float, default=config.DEFAULT_T_MAX)
    physics.add_argument("--dt", type=float, default=config.DEFAULT_DT)
    physics.add_argument("--method", choices=METHODS, default=config.DEFAULT_METHOD)
    physics.add_argument("--corrections", type=_on_off, default=config.DEFAULT_CORRECTIONS,
                         metavar="{on,off}")
    physics.add_argument("--input-alpha2", type=float, default=config.DEFAULT_INPUT_ALPHA2)
    physics.add_argument("--average-inputs", action="store_true",
                         help="Average fidelities over the input Bloch sphere.")

    ap = argparse.ArgumentParser(prog="dmnetwork", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", parents=[physics, output], help="Explicit parameter sweep.")
    sweep.add_argument("--axis", choices=("x", "y", "z"), default=config.DEFAULT_AXIS)
    sweep.add_argument("--pairs", type=_pairs_arg, default=None,
                       help="Node pairs or teleport routes, e.g. 1-2,1-3.")
    sweep.add_argument("--measure", choices=MEASURES + tuple(MEASURE_ALIASES),
                       default="concurrence")
    sweep.add_argument("--bell-pairs", type=int, default=config.DEFAULT_BELL_PAIRS)
    sweep.add_argument("--dvec", type=_dvec_arg, default=None,
                       help="General strength vector Dx,Dy,Dz (oracle method).")

    figure = sub.add_parser("figure", parents=[physics, output], help="Figure preset.")
    figure.add_argument("--fig", choices=sorted(PRESETS), required=True)

    again = sub.add_parser("replay", parents=[output], help="Rerun an emitted CSV.")
    again.add_argument("path")
    return ap


def _run(args):
    if args.command == "replay":
        return replay(args.path)
    params = {
        "strength": args.strength,
        "t_max": args.tmax,
        "dt": args.dt,
        "method": args.method,
        "corrections": args.corrections,
        "input_alpha2": args.input_alpha2,
        "average_inputs": args.average_inputs,
    }
    if args.command == "figure":
        result = run_figure(args.fig, params)
        audit(args.fig, result)
        return result
    return run_sweep(
        axis=args.axis,
        pairs=args.pairs,
        measure=args.measure,
        bell_pairs=args.bell_pairs,
        dvec=args.dvec,
        **params,
    )


def main(argv=None):
    """CLI entry point; returns the process exit code.

    0 success, 1 I/O failure, 2 argument error, 3 numerical invariant violation.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        level = logging.getLevelName(args.log_level.upper())
        if not isinstance(level, int):
            parser.error(f"unknown log level {args.log_level!r}")
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=level, format=config.LOG_FORMAT, datefmt=config.LOG_DATEFMT)
    start_time = time.time()
    try:
        result = _run(args)
        emit_csv(result, args.out)
        if args.xlsx:
            emit_workbook(result, args.xlsx)
    except (InvalidStateError, NotHermitianError, ConvergenceError) as exc:
        logger.error("Numerical invariant violated: %s", exc)
        return 3
    except (DMNetworkError, ValueError) as exc:
        logger.error("Invalid arguments: %s", exc)
        return 2
    except OSError as exc:
        logger.error("Could not write output: %s", exc)
        return 1
    logger.info("Total processing time: %.2f seconds", time.time() - start_time)
    return 0
