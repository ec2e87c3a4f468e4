"""Entanglement measures: Wootters concurrence and the network's C_min."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from dmnetwork import config
from dmnetwork.dmnet import evolve, global_purity, reduced
from dmnetwork.exceptions import DimensionError, InvalidStateError
from dmnetwork.linalg import partial_trace_pure, sqrtm_psd
from dmnetwork.qstate import DensityOperator, pauli
from dmnetwork.results import SweepResult, check_grid, evaluate_grid

logger = logging.getLogger(__name__)

_YY = np.kron(pauli("y"), pauli("y"))


@dataclass(frozen=True)
class ConcurrenceValue:
    value: float
    pair: tuple
    t: float


@dataclass(frozen=True)
class DeathInterval:
    """A stretch where a concurrence sits at zero; ``revival`` is None if it never returns."""

    start: float
    revival: float


def _two_qubit_matrix(rho):
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=np.complex128)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a two-qubit operator, got {m.shape}")
    return m


def spin_flip(rho):
    """``(sigma_y x sigma_y) rho* (sigma_y x sigma_y)``."""
    m = _two_qubit_matrix(rho)
    return _YY @ m.conj() @ _YY


def _from_roots(roots):
    roots = np.where(roots < config.SQRT_EIG_CLAMP, 0.0, roots)
    roots = np.sort(roots)[::-1]
    return float(max(roots[0] - roots[1] - roots[2] - roots[3], 0.0))


def concurrence(rho):
    """Wootters concurrence without a non-Hermitian eigensolver.

    The square roots of the eigenvalues of ``rho rho~`` are the eigenvalues of
    ``R = sqrt(sqrt(rho) rho~ sqrt(rho))``, which are the singular values of
    ``sqrt(rho) sqrt(rho~)``. Only the PSD square root needs an eigensolver,
    and ``sqrt(rho~)`` is the spin flip of ``sqrt(rho)``.
    """
    m = _two_qubit_matrix(rho)
    root = sqrtm_psd(m)
    singular = np.linalg.svd(root @ spin_flip(root), compute_uv=False)
    return _from_roots(singular)


def concurrence_charpoly(rho):
    """Concurrence from the characteristic polynomial of ``rho rho~``.

    Coefficients come from Faddeev-LeVerrier traces and the roots from
    ``numpy.roots``; used as an independent reference for ``concurrence``.
    """
    m = _two_qubit_matrix(rho)
    a = m @ spin_flip(m)
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    mk = np.zeros_like(a)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ mk) / k)
    poly = np.real(np.array(coeffs))
    roots = np.real(np.roots(poly))
    return _from_roots(np.sqrt(np.clip(roots, 0.0, None)))


def pure_concurrence(psi):
    """``2|ad - bc|`` for a two-qubit amplitude vector ``(a, b, c, d)``."""
    a, b, c, d = np.asarray(getattr(psi, "amplitudes", psi)).reshape(4)
    return float(2.0 * abs(a * d - b * c))


def concurrence_at(net, pair, t=0.0):
    """
    Concurrence of one node pair, tagged with the pair and time.

    Args:
        net (NetworkState): Network at time ``t``
        pair (tuple): Two 1-based nodes
        t (float): Time stamp carried into the result

    Returns:
        ConcurrenceValue: Value in [0, 1]
    """
    return ConcurrenceValue(concurrence(reduced(net, pair)), tuple(pair), float(t))


def min_concurrence(net):
    """``sqrt(1 - (1/N) sum_i Tr rho_i^2)`` of a pure N-qubit network state."""
    purity = global_purity(net)
    if purity < 1.0 - config.PURITY_GATE:
        raise InvalidStateError(f"global state is not pure (purity {purity!r})")
    n = net.node_count
    amps = net.psi.amplitudes
    total = sum(
        float(np.sum(np.abs(partial_trace_pure(amps, n, [q])) ** 2)) for q in range(1, n + 1)
    )
    return math.sqrt(max(0.0, 1.0 - total / n))


def axis_label(c):
    """Column suffix: the single axis, or "g" for a general strength vector."""
    return c.axis or "g"


def pair_label(pair):
    return f"{pair[0]}{pair[1]}"


def concurrence_measures(pairs, label):
    """Grid measures ``C_<ij><label>`` for ``evaluate_grid``."""
    return [
        (f"C_{pair_label(p)}{label}", lambda t, net, p=tuple(p): concurrence(reduced(net, p)))
        for p in pairs
    ]


def min_concurrence_measure(label):
    return f"Cmin_{label}", lambda t, net: min_concurrence(net)


def concurrence_series(net0, c, t_grid, pairs, method=config.DEFAULT_METHOD):
    """
    Pair concurrences of ``evolve(net0, c, t)`` over a time grid.

    Args:
        net0 (NetworkState): Network at ``t = 0``
        c (DMCoupling): Link applied for each ``t``
        t_grid: Strictly increasing, non-negative times
        pairs (list): Node pairs, one ``C_<ij><axis>`` column each
        method (str): "analytic" or "oracle"

    Returns:
        SweepResult: Table with a ``t`` column and one column per pair
    """
    t_grid = check_grid(t_grid)
    pairs = [tuple(p) for p in pairs]
    measures = concurrence_measures(pairs, axis_label(c))
    table = evaluate_grid(t_grid, lambda t: evolve(net0, c, t, method), measures)
    manifest = {
        "measure": "concurrence",
        "strength": list(c.strength),
        "coupling_pair": list(c.pair),
        "pairs": [list(p) for p in pairs],
        "method": method,
        "units": config.UNITS_NOTE,
    }
    return SweepResult(table, manifest)


def min_concurrence_series(net0, c, t_grid, method=config.DEFAULT_METHOD):
    """Single ``Cmin_<axis>`` column of ``evolve(net0, c, t)`` over ``t_grid``."""
    t_grid = check_grid(t_grid)
    measures = [min_concurrence_measure(axis_label(c))]
    table = evaluate_grid(t_grid, lambda t: evolve(net0, c, t, method), measures)
    manifest = {
        "measure": "min_concurrence",
        "strength": list(c.strength),
        "coupling_pair": list(c.pair),
        "method": method,
        "units": config.UNITS_NOTE,
    }
    return SweepResult(table, manifest)


def death_intervals(t, values, tol=config.HERMITIAN_TOL):
    """Zero stretches of a concurrence series (sudden death) and their revivals."""
    t = np.asarray(t, dtype=float)
    dead = np.asarray(values, dtype=float) <= tol
    intervals = []
    start = None
    for k, is_dead in enumerate(dead):
        if is_dead and start is None:
            start = t[k]
        elif not is_dead and start is not None:
            intervals.append(DeathInterval(float(start), float(t[k])))
            start = None
    if start is not None:
        intervals.append(DeathInterval(float(start), None))
    return intervals
