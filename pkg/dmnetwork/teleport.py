"""Standard teleportation through a (generally mixed) two-node channel.

The sender holds the unknown qubit (qubit 1) and the first channel qubit
(qubit 2); the receiver holds qubit 3. CNOT 1->2 and a Hadamard on qubit 1
precede a computational-basis measurement of qubits 1 and 2, whose four
outcomes are enumerated with exact probabilities.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from dmnetwork import config
from dmnetwork.dmnet import evolve, reduced
from dmnetwork.entmeas import axis_label, pair_label
from dmnetwork.exceptions import DimensionError, InvalidStateError
from dmnetwork.qstate import (
    BellKind,
    DensityOperator,
    bloch_vector,
    cnot,
    embed,
    hadamard,
    maximally_mixed,
    pauli,
)
from dmnetwork.results import SweepResult, check_grid, evaluate_grid

logger = logging.getLogger(__name__)

_CIRCUIT = embed(hadamard(), [1], 3) @ embed(cnot(), [1, 2], 3)

# measured bits (m1, m2) -> Bell state the sender's pair was projected on
OUTCOMES = {
    (0, 0): BellKind.PHI_PLUS,
    (0, 1): BellKind.PSI_PLUS,
    (1, 0): BellKind.PHI_MINUS,
    (1, 1): BellKind.PSI_MINUS,
}


def _correction(bits):
    m1, m2 = bits
    w = np.eye(2, dtype=np.complex128)
    if m2:
        w = pauli("x") @ w
    if m1:
        w = pauli("z") @ w
    return w


@dataclass(frozen=True)
class UnknownQubit:
    """``alpha|0> + beta|1>`` to be teleported."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha, beta = complex(self.alpha), complex(self.beta)
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if not (math.isfinite(norm) and abs(norm - 1.0) <= config.NORM_TOL):
            raise InvalidStateError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_alpha2(cls, alpha2, phase=0.0):
        """Real ``alpha = sqrt(alpha2)``, ``beta = e^{i phase} sqrt(1 - alpha2)``."""
        if not 0.0 <= alpha2 <= 1.0:
            raise ValueError(f"alpha^2 must lie in [0, 1], got {alpha2!r}")
        return cls(math.sqrt(alpha2), complex(np.exp(1j * phase)) * math.sqrt(1.0 - alpha2))

    @classmethod
    def from_bloch(cls, s):
        sx, sy, sz = (float(v) for v in s)
        theta = math.acos(max(-1.0, min(1.0, sz)))
        phi = math.atan2(sy, sx)
        return cls(math.cos(theta / 2), complex(np.exp(1j * phi)) * math.sin(theta / 2))

    @classmethod
    def random(cls, rng):
        """Haar-random pure qubit, i.e. uniform on the Bloch sphere."""
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = v / np.linalg.norm(v)
        return cls(v[0], v[1])

    @property
    def amplitudes(self):
        return np.array([self.alpha, self.beta], dtype=np.complex128)

    @property
    def bloch(self):
        # s_y = Tr(rho sigma_y) = 2 Im(alpha* beta)
        overlap = self.alpha.conjugate() * self.beta
        return np.array(
            [2.0 * overlap.real, 2.0 * overlap.imag, abs(self.alpha) ** 2 - abs(self.beta) ** 2]
        )

    def density(self):
        v = self.amplitudes
        return np.outer(v, v.conj())


def _bloch_of(output):
    return bloch_vector(output) if isinstance(output, DensityOperator) else np.asarray(output)


def fidelity_standard(qubit, output):
    """``<psi|rho|psi> = (1 + s_u . s_t) / 2``."""
    return 0.5 * (1.0 + float(np.dot(qubit.bloch, _bloch_of(output))))


def fidelity_paper(qubit, output):
    """The literal ``(1 + s_u . s_t) / 4``; reported next to the standard value only."""
    return 0.25 * (1.0 + float(np.dot(qubit.bloch, _bloch_of(output))))


@dataclass(frozen=True)
class TeleportOutcome:
    bell_outcome: BellKind
    probability: float
    output_state: DensityOperator
    fidelity_paper: float
    fidelity_standard: float

    @property
    def bits(self):
        return next(bits for bits, kind in OUTCOMES.items() if kind is self.bell_outcome)


def _channel_matrix(channel):
    m = channel.matrix if isinstance(channel, DensityOperator) else np.asarray(channel, np.complex128)
    if m.shape != (4, 4):
        raise DimensionError(f"teleportation needs a two-qubit channel, got {m.shape}")
    return m


def _branches(channel, qubit, corrections):
    """``(bits, probability, receiver operator)`` for the four outcomes."""
    total = np.kron(qubit.density(), _channel_matrix(channel))
    after = (_CIRCUIT @ total @ _CIRCUIT.conj().T).reshape(4, 2, 4, 2)
    branches = []
    for bits in OUTCOMES:
        k = 2 * bits[0] + bits[1]
        block = after[k, :, k, :]
        probability = float(np.trace(block).real)
        if probability < config.ZERO_PROBABILITY:
            logger.debug("outcome %s has probability %.3e; output set to I/2", bits, probability)
            out = maximally_mixed(1)
        else:
            out = block / probability
            if corrections:
                w = _correction(bits)
                out = w @ out @ w.conj().T
        branches.append((bits, max(probability, 0.0), 0.5 * (out + out.conj().T)))
    total_probability = sum(p for _, p, _ in branches)
    if abs(total_probability - 1.0) > config.HERMITIAN_TOL:
        raise InvalidStateError(f"outcome probabilities sum to {total_probability!r}")
    return branches


def teleport(channel, qubit, corrections=config.DEFAULT_CORRECTIONS):
    """All four outcome branches of teleporting ``qubit`` through ``channel``."""
    outcomes = []
    for bits, probability, out in _branches(channel, qubit, corrections):
        state = DensityOperator(1, out)
        s_t = bloch_vector(state)
        outcomes.append(
            TeleportOutcome(
                OUTCOMES[bits],
                probability,
                state,
                fidelity_paper(qubit, s_t),
                fidelity_standard(qubit, s_t),
            )
        )
    return outcomes


@dataclass(frozen=True)
class AverageFidelity:
    standard: float
    literal: float


def average_fidelity(outcomes, qubit=None):
    """Probability-weighted fidelity over the outcome branches.

    With ``qubit`` given the fidelities are recomputed against it; otherwise
    the values stored on each outcome are averaged.
    """
    standard = literal = 0.0
    for o in outcomes:
        if qubit is None:
            fs, fp = o.fidelity_standard, o.fidelity_paper
        else:
            fs, fp = fidelity_standard(qubit, o.output_state), fidelity_paper(qubit, o.output_state)
        standard += o.probability * fs
        literal += o.probability * fp
    return AverageFidelity(standard, literal)


def _axis_inputs():
    for axis in range(3):
        for sign in (1.0, -1.0):
            s = [0.0, 0.0, 0.0]
            s[axis] = sign
            yield UnknownQubit.from_bloch(s)


def average_over_inputs(channel, corrections=config.DEFAULT_CORRECTIONS):
    """Exact uniform input average from the six Pauli-axis states.

    The fidelity is quadratic in the input, and the six axis states form a
    spherical 3-design, so this equals the average over the Bloch sphere.
    """
    results = [average_fidelity(teleport(channel, q, corrections)) for q in _axis_inputs()]
    return AverageFidelity(
        float(np.mean([r.standard for r in results])),
        float(np.mean([r.literal for r in results])),
    )


def montecarlo_average_fidelity(
    channel, samples, seed=config.DEFAULT_SEED, corrections=config.DEFAULT_CORRECTIONS
):
    """Sampled average: uniform inputs, one outcome drawn per input."""
    rng = np.random.default_rng(seed)
    total = 0.0
    for _ in range(samples):
        qubit = UnknownQubit.random(rng)
        branches = _branches(channel, qubit, corrections)
        weights = np.array([p for _, p, _ in branches])
        _, _, out = branches[rng.choice(4, p=weights / weights.sum())]
        total += fidelity_standard(qubit, bloch_vector(out))
    logger.debug("Monte-Carlo fidelity over %d samples (seed %d)", samples, seed)
    return total / samples


def outcome_table(outcomes):
    """One row per branch: bits, probability, output Bloch vector and both fidelities."""
    rows = []
    for o in outcomes:
        sx, sy, sz = bloch_vector(o.output_state)
        rows.append(
            {
                "outcome": o.bell_outcome.value,
                "m1": o.bits[0],
                "m2": o.bits[1],
                "probability": o.probability,
                "s_x": sx,
                "s_y": sy,
                "s_z": sz,
                "fidelity_standard": o.fidelity_standard,
                "fidelity_paper": o.fidelity_paper,
            }
        )
    return pd.DataFrame(rows)


def route_fidelity(
    net,
    route,
    qubit,
    corrections=config.DEFAULT_CORRECTIONS,
    average_inputs=False,
):
    """
    Average fidelity of teleporting through ``reduced(net, route)``.

    The sender holds ``route[0]`` and the receiver ``route[1]``.

    Args:
        net (NetworkState): Network supplying the channel
        route (tuple): Sender and receiver nodes
        qubit (UnknownQubit): Input state; unused with ``average_inputs``
        corrections (bool): Apply the Pauli corrections on the receiver
        average_inputs (bool): Average over all inputs instead of ``qubit``

    Returns:
        AverageFidelity: Standard and literal averages
    """
    channel = route_channel(net, route)
    if average_inputs:
        return average_over_inputs(channel, corrections)
    return average_fidelity(teleport(channel, qubit, corrections))


def route_channel(net, route):
    """Two-node channel with the sender (``route[0]``) as its first qubit."""
    channel = reduced(net, route).matrix
    if route[0] > route[1]:
        channel = channel.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    return channel


def fidelity_measures(
    routes,
    label,
    qubit,
    corrections=config.DEFAULT_CORRECTIONS,
    average_inputs=False,
    outcome_rows=None,
):
    """Grid measures ``(F_<ij><label>, Fliteral_<ij><label>)`` per route.

    When ``outcome_rows`` is a list, the per-outcome table of every grid point
    is appended to it (fixed-input mode only).
    """

    def measure(route):
        def fidelity_at(t, net):
            if average_inputs:
                result = route_fidelity(net, route, qubit, corrections, average_inputs=True)
                return result.standard, result.literal
            outcomes = teleport(route_channel(net, route), qubit, corrections)
            if outcome_rows is not None:
                table = outcome_table(outcomes)
                table.insert(0, "route", pair_label(route))
                table.insert(0, "t", t)
                outcome_rows.append(table)
            result = average_fidelity(outcomes)
            return result.standard, result.literal

        return fidelity_at

    return [
        ((f"F_{pair_label(r)}{label}", f"Fliteral_{pair_label(r)}{label}"), measure(tuple(r)))
        for r in routes
    ]


def fidelity_series(
    net0,
    c,
    t_grid,
    route,
    qubit,
    corrections=config.DEFAULT_CORRECTIONS,
    average_inputs=False,
    method=config.DEFAULT_METHOD,
):
    """
    Average teleportation fidelity through ``route`` of ``evolve(net0, c, t)``.

    Args:
        net0 (NetworkState): Network at ``t = 0``
        c (DMCoupling): Link applied for each ``t``
        t_grid: Strictly increasing, non-negative times
        route (tuple): Sender and receiver nodes
        qubit (UnknownQubit): Input state, None with ``average_inputs``
        corrections (bool): Apply the Pauli corrections on the receiver
        average_inputs (bool): Average over all inputs instead of ``qubit``
        method (str): "analytic" or "oracle"

    Returns:
        SweepResult: ``F_<ij><axis>`` and ``Fliteral_<ij><axis>`` columns, plus an
        ``outcomes`` extra table for a fixed input
    """
    t_grid = check_grid(t_grid)
    route = tuple(route)
    outcome_rows = None if average_inputs else []
    measures = fidelity_measures(
        [route], axis_label(c), qubit, corrections, average_inputs, outcome_rows
    )
    table = evaluate_grid(t_grid, lambda t: evolve(net0, c, t, method), measures)
    manifest = {
        "measure": "fidelity",
        "strength": list(c.strength),
        "coupling_pair": list(c.pair),
        "routes": [list(route)],
        "method": method,
        "corrections": bool(corrections),
        "average_inputs": bool(average_inputs),
        "units": config.UNITS_NOTE,
    }
    if qubit is not None:
        manifest["input_alpha"] = [qubit.alpha.real, qubit.alpha.imag]
        manifest["input_beta"] = [qubit.beta.real, qubit.beta.imag]
    extras = {"outcomes": pd.concat(outcome_rows, ignore_index=True)} if outcome_rows else {}
    return SweepResult(table, manifest, extras)
