"""DM-interaction Hamiltonians, unitaries, network evolution and growth.

The oracle path (Hamiltonian -> Jacobi eigendecomposition -> exponential ->
evolve -> partial trace) is ground truth. The closed-form unitaries are a fast
path for single-axis couplings and must agree with the oracle within 1e-10.
The published reduced-state formulas are kept only as diagnostics.
"""

import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from dmnetwork import config
from dmnetwork.exceptions import CouplingError, DimensionError, InvalidStateError
from dmnetwork.linalg import (
    eig_hermitian,
    eigvals_psd,
    expm_from_eig,
    is_hermitian,
    max_abs,
    partial_trace_pure,
)
from dmnetwork.qstate import (
    BellKind,
    DensityOperator,
    StateVector,
    bell_state,
    embed,
    pauli,
    pauli_expansion,
    purity,
)

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")
METHODS = ("analytic", "oracle")


def _cross_component(axis):
    """``(sigma x tau)_axis`` as a 4x4 matrix, sigma on the first qubit."""
    a, b = {"x": ("y", "z"), "y": ("z", "x"), "z": ("x", "y")}[axis]
    return np.kron(pauli(a), pauli(b)) - np.kron(pauli(b), pauli(a))


@dataclass(frozen=True)
class DMCoupling:
    """DM link ``D . (sigma_i x tau_j)`` between the ordered qubits ``pair``."""

    strength: tuple
    pair: tuple = (2, 3)

    def __post_init__(self):
        strength = tuple(float(d) for d in self.strength)
        pair = tuple(int(q) for q in self.pair)
        if len(strength) != 3 or not all(math.isfinite(d) for d in strength):
            raise CouplingError(f"strength must be three finite reals, got {self.strength!r}")
        if len(pair) != 2 or pair[0] == pair[1] or min(pair) < 1:
            raise CouplingError(f"pair must be two distinct 1-based qubits, got {self.pair!r}")
        object.__setattr__(self, "strength", strength)
        object.__setattr__(self, "pair", pair)

    @classmethod
    def along(cls, axis, strength, pair=(2, 3)):
        """
        Coupling with one active component.

        Args:
            axis (str): "x", "y" or "z"
            strength (float): Component along ``axis``; zero is allowed
            pair (tuple): Ordered 1-based qubits carrying sigma and tau

        Returns:
            DMCoupling: The single-axis link

        Raises:
            CouplingError: For an unknown axis
        """
        if axis not in AXES:
            raise CouplingError(f"unknown axis {axis!r}")
        vector = [0.0, 0.0, 0.0]
        vector[AXES.index(axis)] = strength
        return cls(tuple(vector), pair)

    @property
    def axis(self):
        """Single active axis, or None for a general strength vector."""
        active = [a for a, d in zip(AXES, self.strength) if d != 0.0]
        if len(active) > 1:
            return None
        return active[0] if active else "z"

    @property
    def axis_strength(self):
        axis = self.axis
        return None if axis is None else self.strength[AXES.index(axis)]

    def with_pair(self, pair):
        return DMCoupling(self.strength, pair)

    def _check_fits(self, qubit_count):
        if max(self.pair) > qubit_count:
            raise CouplingError(f"pair {self.pair} out of range for {qubit_count} qubits")


def dm_hamiltonian(c, qubit_count=None):
    """
    Hamiltonian of one DM link, embedded in the full register.

    Args:
        c (DMCoupling): The link
        qubit_count (int): Register size; defaults to ``max(c.pair)``

    Returns:
        np.ndarray: Hermitian ``2**n`` square matrix with zero trace

    Raises:
        CouplingError: If the link does not fit the register
    """
    n = max(c.pair) if qubit_count is None else qubit_count
    c._check_fits(n)
    block = sum(d * _cross_component(a) for a, d in zip(AXES, c.strength))
    return embed(block, c.pair, n)


def unitary_analytic(c, t, qubit_count=None):
    """Closed-form ``exp(-i H t)`` for a single-axis coupling.

    ``cos^2(Dt) + sin^2(Dt) s_a t_a - (i/2) sin(2Dt) (s x t)_a``; for the z
    axis this is the published U_z term by term.
    """
    axis = c.axis
    if axis is None:
        raise CouplingError("analytic unitary needs a single-axis coupling; use the oracle")
    n = max(c.pair) if qubit_count is None else qubit_count
    c._check_fits(n)
    theta = c.axis_strength * t
    block = (
        math.cos(theta) ** 2 * np.eye(4, dtype=np.complex128)
        + math.sin(theta) ** 2 * np.kron(pauli(axis), pauli(axis))
        - 0.5j * math.sin(2.0 * theta) * _cross_component(axis)
    )
    return embed(block, c.pair, n)


@functools.lru_cache(maxsize=64)
def _spectrum(strength, pair, qubit_count):
    vals, vecs = eig_hermitian(dm_hamiltonian(DMCoupling(strength, pair), qubit_count))
    vals.setflags(write=False)
    vecs.setflags(write=False)
    logger.debug("cached spectrum for D=%s pair=%s n=%d", strength, pair, qubit_count)
    return vals, vecs


def unitary_oracle(c, t, qubit_count=None):
    """
    ``exp(-i H t)`` through the Jacobi eigendecomposition of ``H``.

    The spectrum is cached per strength, pair and register size.

    Args:
        c (DMCoupling): The link, any strength vector
        t (float): Evolution time
        qubit_count (int): Register size; defaults to ``max(c.pair)``

    Returns:
        np.ndarray: The unitary propagator
    """
    n = max(c.pair) if qubit_count is None else qubit_count
    c._check_fits(n)
    vals, vecs = _spectrum(c.strength, c.pair, n)
    return expm_from_eig(vals, vecs, t)


def unitary(c, t, qubit_count=None, method=config.DEFAULT_METHOD):
    """Propagator by ``method``, "analytic" or "oracle"."""
    if method == "analytic":
        return unitary_analytic(c, t, qubit_count)
    if method == "oracle":
        return unitary_oracle(c, t, qubit_count)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class HistoryEntry:
    action: str
    coupling: DMCoupling
    t: float
    method: str
    new_pair: BellKind = None


@dataclass(frozen=True, eq=False)
class NetworkState:
    """Pure global network state plus the couplings applied to reach it."""

    psi: StateVector
    history: tuple = field(default=())

    @property
    def node_count(self):
        return self.psi.qubit_count


def initial_network(pairs):
    """Tensor product of Bell pairs; pair k occupies nodes 2k-1 and 2k."""
    pairs = [BellKind(p) for p in pairs]
    if not pairs:
        raise DimensionError("a network needs at least one Bell pair")
    amps = np.ones(1, dtype=np.complex128)
    for kind in pairs:
        amps = np.kron(amps, bell_state(kind).amplitudes)
    return NetworkState(StateVector(2 * len(pairs), amps))


def evolve(net, c, t, method=config.DEFAULT_METHOD):
    """Apply ``U(t)`` of one coupling to the whole network."""
    n = net.node_count
    c._check_fits(n)
    amps = unitary(c, t, n, method) @ net.psi.amplitudes
    entry = HistoryEntry("evolve", c, float(t), method)
    return NetworkState(StateVector(n, amps), net.history + (entry,))


def evolve_many(net, couplings, t, method=config.DEFAULT_METHOD):
    """Evolve every link for the same ``t``; links on disjoint pairs commute."""
    for c in couplings:
        net = evolve(net, c, t, method)
    return net


def grow(net, new_pair, c, t, method=config.DEFAULT_METHOD):
    """Append a Bell pair and let the link to it act for ``t``."""
    n = net.node_count
    if set(c.pair) != {n, n + 1}:
        raise CouplingError(f"growth link must join nodes {n} and {n + 1}, got {c.pair}")
    kind = BellKind(new_pair)
    amps = np.kron(net.psi.amplitudes, bell_state(kind).amplitudes)
    extended = StateVector(n + 2, amps)
    evolved = unitary(c, t, n + 2, method) @ extended.amplitudes
    entry = HistoryEntry("grow", c, float(t), method, kind)
    return NetworkState(StateVector(n + 2, evolved), net.history + (entry,))


def grown_network(bell_pairs, c, t, method=config.DEFAULT_METHOD):
    """The linked network of ``bell_pairs`` phi+ pairs at time ``t``.

    Two phi+ pairs linked on (2, 3); every further pair is grown on with the
    same strength vector linking (2k, 2k+1), all for the same ``t``.
    """
    if bell_pairs < 2:
        raise DimensionError("the linked network needs at least two Bell pairs")
    net = evolve(initial_network([BellKind.PHI_PLUS] * 2), c.with_pair((2, 3)), t, method)
    for k in range(2, bell_pairs):
        net = grow(net, BellKind.PHI_PLUS, c.with_pair((2 * k, 2 * k + 1)), t, method)
    return net


def reduced(net, keep):
    """
    Reduced state of the nodes in ``keep``.

    Args:
        net (NetworkState): Network to trace
        keep (iterable): 1-based nodes to keep; order is ignored

    Returns:
        DensityOperator: State of the kept nodes, lowest index most significant
    """
    keep = sorted(set(keep))
    rho = partial_trace_pure(net.psi.amplitudes, net.node_count, keep)
    return DensityOperator(len(keep), rho)


def global_purity(net):
    """``Tr rho^2`` of the global density operator ``|psi><psi|``.

    Args:
        net (NetworkState): Network whose global state is checked

    Returns:
        float: Purity, 1 for a normalised pure state
    """
    v = net.psi.amplitudes
    return purity(np.outer(v, v.conj()))


def _printed_forms(pair, axis, strength, t):
    s2 = math.sin(2 * strength * t)
    c2 = math.cos(2 * strength * t)
    ct = math.cos(strength * t)
    st = math.sin(strength * t)
    quartic = ct ** 4 - st ** 4
    if axis == "z" and pair == (1, 2):
        czz = ct ** 4 + st ** 4 - s2 ** 2
        return {("x", "x"): quartic, ("y", "y"): quartic, ("z", "z"): czz}
    if axis == "z" and pair == (1, 3):
        cxy = 0.25j * ct ** 2 * s2
        return {("x", "y"): -cxy, ("y", "x"): cxy, ("z", "z"): 0.5 * (1 + 0.5 * s2 ** 2)}
    if axis == "z" and pair == (1, 4):
        cxy = 1j * s2 ** 2 * ct ** 2
        return {("x", "y"): cxy, ("y", "x"): -cxy, ("z", "z"): 0.5 * (1 - c2 - 4 * s2 ** 2)}
    if axis == "z" and pair == (2, 3):
        cxx = s2 * (0.5 * st ** 2 - 0.75 * ct ** 2)
        cxy = 0.5j * s2 * (1 - 0.5 * ct ** 2)
        # the printed form repeats sigma_x tau_x for the c_xy term
        return {("x", "x"): cxx + cxy, ("y", "y"): cxx, ("y", "x"): -cxy, ("z", "z"): 4.5 * s2 ** 2}
    if axis == "z" and pair == (2, 4):
        return {("z", "z"): 0.5 + s2 ** 2 / 8 - 0.5 * c2 ** 2}
    if axis == "x" and pair == (1, 2):
        return {("x", "x"): 1 - 1.5 * s2 ** 2, ("y", "y"): -quartic, ("z", "z"): quartic}
    if axis == "x" and pair == (2, 3):
        return {("x", "x"): -0.5 * s2 ** 2, ("y", "y"): 1.25 * s2 ** 2}
    if axis == "z" and pair == (1, 6):
        nu1, nu2 = (1 + s2 ** 2) / 4, 1 / 8
        nu3 = (2 * c2 ** 2 + s2 ** 2 * (1 + c2 ** 2)) / 8
        nu4 = (4 + s2 ** 2 + s2 ** 4) / 8
        nu5 = c2 ** 2 * s2 ** 2 / 8
        return {
            ("z", "i"): nu1 + nu4 - nu2 - nu3,
            ("i", "z"): nu1 + nu3 - nu2 - nu4,
            ("x", "x"): nu5,
            ("y", "y"): -nu5,
            ("z", "z"): nu1 + nu2 - nu3 - nu4,
        }
    return None


def printed_reduced_state(pair, axis, strength, t):
    """The published closed form for a reduced channel, or None.

    rho_15 is never available: its coefficient list skips mu_4.
    """
    coefficients = _printed_forms(tuple(pair), axis, strength, t)
    return None if coefficients is None else pauli_expansion(coefficients)


@dataclass(frozen=True)
class PrintedFormComparison:
    pair: tuple
    axis: str
    t: float
    max_deviation: float
    printed_is_state: bool


def _is_state(m):
    if not is_hermitian(m) or abs(np.trace(m) - 1.0) > config.HERMITIAN_TOL:
        return False
    try:
        eigvals_psd(m)
    except InvalidStateError:
        return False
    return True


def compare_printed_form(net, pair, axis, strength, t):
    """Log how far the printed closed form sits from the oracle state."""
    printed = printed_reduced_state(pair, axis, strength, t)
    if printed is None:
        logger.warning("no usable closed form for rho_%s (%s axis); oracle only", pair, axis)
        return None
    oracle = reduced(net, pair).matrix
    result = PrintedFormComparison(
        tuple(pair), axis, float(t), max_abs(printed - oracle), _is_state(printed)
    )
    level = logging.INFO if result.max_deviation <= config.HERMITIAN_TOL else logging.WARNING
    logger.log(
        level,
        "closed form rho_%d%d%s at t=%g: max deviation %.3e from oracle, valid state: %s",
        pair[0], pair[1], axis, t, result.max_deviation, result.printed_is_state,
    )
    return result
