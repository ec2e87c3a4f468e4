"""State and gate constructors: Bell pairs, Paulis, operator embedding."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from dmnetwork import config
from dmnetwork.exceptions import DimensionError, InvalidStateError
from dmnetwork.linalg import as_cmatrix, eigvals_psd, is_hermitian, max_abs

_S2 = 1.0 / math.sqrt(2.0)

_PAULI = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
for _m in _PAULI.values():
    _m.setflags(write=False)


class BellKind(str, enum.Enum):
    """The four Bell states; values double as CSV labels."""

    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"
    PSI_PLUS = "psi_plus"
    PSI_MINUS = "psi_minus"


# phi(+/-) = (|11> +/- |00>)/sqrt2, psi(+/-) = (|10> +/- |01>)/sqrt2, basis |00>,|01>,|10>,|11>
_BELL_AMPLITUDES = {
    BellKind.PHI_PLUS: (_S2, 0.0, 0.0, _S2),
    BellKind.PHI_MINUS: (-_S2, 0.0, 0.0, _S2),
    BellKind.PSI_PLUS: (0.0, _S2, _S2, 0.0),
    BellKind.PSI_MINUS: (0.0, -_S2, _S2, 0.0),
}


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state over ``qubit_count`` qubits; normalised within NORM_TOL."""

    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.asarray(self.amplitudes).reshape(-1))
        if self.qubit_count < 1 or amps.size != 2 ** self.qubit_count:
            raise DimensionError(
                f"{amps.size} amplitudes do not describe {self.qubit_count} qubits"
            )
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("state vector has non-finite amplitudes")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > config.NORM_TOL:
            raise InvalidStateError(f"state vector norm {norm!r} is not 1")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, PSD operator over ``qubit_count`` qubits."""

    qubit_count: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmatrix(self.matrix)
        dim = 2 ** self.qubit_count
        if m.shape != (dim, dim):
            raise DimensionError(f"density matrix {m.shape} does not match {self.qubit_count} qubits")
        if not is_hermitian(m):
            raise InvalidStateError(f"density matrix not Hermitian ({max_abs(m - m.conj().T):.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > config.HERMITIAN_TOL:
            raise InvalidStateError(f"density matrix trace {tr} is not 1")
        eigvals_psd(m)
        object.__setattr__(self, "matrix", _frozen(m))


def bell_state(kind):
    """
    Two-qubit Bell state.

    Args:
        kind: A BellKind or its string value, e.g. "phi_plus"

    Returns:
        StateVector: The normalised Bell pair
    """
    return StateVector(2, _BELL_AMPLITUDES[BellKind(kind)])


def pauli(axis):
    """
    Read-only Pauli matrix.

    Args:
        axis (str): "x", "y", "z", or "i" for the identity

    Returns:
        np.ndarray: The 2x2 matrix

    Raises:
        ValueError: For any other axis name
    """
    try:
        return _PAULI[str(axis).lower()]
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def hadamard():
    return _S2 * np.array([[1, 1], [1, -1]], dtype=np.complex128)


def cnot():
    """CNOT with the first qubit as control."""
    m = np.eye(4, dtype=np.complex128)
    m[2:, 2:] = _PAULI["x"]
    return m


def projector(bits):
    """Computational-basis projector ``|b1 b2 ...><b1 b2 ...|``."""
    index = int("".join(str(int(b)) for b in bits), 2)
    p = np.zeros((2 ** len(bits),) * 2, dtype=np.complex128)
    p[index, index] = 1.0
    return p


def maximally_mixed(qubit_count):
    """``I / 2**qubit_count`` as a plain matrix."""
    dim = 2 ** qubit_count
    return np.eye(dim, dtype=np.complex128) / dim


def embed(op, targets, qubit_count):
    """Lift ``op`` acting on ``targets`` (in that order) to ``qubit_count`` qubits.

    Targets may be non-adjacent and in any order; the rest gets the identity.

    Args:
        op: Operator on ``len(targets)`` qubits, first target most significant
        targets: Distinct 1-based qubit indices
        qubit_count (int): Size of the register

    Returns:
        np.ndarray: The ``2**qubit_count`` square operator

    Raises:
        DimensionError: On repeated, out-of-range or mismatched targets
    """
    op = as_cmatrix(op)
    targets = [int(t) for t in targets]
    k = len(targets)
    if len(set(targets)) != k or not targets:
        raise DimensionError(f"targets {targets} must be distinct and nonempty")
    if min(targets) < 1 or max(targets) > qubit_count:
        raise DimensionError(f"targets {targets} out of range for {qubit_count} qubits")
    if op.shape != (2 ** k, 2 ** k):
        raise DimensionError(f"operator {op.shape} does not act on {k} qubits")
    rest = [q for q in range(qubit_count) if q + 1 not in targets]
    order = [t - 1 for t in targets] + rest
    full = np.kron(op, np.eye(2 ** len(rest), dtype=np.complex128))
    inv = list(np.argsort(order))
    tensor = full.reshape([2] * (2 * qubit_count))
    tensor = tensor.transpose(inv + [i + qubit_count for i in inv])
    return tensor.reshape(2 ** qubit_count, 2 ** qubit_count)


def density_from(psi):
    """
    Projector ``|psi><psi|`` of a pure state.

    Args:
        psi (StateVector): State to project on

    Returns:
        DensityOperator: The rank-one density operator
    """
    v = psi.amplitudes
    return DensityOperator(psi.qubit_count, np.outer(v, v.conj()))


def purity(rho):
    """``Tr rho^2`` of a Hermitian operator, as ``sum |rho_ij|^2``."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return float(np.sum(np.abs(m) ** 2))


def bloch_vector(rho):
    """``(Tr rho sx, Tr rho sy, Tr rho sz)`` of a single-qubit operator."""
    m = rho.matrix if isinstance(rho, DensityOperator) else as_cmatrix(rho)
    if m.shape != (2, 2):
        raise DimensionError(f"Bloch vector needs a 2x2 operator, got {m.shape}")
    return np.array([np.trace(m @ _PAULI[a]).real for a in "xyz"])


def werner(p):
    """``p |phi+><phi+| + (1 - p) I/4``."""
    v = bell_state(BellKind.PHI_PLUS).amplitudes
    return DensityOperator(2, p * np.outer(v, v.conj()) + (1.0 - p) * maximally_mixed(2))


def pauli_expansion(coefficients):
    """``1/4 (1 + sum c_ab sigma_a (x) tau_b)`` from ``{("x", "y"): c, ...}``.

    Axis ``"i"`` stands for the identity, so ``("z", "i")`` is a local term.
    The result is not validated: printed closed forms may not be states.
    """
    m = np.eye(4, dtype=np.complex128)
    for (a, b), c in coefficients.items():
        m = m + c * np.kron(pauli(a), pauli(b))
    return m / 4.0
