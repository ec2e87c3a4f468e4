import math

import numpy as np
import pytest

from conftest import random_pure, random_unitary
from dmnetwork.entmeas import concurrence
from dmnetwork.exceptions import DimensionError, InvalidStateError
from dmnetwork.linalg import is_unitary, partial_trace_pure
from dmnetwork.qstate import (
    BellKind,
    DensityOperator,
    StateVector,
    bell_state,
    bloch_vector,
    cnot,
    density_from,
    embed,
    hadamard,
    maximally_mixed,
    pauli,
    pauli_expansion,
    projector,
    purity,
    werner,
)

S2 = 1 / math.sqrt(2)


def _equal_up_to_phase(a, b, tol=1e-12):
    overlap = np.vdot(a, b)
    return abs(abs(overlap) - 1) < tol and np.abs(a * overlap - b).max() < tol


def test_phi_plus_amplitudes():
    assert np.abs(bell_state("phi_plus").amplitudes - [S2, 0, 0, S2]).max() < 1e-15


def test_psi_minus_amplitudes():
    assert _equal_up_to_phase(bell_state(BellKind.PSI_MINUS).amplitudes, np.array([0, S2, -S2, 0]))


def test_bell_states_are_orthonormal():
    basis = np.array([bell_state(k).amplitudes for k in BellKind])
    assert np.abs(basis @ basis.conj().T - np.eye(4)).max() < 1e-15


def test_phi_plus_density_matches_pauli_expansion():
    expected = pauli_expansion({("x", "x"): 1, ("y", "y"): -1, ("z", "z"): 1})
    assert np.abs(density_from(bell_state("phi_plus")).matrix - expected).max() < 1e-15


def test_pauli_relations():
    x, y, z = pauli("x"), pauli("y"), pauli("z")
    assert np.abs(z - np.diag([1, -1])).max() == 0
    assert np.abs(x @ x - np.eye(2)).max() == 0
    assert np.abs(x @ y - y @ x - 2j * z).max() == 0
    with pytest.raises(ValueError):
        pauli("w")


def test_embed_examples():
    x, z = pauli("x"), pauli("z")
    assert np.abs(embed(x, [1], 1) - x).max() == 0
    assert np.abs(embed(z, [2], 2) - np.kron(np.eye(2), z)).max() == 0


def test_embed_reversed_cnot_on_basis_states():
    # control qubit 3, target qubit 1
    op = embed(cnot(), [3, 1], 3)
    for index in range(8):
        q1, q2, q3 = (index >> 2) & 1, (index >> 1) & 1, index & 1
        expected = ((q1 ^ q3) << 2) | (q2 << 1) | q3
        column = op[:, index]
        assert column[expected] == 1
        assert np.abs(column).sum() == 1


def test_embed_on_disjoint_qubits_commutes(rng):
    a = random_unitary(rng, 4)
    b = random_unitary(rng, 2)
    ea = embed(a, [1, 3], 4)
    eb = embed(b, [4], 4)
    assert np.abs(ea @ eb - eb @ ea).max() < 1e-12


def test_embed_rejects_bad_targets():
    with pytest.raises(DimensionError):
        embed(np.eye(4), [1, 1], 3)
    with pytest.raises(DimensionError):
        embed(np.eye(4), [2, 4], 3)
    with pytest.raises(DimensionError):
        embed(np.eye(2), [1, 2], 3)


def test_density_from_examples(rng):
    zero = StateVector(1, [1, 0])
    assert np.abs(density_from(zero).matrix - np.diag([1, 0])).max() == 0
    phi = density_from(bell_state("phi_plus")).matrix
    assert np.abs(phi[[0, 0, 3, 3], [0, 3, 0, 3]] - 0.5).max() < 1e-15
    assert np.abs(phi[1:3, :]).max() == 0
    rho = density_from(StateVector(3, random_pure(rng, 3))).matrix
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.abs(rho @ rho - rho).max() < 1e-12


def test_purity_examples():
    assert abs(purity(density_from(bell_state("psi_plus"))) - 1) < 1e-12
    assert abs(purity(maximally_mixed(1)) - 0.5) < 1e-15
    marginal = partial_trace_pure(bell_state("phi_plus").amplitudes, 2, {1})
    assert abs(purity(marginal) - 0.5) < 1e-15


def test_state_vector_validation():
    with pytest.raises(InvalidStateError):
        StateVector(1, [1, 1])
    with pytest.raises(DimensionError):
        StateVector(2, [1, 0])
    with pytest.raises(InvalidStateError):
        StateVector(1, [np.inf, 0])


def test_density_operator_validation():
    with pytest.raises(InvalidStateError):
        DensityOperator(1, np.eye(2))
    with pytest.raises(InvalidStateError):
        DensityOperator(1, [[0.5, 1], [0, 0.5]])
    with pytest.raises(InvalidStateError):
        DensityOperator(1, np.diag([1.5, -0.5]))
    with pytest.raises(DimensionError):
        DensityOperator(2, np.eye(2) / 2)


def test_states_are_read_only():
    psi = bell_state("phi_plus")
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0


def test_gates_are_unitary():
    assert is_unitary(hadamard())
    assert is_unitary(cnot())


def test_projector():
    p = projector((1, 0))
    assert p[2, 2] == 1 and np.abs(p).sum() == 1


def test_bloch_vector():
    plus_i = np.array([1, 1j]) / math.sqrt(2)
    s = bloch_vector(np.outer(plus_i, plus_i.conj()))
    assert np.abs(s - [0, 1, 0]).max() < 1e-15
    assert np.abs(bloch_vector(maximally_mixed(1))).max() == 0
    with pytest.raises(DimensionError):
        bloch_vector(np.eye(4) / 4)


def test_werner_state():
    rho = werner(0.3)
    f = np.real(bell_state("phi_plus").amplitudes @ rho.matrix @ bell_state("phi_plus").amplitudes)
    assert abs(f - (1 + 3 * 0.3) / 4) < 1e-14


def test_pure_concurrence_matches_marginal_purity(rng):
    for _ in range(20):
        psi = random_pure(rng, 2)
        c = concurrence(np.outer(psi, psi.conj()))
        marginal = partial_trace_pure(psi, 2, {1})
        assert abs(c ** 2 - 2 * (1 - purity(marginal))) < 1e-10
