import logging
import math

import numpy as np
import pytest

from dmnetwork.dmnet import (
    DMCoupling,
    NetworkState,
    PrintedFormComparison,
    compare_printed_form,
    dm_hamiltonian,
    evolve,
    evolve_many,
    global_purity,
    grow,
    grown_network,
    initial_network,
    printed_reduced_state,
    reduced,
    unitary,
    unitary_analytic,
    unitary_oracle,
)
from dmnetwork.entmeas import concurrence
from dmnetwork.exceptions import CouplingError, DimensionError
from dmnetwork.linalg import is_hermitian, is_unitary
from dmnetwork.qstate import BellKind, StateVector, bell_state, pauli

D = 0.2
GRID = np.round(np.arange(201) * 0.1, 10)
SAMPLE_T = [0.0, 0.7, 1.9, 2.5, 3.3, 4.0, 6.1, 9.8, 13.0, 17.4]
PHI = bell_state(BellKind.PHI_PLUS)

# standard Bell vectors; projectors do not depend on their global sign
BELL = {
    "phi_plus": np.array([1, 0, 0, 1]) / math.sqrt(2),
    "phi_minus": np.array([1, 0, 0, -1]) / math.sqrt(2),
    "psi_plus": np.array([0, 1, 1, 0]) / math.sqrt(2),
    "psi_minus": np.array([0, 1, -1, 0]) / math.sqrt(2),
}


def _bell_mixture(weights):
    return sum(w * np.outer(BELL[k], BELL[k]) for k, w in weights.items())


def _net(axis, t, strength=D, method="oracle"):
    return evolve(initial_network(["phi_plus", "phi_plus"]), DMCoupling.along(axis, strength), t, method)


def test_coupling_validation():
    with pytest.raises(CouplingError):
        DMCoupling((0, 0, 0.2), (2, 2))
    with pytest.raises(CouplingError):
        DMCoupling((0, 0, math.nan))
    with pytest.raises(CouplingError):
        DMCoupling((0, 0.2))
    with pytest.raises(CouplingError):
        DMCoupling.along("w", 0.2)


def test_coupling_axis():
    assert DMCoupling.along("x", 0.3).axis == "x"
    assert DMCoupling.along("x", 0.3).axis_strength == 0.3
    assert DMCoupling((0, 0, 0)).axis == "z"
    assert DMCoupling((0.1, 0, 0.2)).axis is None


def test_hamiltonian_examples():
    h = dm_hamiltonian(DMCoupling.along("z", 0.3, (1, 2)), 2)
    assert np.abs(h[:, 0]).max() == 0
    assert np.abs(h[:, 3]).max() == 0
    vals = np.linalg.eigvalsh(h)
    assert np.abs(vals - [-0.6, 0, 0, 0.6]).max() < 1e-12
    assert np.abs(dm_hamiltonian(DMCoupling((0, 0, 0), (1, 2)), 2)).max() == 0


def test_hamiltonian_components():
    x, y, z = pauli("x"), pauli("y"), pauli("z")
    h = dm_hamiltonian(DMCoupling((0.1, 0.2, 0.3), (1, 2)), 2)
    expected = (
        0.1 * (np.kron(y, z) - np.kron(z, y))
        + 0.2 * (np.kron(z, x) - np.kron(x, z))
        + 0.3 * (np.kron(x, y) - np.kron(y, x))
    )
    assert np.abs(h - expected).max() < 1e-15
    assert is_hermitian(dm_hamiltonian(DMCoupling((0.4, -0.1, 0.7), (3, 1)), 4), 1e-12)


def test_hamiltonian_rejects_pair_outside_register():
    with pytest.raises(CouplingError):
        dm_hamiltonian(DMCoupling.along("z", 0.2, (2, 5)), 4)


@pytest.mark.parametrize("axis", ["x", "y", "z"])
@pytest.mark.parametrize("strength", [0.1, 0.2, 0.5])
def test_analytic_unitary_matches_oracle(axis, strength):
    c = DMCoupling.along(axis, strength)
    for t in GRID:
        u = unitary_analytic(c, t, 4)
        assert is_unitary(u, 1e-12)
        assert np.abs(u - unitary_oracle(c, t, 4)).max() < 1e-10


def test_analytic_z_form_term_by_term():
    x, y, z = pauli("x"), pauli("y"), pauli("z")
    t = 1.3
    c2, s2 = math.cos(D * t) ** 2, math.sin(D * t) ** 2
    expected = (
        c2 * np.eye(4)
        + s2 * np.kron(z, z)
        - 0.5j * math.sin(2 * D * t) * (np.kron(x, y) - np.kron(y, x))
    )
    assert np.abs(unitary_analytic(DMCoupling.along("z", D, (1, 2)), t) - expected).max() < 1e-15


def test_unitary_at_quarter_period():
    t = math.pi / (2 * D)
    u = unitary(DMCoupling.along("z", D, (1, 2)), t, 2, method="oracle")
    assert np.abs(u - np.kron(pauli("z"), pauli("z"))).max() < 1e-10
    assert np.abs(u[np.ix_([0, 3], [0, 3])] - np.eye(2)).max() < 1e-10


def test_analytic_rejects_general_vector():
    with pytest.raises(CouplingError):
        unitary_analytic(DMCoupling((0.1, 0, 0.1)), 1.0)
    with pytest.raises(ValueError):
        unitary(DMCoupling.along("z", D), 1.0, method="pade")


def test_initial_network():
    net = initial_network(["phi_plus", "phi_plus"])
    assert net.node_count == 4
    assert net.psi.amplitudes.size == 16
    assert np.abs(initial_network(["phi_plus"]).psi.amplitudes - PHI.amplitudes).max() == 0
    assert initial_network(["phi_plus"] * 3).node_count == 6
    with pytest.raises(DimensionError):
        initial_network([])


def test_reduced_of_initial_network():
    net = initial_network(["phi_plus", "phi_plus"])
    assert np.abs(reduced(net, {1, 2}).matrix - np.outer(PHI.amplitudes, PHI.amplitudes)).max() < 1e-15
    assert np.abs(reduced(net, {2, 3}).matrix - np.eye(4) / 4).max() < 1e-15


def test_evolve_zero_time_is_identity():
    net0 = initial_network(["phi_plus", "phi_plus"])
    net = evolve(net0, DMCoupling.along("z", D), 0.0)
    assert np.abs(net.psi.amplitudes - net0.psi.amplitudes).max() < 1e-12
    assert net.history[-1].action == "evolve"


def test_evolve_is_reversible():
    net0 = initial_network(["phi_plus", "phi_plus"])
    c = DMCoupling((0.1, -0.3, 0.2))
    back = evolve(evolve(net0, c, 2.7), c, -2.7)
    assert np.abs(back.psi.amplitudes - net0.psi.amplitudes).max() < 1e-10
    assert len(back.history) == 2


@pytest.mark.parametrize("axis", ["x", "z"])
def test_evolve_methods_agree(axis):
    for t in SAMPLE_T:
        a = _net(axis, t, method="analytic").psi.amplitudes
        o = _net(axis, t, method="oracle").psi.amplitudes
        assert np.abs(a - o).max() < 1e-10


def test_evolve_rejects_coupling_outside_network():
    with pytest.raises(CouplingError):
        evolve(initial_network(["phi_plus"]), DMCoupling.along("z", D, (2, 3)), 1.0)


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_state_is_periodic(axis):
    period = math.pi / D
    for t in [0.4, 2.2, 5.9]:
        a = _net(axis, t).psi.amplitudes
        b = _net(axis, t + period).psi.amplitudes
        assert np.abs(a - b).max() < 1e-9


def test_global_purity_stays_one():
    for t in SAMPLE_T:
        assert abs(global_purity(_net("x", t)) - 1) < 1e-10


@pytest.mark.parametrize("t", SAMPLE_T)
def test_z_axis_reduced_states(t):
    net = _net("z", t)
    c, s = math.cos(2 * D * t), math.sin(2 * D * t)
    ct, st = math.cos(D * t), math.sin(D * t)
    rho12 = _bell_mixture(
        {"phi_plus": ct ** 4, "phi_minus": st ** 4, "psi_plus": s * s / 4, "psi_minus": s * s / 4}
    )
    rho13 = np.diag([1 + s * s, c * c, c * c, 1 + s * s]) / 4
    assert np.abs(reduced(net, (1, 2)).matrix - rho12).max() < 1e-12
    assert np.abs(reduced(net, (3, 4)).matrix - rho12).max() < 1e-12
    assert np.abs(reduced(net, (1, 3)).matrix - rho13).max() < 1e-12
    assert np.abs(reduced(net, (2, 4)).matrix - rho13).max() < 1e-12
    assert np.abs(reduced(net, (1, 4)).matrix - np.eye(4) / 4).max() < 1e-12
    assert np.abs(reduced(net, (2, 3)).matrix - np.eye(4) / 4).max() < 1e-12


@pytest.mark.parametrize("t", SAMPLE_T)
def test_x_axis_pair_channel(t):
    ct, st, s = math.cos(D * t), math.sin(D * t), math.sin(2 * D * t)
    rho12 = _bell_mixture(
        {"phi_plus": ct ** 4, "psi_plus": st ** 4, "phi_minus": s * s / 4, "psi_minus": s * s / 4}
    )
    assert np.abs(reduced(_net("x", t), (1, 2)).matrix - rho12).max() < 1e-12


def test_symmetry_identities():
    for t in GRID[::4]:
        z, x = _net("z", t), _net("x", t)
        assert abs(concurrence(reduced(z, (2, 3))) - concurrence(reduced(z, (2, 4)))) < 1e-9
        assert abs(concurrence(reduced(x, (1, 3))) - concurrence(reduced(x, (2, 4)))) < 1e-9


def test_evolve_many_on_disjoint_links_commutes():
    net0 = initial_network(["phi_plus"] * 3)
    a, b = DMCoupling.along("z", D, (2, 3)), DMCoupling.along("x", 0.3, (4, 5))
    one = evolve_many(net0, [a, b], 1.4).psi.amplitudes
    two = evolve_many(net0, [b, a], 1.4).psi.amplitudes
    assert np.abs(one - two).max() < 1e-12


def test_grow_at_zero_time_is_a_product_extension():
    net = _net("z", 2.0)
    grown = grow(net, "phi_plus", DMCoupling.along("z", D, (4, 5)), 0.0)
    assert grown.node_count == 6
    assert grown.history[-1].new_pair is BellKind.PHI_PLUS
    assert concurrence(reduced(grown, (1, 5))) < 1e-12
    assert concurrence(reduced(grown, (1, 6))) < 1e-12
    assert abs(concurrence(reduced(grown, (5, 6))) - 1) < 1e-10


def test_grow_requires_link_to_new_pair():
    with pytest.raises(CouplingError):
        grow(_net("z", 1.0), "phi_plus", DMCoupling.along("z", D, (3, 5)), 1.0)


@pytest.mark.parametrize("t", [0.9, 3.1, 7.7])
def test_six_node_network_leaves_qubit_1_uncorrelated_with_5_and_6(t):
    net = grown_network(3, DMCoupling.along("z", D), t)
    assert net.node_count == 6
    assert np.abs(reduced(net, (1, 5)).matrix - np.eye(4) / 4).max() < 1e-12
    assert np.abs(reduced(net, (1, 6)).matrix - np.eye(4) / 4).max() < 1e-12


def test_grown_network_needs_two_pairs():
    with pytest.raises(DimensionError):
        grown_network(1, DMCoupling.along("z", D), 1.0)


def test_printed_forms():
    assert printed_reduced_state((1, 5), "z", D, 1.0) is None
    assert printed_reduced_state((1, 3), "y", D, 1.0) is None
    assert printed_reduced_state((1, 6), "z", D, 1.0).shape == (4, 4)


def test_compare_printed_form_logs(caplog):
    with caplog.at_level(logging.INFO, logger="dmnetwork.dmnet"):
        exact = compare_printed_form(_net("z", 0.0), (2, 4), "z", D, 0.0)
        off = compare_printed_form(_net("z", 2.0), (2, 3), "z", D, 2.0)
    assert isinstance(exact, PrintedFormComparison)
    assert exact.max_deviation < 1e-12 and exact.printed_is_state
    assert off.max_deviation > 0.1 and not off.printed_is_state
    assert any(r.levelno == logging.WARNING for r in caplog.records)
    assert compare_printed_form(_net("z", 1.0), (1, 5), "z", D, 1.0) is None


def test_global_purity_is_computed_from_the_density_operator():
    drifted = object.__new__(StateVector)
    object.__setattr__(drifted, "qubit_count", 2)
    object.__setattr__(drifted, "amplitudes", np.full(4, 0.6, dtype=np.complex128))
    # ||psi||^2 = 1.44, so Tr rho^2 = 1.44^2
    assert abs(global_purity(NetworkState(drifted)) - 1.44 ** 2) < 1e-12
