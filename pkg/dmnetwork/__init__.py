"""Exact simulator of Bell-pair networks linked by DM interactions."""

from dmnetwork.dmnet import DMCoupling, NetworkState, evolve, grow, grown_network, initial_network, reduced
from dmnetwork.entmeas import concurrence, min_concurrence
from dmnetwork.qstate import BellKind, DensityOperator, StateVector, bell_state
from dmnetwork.results import SweepResult
from dmnetwork.runner import run_figure, run_sweep
from dmnetwork.teleport import UnknownQubit, teleport

__version__ = "0.1.0"
