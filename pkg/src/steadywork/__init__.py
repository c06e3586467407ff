"""Steady states and extractable work of two coupled qubits between two reservoirs."""

__version__ = "0.1.0"

from .core import (
    Basis,
    CoupledQubitSystem,
    DensityMatrix,
    SystemParams,
    diagonalize_coupled_qubits,
    hermitian_eig,
    make_system,
    to_basis,
)
from .reservoir import RateSet, ReservoirSpec, Statistics, occupation, transition_rates
from .analytic import OrderingMode, analytic_steady_state
from .redfield import Liouvillian, build_generator, evolve, steady_state_nullspace
from .ergotropy import WorkReport, ergotropy, internal_energy, passive_state, work_report

__all__ = [
    "Basis", "CoupledQubitSystem", "DensityMatrix", "SystemParams",
    "diagonalize_coupled_qubits", "hermitian_eig", "make_system", "to_basis",
    "RateSet", "ReservoirSpec", "Statistics", "occupation", "transition_rates",
    "OrderingMode", "analytic_steady_state",
    "Liouvillian", "build_generator", "evolve", "steady_state_nullspace",
    "WorkReport", "ergotropy", "internal_energy", "passive_state", "work_report",
]
