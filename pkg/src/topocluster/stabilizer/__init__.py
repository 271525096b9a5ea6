"""Exact stabilizer verification: Pauli algebra, tableau simulation, dense states."""

from .cluster import cluster_circuit, cluster_stabilizer, cluster_tableau, product_of_stabilizers
from .dense import DenseState, QubitBudgetError, dense_measure_parity, dense_run, phase_state
from .pauli import PauliOperator
from .tableau import MeasurementConflict, Tableau

__all__ = [
    "DenseState",
    "MeasurementConflict",
    "PauliOperator",
    "QubitBudgetError",
    "Tableau",
    "cluster_circuit",
    "cluster_stabilizer",
    "cluster_tableau",
    "dense_measure_parity",
    "dense_run",
    "phase_state",
    "product_of_stabilizers",
]
