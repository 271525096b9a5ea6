"""Cluster-state stabilizers of a lattice and their symbolic products."""

from __future__ import annotations

from typing import Iterable

from ..lattice import Lattice, LatticeError
from .pauli import PauliOperator
from .tableau import Tableau


def cluster_stabilizer(l: Lattice, q) -> PauliOperator:
    """``X`` on qubit ``q`` and ``Z`` on each CZ neighbour (sites are qubit indices).

    ``q`` may be a qubit index or a coordinate.
    """
    if isinstance(q, tuple):
        q = l.qubit_index(q)
    if not 0 <= q < l.n_qubits:
        raise LatticeError(f"{q} is not a qubit of this lattice")
    letters = {q: "X"}
    for n in l.neighbors[q]:
        letters[n] = "Z"
    return PauliOperator(letters)


def product_of_stabilizers(l: Lattice, qubits: Iterable) -> PauliOperator:
    out = PauliOperator()
    for q in qubits:
        out = out * cluster_stabilizer(l, q)
    return out


def cluster_circuit(l: Lattice) -> list[tuple]:
    ops: list[tuple] = [("init", q, "plus") for q in range(l.n_qubits)]
    ops += [("cz", a, b) for a, b in l.edges]
    return ops


def cluster_tableau(l: Lattice) -> Tableau:
    t = Tableau.plus_state(range(l.n_qubits))
    for a, b in l.edges:
        t.cz(a, b)
    return t
