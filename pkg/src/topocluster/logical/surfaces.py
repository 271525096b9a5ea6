"""Correlation surfaces: products of cluster stabilizers compatible with a measurement pattern.

A subset S of qubits gives the stabilizer prod_{q in S} K_q. After measuring
every non-I/O qubit, that stabilizer still carries information about the I/O
qubits only if, on every measured qubit, it acts in the measured basis: no Z
component on X-measured qubits (so an even number of S-neighbours) and no X
component on Z-measured ones (so the qubit is not in S). Finding S for a given
I/O operator is a linear system over GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..lattice import Lattice
from ..stabilizer.cluster import product_of_stabilizers
from ..stabilizer.pauli import PauliOperator
from . import gf2


@dataclass(frozen=True)
class Surface:
    qubits: frozenset[int]
    operator: PauliOperator  # full signed product of the chosen stabilizers
    io_operator: PauliOperator  # restriction to the I/O qubits, sign included
    group: frozenset[int]  # measured qubits whose outcomes enter the parity

    @property
    def sign(self) -> int:
        return self.io_operator.sign

    def eigenvalue(self, outcomes: Mapping[int, int]) -> int:
        """Eigenvalue of the unsigned I/O operator implied by the given outcomes."""
        try:
            parity = sum(outcomes[q] for q in self.group) % 2
        except KeyError as exc:
            raise KeyError(f"missing outcome for qubit {exc.args[0]}") from None
        return self.sign * (-1) ** parity


class CorrelationSolver:
    """Solve for correlation surfaces on one lattice with a fixed I/O set.

    ``bases`` overrides the lattice's bulk measurement basis per qubit
    ('X' or 'Z'); qubits in ``io`` are treated as unmeasured.
    """

    def __init__(self, l: Lattice, io: Iterable[int], bases: Mapping[int, str] | None = None):
        self.lattice = l
        self.io = frozenset(int(q) for q in io)
        basis = {q: l.basis(q) for q in range(l.n_qubits)}
        basis.update(bases or {})
        for q in self.io:
            basis[q] = "IO"
        self.basis = basis
        # a Z-measured qubit may not carry its own stabilizer
        self.variables = [q for q in range(l.n_qubits) if basis[q] != "Z"]
        self.var_index = {q: i for i, q in enumerate(self.variables)}
        io_sorted = sorted(self.io)
        self.io_sorted = io_sorted
        nv = len(self.variables)
        # rows: Z-parity at each X-measured qubit, then X and Z bits at each I/O qubit
        x_meas = [q for q in range(l.n_qubits) if basis[q] == "X"]
        self._n_fixed = len(x_meas)
        a = np.zeros((len(x_meas) + 2 * len(io_sorted), nv), dtype=bool)
        for r, q in enumerate(x_meas):
            for n in l.neighbors[q]:
                if n in self.var_index:
                    a[r, self.var_index[n]] ^= True
        base = len(x_meas)
        for k, q in enumerate(io_sorted):
            a[base + 2 * k, self.var_index[q]] = True
            for n in l.neighbors[q]:
                if n in self.var_index:
                    a[base + 2 * k + 1, self.var_index[n]] ^= True
        self.matrix = a

    def _rhs(self, target: PauliOperator) -> np.ndarray:
        stray = set(target.support) - self.io
        if stray:
            raise ValueError(f"target acts outside the I/O qubits: {sorted(stray)[:5]}")
        b = np.zeros(self.matrix.shape[0], dtype=bool)
        base = self._n_fixed
        xs, zs = target.x_support(), target.z_support()
        for k, q in enumerate(self.io_sorted):
            b[base + 2 * k] = q in xs
            b[base + 2 * k + 1] = q in zs
        return b

    def solve(self, target: PauliOperator) -> Surface | None:
        """A surface whose I/O part equals ``target`` up to sign, or None."""
        x = gf2.solve(self.matrix, self._rhs(target))
        if x is None:
            return None
        return self.surface([self.variables[i] for i in np.flatnonzero(x)])

    def surface(self, qubits: Iterable[int]) -> Surface:
        qs = frozenset(int(q) for q in qubits)
        op = product_of_stabilizers(self.lattice, sorted(qs))
        io_op = PauliOperator({q: op[q] for q in op.support if q in self.io}, op.sign)
        group = frozenset(
            q
            for q in op.support
            if q not in self.io and _reads(self.basis[q], op[q])
        )
        for q in op.support:
            b = self.basis[q]
            if b in ("X", "Z") and not _reads(b, op[q]):
                raise ValueError(f"qubit {q} carries {op[q]} but is measured in {b}")
        return Surface(qs, op, io_op, group)

    def kernel(self) -> np.ndarray:
        """Surfaces with trivial I/O part, as rows of variable indicator vectors."""
        return gf2.nullspace(self.matrix)


def _reads(basis: str, letter: str) -> bool:
    return basis == letter
