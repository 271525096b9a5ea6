"""Exact state-vector backend for small non-Clifford checks (state injection)."""

from __future__ import annotations

from typing import Hashable, Mapping, Sequence

import numpy as np

from .pauli import PauliOperator

MAX_QUBITS = 24


class QubitBudgetError(ValueError):
    """More qubits requested than the dense backend can hold."""


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def phase_state(theta: float) -> np.ndarray:
    """``(|0> + e^{i theta}|1>)/sqrt(2)``."""
    return np.array([1.0, np.exp(1j * theta)], dtype=complex) / np.sqrt(2)


PLUS = phase_state(0.0)
ZERO = np.array([1.0, 0.0], dtype=complex)


class DenseState:
    """Product-initialised state vector; axis ``i`` of the tensor is qubit ``labels[i]``."""

    def __init__(self, labels: Sequence[Hashable], initial: Mapping[Hashable, np.ndarray] | None = None):
        labels = list(labels)
        if len(labels) > MAX_QUBITS:
            raise QubitBudgetError(f"{len(labels)} qubits exceeds the dense limit of {MAX_QUBITS}")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate qubit labels")
        self.labels = labels
        self._axis = {q: i for i, q in enumerate(labels)}
        initial = initial or {}
        psi = np.ones((), dtype=complex)
        for q in labels:
            v = np.asarray(initial.get(q, PLUS), dtype=complex)
            v = v / np.linalg.norm(v)
            psi = np.multiply.outer(psi, v)
        self.psi = psi.reshape((2,) * len(labels)) if labels else psi

    @property
    def n(self) -> int:
        return len(self.labels)

    def norm(self) -> float:
        return float(np.linalg.norm(self.psi.ravel()))

    def cz(self, a: Hashable, b: Hashable) -> None:
        ia, ib = self._axis[a], self._axis[b]
        idx = [slice(None)] * self.n
        idx[ia] = 1
        idx[ib] = 1
        self.psi[tuple(idx)] *= -1

    def apply_1q(self, a: Hashable, u: np.ndarray) -> None:
        ia = self._axis[a]
        self.psi = np.moveaxis(np.tensordot(u, self.psi, axes=([1], [ia])), 0, ia)

    def _rotated_copy(self, bases: Mapping[Hashable, str]) -> np.ndarray:
        """State with every listed qubit rotated so its basis becomes Z."""
        psi = self.psi
        for q, b in bases.items():
            b = b.upper()
            if b == "Z":
                continue
            u = _H if b == "X" else _H @ _SDG
            if b not in "XY":
                raise ValueError(f"unknown basis {b!r}")
            ia = self._axis[q]
            psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [ia])), 0, ia)
        return psi

    def parity_distribution(self, bases: Mapping[Hashable, str]) -> tuple[float, float]:
        """Probabilities of even/odd parity of the outcomes of measuring ``bases``."""
        probs = np.abs(self._rotated_copy(bases)) ** 2
        axes = [self._axis[q] for q in bases]
        others = tuple(i for i in range(self.n) if i not in axes)
        marg = probs.sum(axis=others) if others else probs
        # marg axes follow increasing original axis order
        order = sorted(axes)
        grids = np.indices(marg.shape) if order else np.zeros((0,))
        parity = np.zeros(marg.shape, dtype=int)
        for k in range(len(order)):
            parity ^= grids[k]
        p_even = float(marg[parity == 0].sum())
        p_odd = float(marg[parity == 1].sum())
        return p_even, p_odd

    def outcome_distribution(self, bases: Mapping[Hashable, str]) -> dict[tuple[int, ...], float]:
        """Joint outcome probabilities, keyed by outcomes in the order of ``bases``."""
        probs = np.abs(self._rotated_copy(bases)) ** 2
        axes = [self._axis[q] for q in bases]
        others = tuple(i for i in range(self.n) if i not in axes)
        marg = probs.sum(axis=others) if others else probs
        order = sorted(axes)
        marg = np.transpose(marg, [order.index(a) for a in axes])
        return {idx: float(marg[idx]) for idx in np.ndindex(marg.shape)}

    def expectation(self, p: PauliOperator) -> complex:
        phi = self.psi
        for q, letter in p.letters.items():
            ia = self._axis[q]
            phi = np.moveaxis(np.tensordot(_PAULI[letter], phi, axes=([1], [ia])), 0, ia)
        val = np.vdot(self.psi.ravel(), phi.ravel())
        return complex(val * (1j ** p.phase))


def dense_run(circuit, initial: Mapping[Hashable, np.ndarray] | None = None) -> DenseState:
    """Run the init/CZ part of a circuit exactly. Measurement records are ignored here;
    use :meth:`DenseState.parity_distribution` on the returned state."""
    from .circuit import parse_circuit

    ops = parse_circuit(circuit) if isinstance(circuit, str) else list(circuit)
    labels = [op[1] for op in ops if op[0] == "init"]
    state = DenseState(labels, initial)
    for op in ops:
        if op[0] == "cz":
            state.cz(op[1], op[2])
    return state


def dense_measure_parity(state: DenseState, bases: Mapping[Hashable, str]) -> tuple[float, float]:
    return state.parity_distribution(bases)
