"""Cell-parity syndromes of a measurement record."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lattice import Coord3, Lattice, LatticeError, Parity
from .noise import FlipPattern


@dataclass(frozen=True)
class Syndrome:
    parity: Parity
    odd_cells: frozenset[Coord3]

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        object.__setattr__(self, "odd_cells", frozenset(tuple(c) for c in self.odd_cells))

    def __len__(self) -> int:
        return len(self.odd_cells)

    def __bool__(self) -> bool:
        return bool(self.odd_cells)

    def __xor__(self, other: Syndrome) -> Syndrome:
        if other.parity is not self.parity:
            raise ValueError("cannot combine syndromes of different parity")
        return Syndrome(self.parity, self.odd_cells ^ other.odd_cells)

    def sorted_cells(self) -> list[Coord3]:
        return sorted(self.odd_cells)

    def counts_per_slice(self, time_axis: int = 2) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.odd_cells:
            out[c[time_axis]] = out.get(c[time_axis], 0) + 1
        return dict(sorted(out.items()))

    def to_text(self) -> str:
        lines = [f"# syndrome parity={self.parity.value}"]
        lines += [f"{x} {y} {z}" for x, y, z in self.sorted_cells()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Syndrome:
        parity = None
        cells = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if line.startswith("#"):
                if "parity=" in line:
                    parity = line.split("parity=", 1)[1].split()[0]
                continue
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected three integers")
            cells.append(tuple(int(v) for v in parts))
        if parity is None:
            raise ValueError("missing parity header")
        return cls(Parity(parity), frozenset(cells))


def _as_array(l: Lattice, f) -> np.ndarray:
    if isinstance(f, FlipPattern):
        return f.to_array(l.n_qubits)
    arr = np.asarray(f, dtype=bool)
    if arr.shape != (l.n_qubits,):
        raise ValueError(f"flip array must have length {l.n_qubits}")
    return arr


def syndrome_bits(l: Lattice, flips: np.ndarray, parity: Parity | str) -> np.ndarray:
    """Odd/even bit for every check of ``parity``, in ``l.checks(parity)`` order."""
    h = l.check_matrix(parity)
    return (h @ flips.astype(np.uint8)) % 2 == 1


def extract_syndrome(l: Lattice, f, parity: Parity | str) -> Syndrome:
    p = Parity(parity)
    bits = syndrome_bits(l, _as_array(l, f), p)
    checks = l.checks(p)
    return Syndrome(p, frozenset(checks[i].cell for i in np.flatnonzero(bits)))


@dataclass(frozen=True)
class ChainEnd:
    """One end of an error chain: the cell it stops in, or None if it leaves the lattice."""

    cell: Coord3 | None
    visible: bool
    on_boundary: bool


def boundary_visibility(l: Lattice, f, parity: Parity | str) -> list[tuple[ChainEnd, ...]]:
    """Split ``f`` into chains of ``parity`` face flips and classify each chain end.

    Cells are nodes and flipped qubits are edges; a qubit read by a single check
    is an edge that leaves through a same-parity boundary and ends invisibly.
    Closed loops have no ends. Branching patterns are rejected.
    """
    p = Parity(parity)
    arr = _as_array(l, f)
    qc = l.qubit_checks(p)
    checks = l.checks(p)
    flipped = [int(q) for q in np.flatnonzero(arr) if qc[q]]
    if not flipped:
        return []
    # union-find over qubits sharing a check
    parent = {q: q for q in flipped}

    def find(q):
        while parent[q] != q:
            parent[q] = parent[parent[q]]
            q = parent[q]
        return q

    by_check: dict[int, list[int]] = {}
    for q in flipped:
        for c in qc[q]:
            by_check.setdefault(c, []).append(q)
    for c, qs in by_check.items():
        if len(qs) > 2:
            raise LatticeError(f"flips branch at cell {checks[c].cell}; not a chain")
        if len(qs) == 2:
            parent[find(qs[0])] = find(qs[1])

    comps: dict[int, list[int]] = {}
    for q in flipped:
        comps.setdefault(find(q), []).append(q)

    out = []
    for qs in sorted(comps.values(), key=lambda v: min(l.qubits[q] for q in v)):
        ends: list[ChainEnd] = []
        for q in sorted(qs, key=lambda q: l.qubits[q]):
            if len(qc[q]) == 1:
                ends.append(ChainEnd(None, False, True))
            for c in qc[q]:
                if len(by_check[c]) == 1:
                    cell = checks[c].cell
                    ends.append(ChainEnd(cell, True, _is_boundary_cell(l, cell)))
        if len(ends) not in (0, 2):
            raise LatticeError("pattern is not a union of simple chains")
        out.append(tuple(ends))
    return out


def _is_boundary_cell(l: Lattice, cell: Sequence[int]) -> bool:
    return len(l.cell_faces(cell)) < 6
