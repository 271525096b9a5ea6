"""Geometry of the 3-D topological cluster state.

Coordinates are doubled integers: one cell spans two units. A point is
classified purely by how many of its coordinates are even:

======  ==================
#even   site
======  ==================
0       primal cell center
1       primal face qubit
2       dual face qubit
3       dual cell center
======  ==================

Primal face qubits sit on the faces of primal cells (and on the edges of
dual cells); dual face qubits sit on the faces of dual cells (and the edges
of primal cells). Every CZ joins two qubits at distance one, so the CZ graph
is bipartite between the two classes.

The lattice is an axis-aligned box. A box face at an even coordinate lies on
primal cell faces (a *primal* boundary); one at an odd coordinate bisects
primal cells and lies on dual cell faces (a *dual* boundary).
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

Coord3 = tuple[int, int, int]

AXES = ("x", "y", "z")
FACE_NAMES = ("x-", "x+", "y-", "y+", "z-", "z+")
# (axis, sign) in the fixed +-x, +-y, +-z order used for faces and tie-breaks
DIRECTIONS: tuple[tuple[int, int], ...] = ((0, -1), (0, 1), (1, -1), (1, 1), (2, -1), (2, 1))


class LatticeError(ValueError):
    """Raised for malformed lattice descriptions or invalid site queries."""


class Parity(str, enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"

    @property
    def other(self) -> Parity:
        return Parity.DUAL if self is Parity.PRIMAL else Parity.PRIMAL


class SiteClass(enum.Enum):
    PRIMAL_FACE_QUBIT = "primal_face_qubit"
    DUAL_FACE_QUBIT = "dual_face_qubit"
    PRIMAL_CELL_CENTER = "primal_cell_center"
    DUAL_CELL_CENTER = "dual_cell_center"

    @property
    def is_qubit(self) -> bool:
        return self in (SiteClass.PRIMAL_FACE_QUBIT, SiteClass.DUAL_FACE_QUBIT)

    @property
    def parity(self) -> Parity:
        if self in (SiteClass.PRIMAL_FACE_QUBIT, SiteClass.PRIMAL_CELL_CENTER):
            return Parity.PRIMAL
        return Parity.DUAL


_CLASS_BY_EVEN = {
    0: SiteClass.PRIMAL_CELL_CENTER,
    1: SiteClass.PRIMAL_FACE_QUBIT,
    2: SiteClass.DUAL_FACE_QUBIT,
    3: SiteClass.DUAL_CELL_CENTER,
}


def classify_site(c: Sequence[int]) -> SiteClass:
    """Classify a doubled-coordinate point by the number of even coordinates."""
    return _CLASS_BY_EVEN[sum(1 for v in c if v % 2 == 0)]


def shift(c: Coord3, axis: int, step: int) -> Coord3:
    out = list(c)
    out[axis] += step
    return (out[0], out[1], out[2])


def manhattan_cells(a: Coord3, b: Coord3) -> int:
    """Manhattan distance between two cell centers, in cell units."""
    return sum(abs(u - v) for u, v in zip(a, b)) // 2


@dataclass(frozen=True)
class Boundaries:
    """Primal/dual label of each of the six box faces."""

    x_lo: Parity = Parity.PRIMAL
    x_hi: Parity = Parity.PRIMAL
    y_lo: Parity = Parity.PRIMAL
    y_hi: Parity = Parity.PRIMAL
    z_lo: Parity = Parity.PRIMAL
    z_hi: Parity = Parity.PRIMAL

    @classmethod
    def uniform(cls, parity: Parity | str) -> Boundaries:
        p = Parity(parity)
        return cls(p, p, p, p, p, p)

    @classmethod
    def from_mapping(cls, m: Mapping[str, str]) -> Boundaries:
        unknown = set(m) - set(FACE_NAMES)
        if unknown:
            raise LatticeError(f"unknown boundary faces {sorted(unknown)}")
        vals = [Parity(m.get(name, "primal")) for name in FACE_NAMES]
        return cls(*vals)

    def as_mapping(self) -> dict[str, str]:
        return {name: p.value for name, p in zip(FACE_NAMES, self.as_tuple())}

    def as_tuple(self) -> tuple[Parity, ...]:
        return (self.x_lo, self.x_hi, self.y_lo, self.y_hi, self.z_lo, self.z_hi)

    def face(self, axis: int, sign: int) -> Parity:
        return self.as_tuple()[2 * axis + (1 if sign > 0 else 0)]


@dataclass(frozen=True)
class DefectSpec:
    """A face-connected region of same-parity cells whose interior qubits are Z-measured."""

    parity: Parity
    cells: frozenset[Coord3]

    def __init__(self, parity: Parity | str, cells: Iterable[Sequence[int]]):
        object.__setattr__(self, "parity", Parity(parity))
        object.__setattr__(self, "cells", frozenset(tuple(int(v) for v in c) for c in cells))

    def validate(self) -> None:
        if not self.cells:
            raise LatticeError("defect region is empty")
        want = SiteClass.PRIMAL_CELL_CENTER if self.parity is Parity.PRIMAL else SiteClass.DUAL_CELL_CENTER
        for c in self.cells:
            if classify_site(c) is not want:
                raise LatticeError(
                    f"defect of {self.parity.value} type contains {c}, which is not a "
                    f"{self.parity.value} cell center (mixed boundary type)"
                )
        if not _face_connected(self.cells):
            raise LatticeError("defect region is not face-connected")

    def min_cross_section(self) -> int:
        """Return 2 if every cell lies in a 2x2x2 block of the region, else 1."""
        for c in self.cells:
            if not any(
                all(
                    (c[0] + dx * i, c[1] + dy * j, c[2] + dz * k) in self.cells
                    for i, j, k in itertools.product((0, 2), repeat=3)
                )
                for dx, dy, dz in itertools.product((-1, 1), repeat=3)
            ):
                return 1
        return 2

    @property
    def fault_tolerant(self) -> bool:
        return self.min_cross_section() >= 2


def _face_connected(cells: frozenset[Coord3]) -> bool:
    start = min(cells)
    seen = {start}
    todo = deque([start])
    while todo:
        c = todo.popleft()
        for axis, sign in DIRECTIONS:
            n = shift(c, axis, 2 * sign)
            if n in cells and n not in seen:
                seen.add(n)
                todo.append(n)
    return len(seen) == len(cells)


@dataclass(frozen=True)
class Check:
    """One cell parity check: the cell center and the measured qubits it reads."""

    cell: Coord3
    parity: Parity
    x_support: tuple[int, ...]
    z_support: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.x_support + self.z_support))


@dataclass(frozen=True, eq=False)
class Lattice:
    """Immutable cluster-state geometry. Build with :func:`build_lattice`."""

    extents: tuple[int, int, int]
    boundaries: Boundaries
    defects: tuple[DefectSpec, ...]
    time_axis: int
    lo: Coord3
    hi: Coord3
    qubits: tuple[Coord3, ...]
    index: Mapping[Coord3, int] = field(repr=False)
    neighbors: tuple[tuple[int, ...], ...] = field(repr=False)
    z_measured: frozenset[int] = field(repr=False)
    removed_cells: frozenset[Coord3] = field(repr=False)

    # -- basic queries ---------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def contains(self, c: Sequence[int]) -> bool:
        return all(self.lo[a] <= c[a] <= self.hi[a] for a in range(3))

    def qubit_index(self, c: Sequence[int]) -> int:
        try:
            return self.index[tuple(c)]
        except KeyError:
            raise LatticeError(f"{tuple(c)} is not a qubit site of this lattice") from None

    def basis(self, q: int) -> str:
        """Measurement basis of qubit ``q`` in the bulk pattern: 'X', or 'Z' inside a defect."""
        return "Z" if q in self.z_measured else "X"

    def qubit_class(self, q: int) -> SiteClass:
        return classify_site(self.qubits[q])

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((a, b) for a, nb in enumerate(self.neighbors) for b in nb if a < b)

    @property
    def non_fault_tolerant(self) -> bool:
        return any(not d.fault_tolerant for d in self.defects)

    def cells(self, parity: Parity | str) -> tuple[Coord3, ...]:
        """Cell centers of one parity class inside the box (including removed ones)."""
        p = Parity(parity)
        return self._cells_primal if p is Parity.PRIMAL else self._cells_dual

    @cached_property
    def _cells_primal(self) -> tuple[Coord3, ...]:
        return self._enumerate_cells(1)

    @cached_property
    def _cells_dual(self) -> tuple[Coord3, ...]:
        return self._enumerate_cells(0)

    def _enumerate_cells(self, residue: int) -> tuple[Coord3, ...]:
        ranges = [
            [v for v in range(self.lo[a], self.hi[a] + 1) if v % 2 == residue] for a in range(3)
        ]
        return tuple(itertools.product(*ranges))

    def cell_faces(self, cell: Sequence[int]) -> list[Coord3]:
        """Face-qubit sites of a cell that lie inside the lattice, in +-x, +-y, +-z order."""
        c = tuple(int(v) for v in cell)
        if classify_site(c).is_qubit:
            raise LatticeError(f"{c} is not a cell center")
        if not self.contains(c):
            raise LatticeError(f"{c} lies outside the lattice")
        return [f for a, s in DIRECTIONS if (f := shift(c, a, s)) in self.index]

    # -- checks ----------------------------------------------------------

    def checks(self, parity: Parity | str) -> tuple[Check, ...]:
        p = Parity(parity)
        return self._checks[p]

    @cached_property
    def _checks(self) -> dict[Parity, tuple[Check, ...]]:
        out: dict[Parity, tuple[Check, ...]] = {}
        for p in Parity:
            rows = []
            for cell in self.cells(p):
                if cell in self.removed_cells:
                    continue
                chk = self._cell_check(cell, p)
                if chk is not None:
                    rows.append(chk)
            out[p] = tuple(rows)
        return out

    def _cell_check(self, cell: Coord3, p: Parity) -> Check | None:
        # product of the cluster stabilizers of the X-measured faces
        xs = [self.index[f] for f in self.cell_faces(cell)]
        xs = [q for q in xs if q not in self.z_measured]
        if not xs:
            return None
        zcount: dict[int, int] = {}
        for q in xs:
            for n in self.neighbors[q]:
                zcount[n] = zcount.get(n, 0) ^ 1
        zs = tuple(sorted(q for q, v in zcount.items() if v))
        if any(q not in self.z_measured for q in zs):
            # not measurable with the bulk pattern
            return None
        return Check(cell, p, tuple(sorted(xs)), zs)

    @cached_property
    def check_index(self) -> dict[Parity, dict[Coord3, int]]:
        return {p: {c.cell: i for i, c in enumerate(self.checks(p))} for p in Parity}

    def qubit_checks(self, parity: Parity | str) -> tuple[tuple[int, ...], ...]:
        """For every qubit, the indices of the ``parity`` checks that read it."""
        return self._qubit_checks[Parity(parity)]

    @cached_property
    def _qubit_checks(self) -> dict[Parity, tuple[tuple[int, ...], ...]]:
        out = {}
        for p in Parity:
            acc: list[list[int]] = [[] for _ in range(self.n_qubits)]
            for i, chk in enumerate(self.checks(p)):
                for q in chk.support:
                    acc[q].append(i)
            out[p] = tuple(tuple(v) for v in acc)
        return out

    def check_matrix(self, parity: Parity | str):
        """Sparse GF(2) check matrix (checks x qubits) as a scipy CSR matrix."""
        return self._check_matrices[Parity(parity)]

    @cached_property
    def _check_matrices(self) -> dict:
        return {p: self._build_check_matrix(p) for p in Parity}

    def _build_check_matrix(self, p: Parity):
        from scipy.sparse import csr_matrix

        rows, cols = [], []
        for i, chk in enumerate(self.checks(p)):
            for q in chk.support:
                rows.append(i)
                cols.append(q)
        data = np.ones(len(rows), dtype=np.uint8)
        return csr_matrix((data, (rows, cols)), shape=(len(self.checks(p)), self.n_qubits))

    def measured_qubits(self, parity: Parity | str | None = None) -> list[int]:
        """Qubits read by at least one check (of ``parity``, or of either class)."""
        ps = list(Parity) if parity is None else [Parity(parity)]
        return sorted({q for p in ps for chk in self.checks(p) for q in chk.support})

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "extents": list(self.extents),
            "boundaries": self.boundaries.as_mapping(),
            "time_axis": AXES[self.time_axis],
            "defects": [
                {"parity": d.parity.value, "runs": _cells_to_runs(d.cells, self.time_axis)}
                for d in self.defects
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lattice) and self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(self.to_json())


def _cells_to_runs(cells: Iterable[Coord3], axis: int) -> list[list[int]]:
    """Compress cells into runs ``[x, y, z, length]`` along ``axis`` (step 2)."""
    remaining = sorted(cells, key=lambda c: (tuple(c[a] for a in range(3) if a != axis), c[axis]))
    runs: list[list[int]] = []
    cellset = set(remaining)
    used: set[Coord3] = set()
    for c in remaining:
        if c in used:
            continue
        length = 0
        cur = c
        while cur in cellset:
            used.add(cur)
            length += 1
            cur = shift(cur, axis, 2)
        runs.append([*c, length])
    return runs


def _runs_to_cells(runs: Iterable[Sequence[int]], axis: int) -> list[Coord3]:
    cells = []
    for run in runs:
        if len(run) != 4 or int(run[3]) < 1:
            raise LatticeError(f"malformed defect run {run!r}")
        start = (int(run[0]), int(run[1]), int(run[2]))
        for k in range(int(run[3])):
            cells.append(shift(start, axis, 2 * k))
    return cells


def lattice_from_dict(d: Mapping) -> Lattice:
    try:
        axis = AXES.index(d.get("time_axis", "z"))
        defects = [
            DefectSpec(item["parity"], _runs_to_cells(item["runs"], axis))
            for item in d.get("defects", [])
        ]
        return build_lattice(
            tuple(int(v) for v in d["extents"]),
            Boundaries.from_mapping(d.get("boundaries", {})),
            defects,
            time_axis=axis,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LatticeError):
            raise
        raise LatticeError(f"malformed lattice description: {exc}") from exc


def lattice_from_json(text: str) -> Lattice:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeError(f"lattice file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise LatticeError("lattice file must hold a JSON object")
    return lattice_from_dict(data)


def box_bounds(extents: Sequence[int], boundaries: Boundaries) -> tuple[Coord3, Coord3]:
    """Doubled-coordinate box for ``extents`` primal cells per axis.

    A primal boundary sits on the outer primal faces (even coordinate); a dual
    boundary cuts the outermost primal cells in half (odd coordinate).
    """
    lo, hi = [], []
    for a in range(3):
        n = int(extents[a])
        if n < 1:
            raise LatticeError(f"extent along {AXES[a]} must be at least 1, got {n}")
        l = 0 if boundaries.face(a, -1) is Parity.PRIMAL else 1
        h = 2 * n if boundaries.face(a, +1) is Parity.PRIMAL else 2 * n - 1
        if h <= l:
            raise LatticeError(f"extent along {AXES[a]} too small for two dual boundaries")
        lo.append(l)
        hi.append(h)
    return (lo[0], lo[1], lo[2]), (hi[0], hi[1], hi[2])


def build_lattice(
    extents: Sequence[int],
    boundaries: Boundaries | None = None,
    defects: Sequence[DefectSpec] = (),
    *,
    time_axis: int = 2,
) -> Lattice:
    """Construct a lattice of ``extents`` primal cells per axis.

    Qubits strictly inside a defect (every same-parity cell touching them belongs
    to the defect) are marked Z-measured, and the defect cells are removed from
    the check set.
    """
    boundaries = boundaries or Boundaries()
    if len(extents) != 3:
        raise LatticeError("extents must have three entries")
    lo, hi = box_bounds(extents, boundaries)

    qubits = [
        c
        for c in itertools.product(*(range(lo[a], hi[a] + 1) for a in range(3)))
        if classify_site(c).is_qubit
    ]
    index = {c: i for i, c in enumerate(qubits)}
    neighbors = tuple(
        tuple(index[n] for a, s in DIRECTIONS if (n := shift(c, a, s)) in index) for c in qubits
    )

    def inside(c: Sequence[int]) -> bool:
        return all(lo[a] <= c[a] <= hi[a] for a in range(3))

    z_measured: set[int] = set()
    removed: set[Coord3] = set()
    for d in defects:
        d.validate()
        for c in d.cells:
            if not inside(c):
                raise LatticeError(f"defect cell {c} lies outside the lattice")
        if removed & d.cells:
            raise LatticeError("defect regions overlap")
        removed |= d.cells
        interior = _defect_interior(d, index, inside)
        if interior & z_measured:
            raise LatticeError("defect regions overlap")
        z_measured |= interior

    return Lattice(
        extents=(int(extents[0]), int(extents[1]), int(extents[2])),
        boundaries=boundaries,
        defects=tuple(defects),
        time_axis=time_axis,
        lo=lo,
        hi=hi,
        qubits=tuple(qubits),
        index=index,
        neighbors=neighbors,
        z_measured=frozenset(z_measured),
        removed_cells=frozenset(removed),
    )


def _adjacent_cells(q: Coord3, parity: Parity) -> list[Coord3]:
    """Cells of ``parity`` whose closure contains qubit site ``q``."""
    # a primal cell center is all-odd, a dual one all-even
    want = 1 if parity is Parity.PRIMAL else 0
    options = [(v,) if v % 2 == want else (v - 1, v + 1) for v in q]
    return list(itertools.product(*options))


def _defect_interior(d: DefectSpec, index: Mapping[Coord3, int], inside) -> set[int]:
    out = set()
    candidates = set()
    for c in d.cells:
        for off in itertools.product((-1, 0, 1), repeat=3):
            q = (c[0] + off[0], c[1] + off[1], c[2] + off[2])
            if q in index:
                candidates.add(q)
    for q in candidates:
        cells = [c for c in _adjacent_cells(q, d.parity) if inside(c)]
        if cells and all(c in d.cells for c in cells):
            out.add(index[q])
    return out
