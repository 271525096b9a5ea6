"""Small defect geometries for exact verification, with time along z.

Defects here have a one-cell cross-section (the lattice is flagged non-fault
tolerant); operator mappings do not depend on defect size. Logical operators
are written on a plane of constant even z, where every qubit is either a
primal face (odd, odd, z) or a dual face (one of x, y even).

For a primal defect pair, the X-type ring of defect j is Z on the four dual
qubits around the defect's face and the Z-type chain is X on the dual qubits
between the defects times Z on the two defect faces. For a dual pair, the
Z-type ring is X on the four dual qubits around the defect's cell and the
X-type chain is Z on the dual qubits between the defects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..lattice import Boundaries, DefectSpec, Lattice, Parity, build_lattice
from ..stabilizer.pauli import PauliOperator

XY = tuple[int, int]


@dataclass(frozen=True)
class LogicalQubit:
    """A defect pair lying in one row (same y) of a constant-z plane."""

    name: str
    parity: Parity
    defects: tuple[XY, XY]

    def __post_init__(self):
        (x1, y1), (x2, y2) = self.defects
        if y1 != y2 or x1 >= x2:
            raise ValueError("defect pair must share y and be ordered in x")
        want = 1 if self.parity is Parity.PRIMAL else 0
        if any(v % 2 != want for v in (x1, y1, x2)):
            raise ValueError("defect position has the wrong coordinate parity")

    @property
    def ring_letter(self) -> str:
        return "Z" if self.parity is Parity.PRIMAL else "X"

    def ring_sites(self, j: int, z: int) -> list[tuple[int, int, int]]:
        x, y = self.defects[j]
        return [(x - 1, y, z), (x + 1, y, z), (x, y - 1, z), (x, y + 1, z)]

    def chain_letters(self, z: int) -> dict[tuple[int, int, int], str]:
        (x1, y), (x2, _) = self.defects
        if self.parity is Parity.PRIMAL:
            out = {(x, y, z): "X" for x in range(x1 + 1, x2, 2)}
            out[(x1, y, z)] = "Z"
            out[(x2, y, z)] = "Z"
            return out
        return {(x, y, z): "Z" for x in range(x1 + 1, x2, 2)}

    # names follow the convention that a primal chain is Z_L and a dual ring is Z_L
    def ring_name(self, j: int) -> str:
        kind = "X" if self.parity is Parity.PRIMAL else "Z"
        return f"{kind}{j + 1}{self.name}"

    @property
    def chain_name(self) -> str:
        kind = "Z" if self.parity is Parity.PRIMAL else "X"
        return f"{kind}{self.name}"


def op_at(l: Lattice, letters: dict[tuple[int, int, int], str], sign: int = 1) -> PauliOperator:
    return PauliOperator({l.qubit_index(c): v for c, v in letters.items()}, sign)


@dataclass
class Scenario:
    """A lattice with I/O planes at z = lo and z = hi and named logical operators."""

    name: str
    lattice: Lattice
    qubits: dict[str, LogicalQubit]
    io_in: frozenset[int]
    io_out: frozenset[int]
    extra_io: frozenset[int] = frozenset()
    notes: dict = field(default_factory=dict)

    @property
    def z_in(self) -> int:
        return self.lattice.lo[2]

    @property
    def z_out(self) -> int:
        return self.lattice.hi[2]

    @property
    def io(self) -> frozenset[int]:
        return self.io_in | self.io_out | self.extra_io

    def operator(self, name: str, side: str) -> PauliOperator:
        """Named logical operator ('X1p', 'Zp', 'Xd', ...) on the 'in' or 'out' plane."""
        z = self.z_in if side == "in" else self.z_out
        for lq in self.qubits.values():
            if name == lq.chain_name:
                return op_at(self.lattice, lq.chain_letters(z))
            for j in range(2):
                if name == lq.ring_name(j):
                    return op_at(self.lattice, {c: lq.ring_letter for c in lq.ring_sites(j, z)})
        raise KeyError(f"no logical operator named {name!r}")

    def product(self, names: Iterable[str], side: str) -> PauliOperator:
        out = PauliOperator()
        for n in names:
            out = out * self.operator(n, side)
        return out


def _plane(l: Lattice, z: int) -> frozenset[int]:
    return frozenset(i for i, c in enumerate(l.qubits) if c[2] == z)


def primal_column(x: int, y: int, z_cells: Iterable[int]) -> list[tuple[int, int, int]]:
    return [(x, y, 2 * k + 1) for k in z_cells]


def dual_column(x: int, y: int, z_cells: Iterable[int]) -> list[tuple[int, int, int]]:
    return [(x, y, 2 * k) for k in z_cells]


def identity_scenario(t: int = 2, parity: Parity | str = Parity.PRIMAL) -> Scenario:
    """Two straight defects running from the input plane to the output plane."""
    p = Parity(parity)
    if p is Parity.PRIMAL:
        pos = ((3, 3), (7, 3))
        cells = [primal_column(x, y, range(t)) for x, y in pos]
        extents = (5, 3, t)
    else:
        pos = ((4, 4), (8, 4))
        cells = [dual_column(x, y, range(t + 1)) for x, y in pos]
        extents = (6, 4, t)
    side = p.value
    bounds = Boundaries.from_mapping({"x-": side, "x+": side, "y-": side, "y+": side})
    defects = [DefectSpec(p, c) for c in cells]
    l = build_lattice(extents, bounds, defects)
    q = LogicalQubit("p" if p is Parity.PRIMAL else "d", p, pos)
    return Scenario(f"identity-{p.value}", l, {q.name: q}, _plane(l, l.lo[2]), _plane(l, l.hi[2]))


def cnot_scenario(t: int = 5) -> Scenario:
    """Dual control (d) and primal target (p); dual defect 2 is braided once
    around primal defect 1.

    Dual defect 2 rises in its column to layer z=2, runs once around a square
    enclosing primal defect 1 while climbing to layer z=6, then continues up its
    column. The path never touches itself, so the worldline stays a single
    open curve winding around the primal defect.
    """
    if t < 5:
        raise ValueError("the braid needs at least five cell layers")
    za, zb = 2, 6
    p1, p2 = (7, 7), (15, 7)
    d1, d2 = (6, 14), (10, 14)
    prim = [DefectSpec(Parity.PRIMAL, primal_column(x, y, range(t))) for x, y in (p1, p2)]
    lower = [(10, y) for y in (12, 10, 8, 6, 4)] + [(x, 4) for x in (8, 6, 4)] + [(4, y) for y in (6, 8, 10)] + [(6, 10)]
    upper = [(6, 10), (8, 10), (10, 10), (10, 12)]
    path = (
        [(10, 14, z) for z in range(0, za + 1, 2)]
        + [(x, y, za) for x, y in lower]
        + [(6, 10, za + 2)]
        + [(x, y, zb) for x, y in upper]
        + [(10, 14, z) for z in range(zb, 2 * t + 1, 2)]
    )
    dual2 = DefectSpec(Parity.DUAL, path)
    dual1 = DefectSpec(Parity.DUAL, dual_column(*d1, range(t + 1)))
    bounds = Boundaries.from_mapping({"x-": "dual", "x+": "dual", "y-": "dual", "y+": "dual"})
    l = build_lattice((10, 9, t), bounds, prim + [dual2, dual1])
    qp = LogicalQubit("p", Parity.PRIMAL, (p1, p2))
    qd = LogicalQubit("d", Parity.DUAL, (d1, d2))
    return Scenario("cnot", l, {"p": qp, "d": qd}, _plane(l, l.lo[2]), _plane(l, l.hi[2]))


def _primal_pair_lattice(t: int, cells: Sequence[Sequence[tuple[int, int, int]]], extents=(5, 3)):
    bounds = Boundaries.from_mapping({"x-": "primal", "x+": "primal", "y-": "primal", "y+": "primal"})
    return build_lattice((*extents, t), bounds, [DefectSpec(Parity.PRIMAL, c) for c in cells])


def init_scenario(kind: str, t: int = 3) -> Scenario:
    """A primal pair that begins inside the block, read at the output plane.

    ``kind="plus"``: both defects start as separate caps one layer above the
    bottom. ``kind="zero"``: the defects start joined by a bar, forming a U.
    """
    if t < 2:
        raise ValueError("initialization needs at least two cell layers")
    pos = ((3, 3), (7, 3))
    cols = [primal_column(x, y, range(1, t)) for x, y in pos]
    if kind == "zero":
        cols = [cols[0] + [(5, 3, 3)] + cols[1]]
    elif kind != "plus":
        raise ValueError(f"unknown initialization {kind!r}")
    l = _primal_pair_lattice(t, cols)
    q = LogicalQubit("p", Parity.PRIMAL, pos)
    return Scenario(f"init-{kind}", l, {"p": q}, frozenset(), _plane(l, l.hi[2]))


def readout_scenario(kind: str, t: int = 3) -> Scenario:
    """Time reverse of :func:`init_scenario`: defects end inside the block.

    ``kind="plus"`` reads X (each defect capped separately), ``kind="zero"``
    reads Z (the defects are joined by a bar before ending).
    """
    if t < 2:
        raise ValueError("read-out needs at least two cell layers")
    pos = ((3, 3), (7, 3))
    cols = [primal_column(x, y, range(0, t - 1)) for x, y in pos]
    if kind == "zero":
        cols = [cols[0] + [(5, 3, 2 * t - 3)] + cols[1]]
    elif kind != "plus":
        raise ValueError(f"unknown read-out {kind!r}")
    l = _primal_pair_lattice(t, cols)
    q = LogicalQubit("p", Parity.PRIMAL, pos)
    return Scenario(f"readout-{kind}", l, {"p": q}, _plane(l, l.lo[2]), frozenset())


def round_trip_scenario(kind: str, t: int = 5) -> Scenario:
    """Initialization, a straight stretch and read-out in one block with no I/O.

    The plane ``z = 2 * (t // 2)`` is recorded in ``notes["cut"]``; logical
    operators named on side "cut" sit there.
    """
    if t < 5:
        raise ValueError("round trip needs at least five cell layers")
    pos = ((3, 3), (7, 3))
    cols = [primal_column(x, y, range(1, t - 1)) for x, y in pos]
    if kind == "zero":
        cols = [cols[0] + [(5, 3, 3), (5, 3, 2 * t - 3)] + cols[1]]
    elif kind != "plus":
        raise ValueError(f"unknown initialization {kind!r}")
    l = _primal_pair_lattice(t, cols)
    q = LogicalQubit("p", Parity.PRIMAL, pos)
    cut = 2 * (t // 2)
    return Scenario(f"round-trip-{kind}", l, {"p": q}, frozenset(), frozenset(), notes={"cut": cut})


def injection_scenario(t: int = 3) -> Scenario:
    """A primal pair grown out of a single unmeasured face qubit.

    The two defects start one layer above the bottom as neighbouring cells
    (5,3,3) and (7,3,3); the face between them, (6,3,3), is the injection
    qubit. Each defect then steps sideways and runs straight up to the output
    plane.
    """
    if t < 3:
        raise ValueError("injection needs at least three cell layers")
    pos = ((3, 3), (9, 3))
    a = primal_column(3, 3, range(1, t)) + [(5, 3, 3)]
    b = primal_column(9, 3, range(1, t)) + [(7, 3, 3)]
    l = _primal_pair_lattice(t, [a, b], extents=(6, 3))
    q = LogicalQubit("p", Parity.PRIMAL, pos)
    site = l.qubit_index((6, 3, 3))
    return Scenario("injection", l, {"p": q}, frozenset(), _plane(l, l.hi[2]),
                    extra_io=frozenset([site]), notes={"site": site})
