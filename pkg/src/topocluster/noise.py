"""Fault sampling: phenomenological outcome flips and circuit-level Pauli faults.

Only measurement outcomes matter downstream, so every fault is reduced to the
set of qubits whose recorded outcome it flips (a :class:`FlipPattern`). An X
fault on a qubit spreads Z onto each neighbour whose CZ with it is still
pending; a Z fault (or an X fault, on a Z-measured qubit) flips the qubit's own
outcome.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from .lattice import Coord3, Lattice, LatticeError, classify_site, SiteClass


class NoiseKind(str, enum.Enum):
    PHENOMENOLOGICAL = "phenomenological"
    CIRCUIT = "circuit"


class CZFaultMode(str, enum.Enum):
    # one location per CZ, uniform over the 15 nontrivial two-qubit Paulis
    TWO_QUBIT = "two_qubit"
    # two locations per CZ, independent single-qubit depolarizing on each qubit
    SINGLE_PAIR = "single_pair"


@dataclass(frozen=True)
class ErrorModel:
    kind: NoiseKind = NoiseKind.PHENOMENOLOGICAL
    p: float = 0.0
    seed: int = 0
    cz_mode: CZFaultMode = CZFaultMode.TWO_QUBIT

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "cz_mode", CZFaultMode(self.cz_mode))
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"error probability must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class FlipPattern:
    """Qubits (by index) whose measurement outcome is flipped."""

    qubits: frozenset[int] = field(default_factory=frozenset)

    @classmethod
    def from_array(cls, flips: np.ndarray) -> FlipPattern:
        return cls(frozenset(int(i) for i in np.flatnonzero(flips)))

    @classmethod
    def from_coords(cls, l: Lattice, coords: Iterable[Sequence[int]]) -> FlipPattern:
        return cls(frozenset(l.qubit_index(c) for c in coords))

    def to_array(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[list(self.qubits)] = True
        return out

    def coords(self, l: Lattice) -> list[Coord3]:
        return sorted(l.qubits[q] for q in self.qubits)

    def __xor__(self, other: FlipPattern) -> FlipPattern:
        return FlipPattern(self.qubits ^ other.qubits)

    def __len__(self) -> int:
        return len(self.qubits)

    def __iter__(self):
        return iter(sorted(self.qubits))

    def to_text(self, l: Lattice) -> str:
        lines = ["# flip pattern: one qubit site per line"]
        lines += [f"{x} {y} {z}" for x, y, z in self.coords(l)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, l: Lattice, text: str) -> FlipPattern:
        coords = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected three integers")
            try:
                coords.append(tuple(int(v) for v in parts))
            except ValueError:
                raise ValueError(f"line {lineno}: expected three integers") from None
        return cls.from_coords(l, coords)


# -- phenomenological ---------------------------------------------------------


def sample_phenomenological(
    l: Lattice, p: float, rng: np.random.Generator, *, include_z_measured: bool = False
) -> FlipPattern:
    return FlipPattern.from_array(sample_phenomenological_array(l, p, rng, include_z_measured=include_z_measured))


def sample_phenomenological_array(
    l: Lattice, p: float, rng: np.random.Generator, *, include_z_measured: bool = False
) -> np.ndarray:
    flips = rng.random(l.n_qubits) < p
    if not include_z_measured and l.z_measured:
        flips[list(l.z_measured)] = False
    return flips


# -- CZ schedule --------------------------------------------------------------


def default_cz_step(primal: Coord3, dual: Coord3) -> int:
    """Time step (0-3) of the CZ between a primal and a dual face qubit.

    With ``a`` the primal qubit's normal axis and the edge pointing along ``b``,
    the step is ``2*[b == a+1 mod 3] + [dual is on the + side]``. Each qubit's
    four CZs then occupy four distinct steps.
    """
    a = next(i for i in range(3) if primal[i] % 2 == 0)
    b = next(i for i in range(3) if primal[i] != dual[i])
    return 2 * int(b == (a + 1) % 3) + int(dual[b] > primal[b])


class Schedule:
    """Init at step -1, CZs at steps 0..3, measurement after step 3."""

    n_steps = 4

    def __init__(self, l: Lattice, steps: dict[tuple[int, int], int] | None = None):
        if steps is None:
            steps = {}
            for a, b in l.edges:
                ca, cb = l.qubits[a], l.qubits[b]
                if classify_site(ca) is SiteClass.PRIMAL_FACE_QUBIT:
                    steps[(a, b)] = default_cz_step(ca, cb)
                else:
                    steps[(a, b)] = default_cz_step(cb, ca)
        if set(steps) != set(l.edges):
            raise LatticeError("schedule does not match the lattice's CZ edges")
        self.lattice = l
        self._steps = dict(steps)
        for q, nb in enumerate(l.neighbors):
            s = [self.step(q, n) for n in nb]
            if len(set(s)) != len(s):
                raise LatticeError(f"qubit {l.qubits[q]} has two CZs in the same step")

    def step(self, a: int, b: int) -> int:
        return self._steps[(a, b) if a < b else (b, a)]

    def cz_order(self, q: int) -> list[int]:
        """Neighbours of ``q`` in the order their CZs are applied."""
        return sorted(self.lattice.neighbors[q], key=lambda n: self.step(q, n))

    def pending_after(self, q: int, step: int) -> list[int]:
        """Neighbours whose CZ with ``q`` happens strictly after ``step``."""
        return [n for n in self.lattice.neighbors[q] if self.step(q, n) > step]


BEFORE_MEASUREMENT = "before_measurement"


def _pauli_effect(l: Lattice, sched: Schedule, q: int, letter: str, step: int) -> list[int]:
    """Outcome flips caused by Pauli ``letter`` on qubit ``q`` right after CZ step ``step``."""
    out: list[int] = []
    has_x = letter in "XY"
    has_z = letter in "YZ"
    own_basis = l.basis(q)
    if (own_basis == "X" and has_z) or (own_basis == "Z" and has_x):
        out.append(q)
    if has_x:
        for n in sched.pending_after(q, step):
            if l.basis(n) == "X":
                out.append(n)
    return out


def reduce_x_error(l: Lattice, site, time_of_fault, schedule: Schedule | None = None) -> FlipPattern:
    """Outcome flips equivalent to an X fault on ``site``.

    ``time_of_fault`` is either :data:`BEFORE_MEASUREMENT` or the number of the
    site's own CZs (0-4, in schedule order) already applied.
    """
    sched = schedule or Schedule(l)
    q = l.qubit_index(site) if isinstance(site, tuple) else int(site)
    if time_of_fault == BEFORE_MEASUREMENT:
        step = Schedule.n_steps
    else:
        k = int(time_of_fault)
        order = sched.cz_order(q)
        if not 0 <= k <= len(order):
            raise ValueError(f"qubit has {len(order)} CZs; cannot fault after {k}")
        step = -1 if k == 0 else sched.step(q, order[k - 1])
    return FlipPattern(frozenset(_pauli_effect(l, sched, q, "X", step)))


_LETTERS = ("I", "X", "Y", "Z")


class CircuitNoise:
    """Precomputed fault table for fast circuit-level sampling on one lattice."""

    def __init__(self, l: Lattice, mode: CZFaultMode | str = CZFaultMode.TWO_QUBIT, schedule: Schedule | None = None):
        self.lattice = l
        self.mode = CZFaultMode(mode)
        self.schedule = schedule or Schedule(l)
        sched = self.schedule
        # each location has a list of outcomes; row r of the effect matrix is one outcome
        rows: list[list[int]] = []
        self.location_names: list[tuple] = []
        self.n_outcomes: list[int] = []
        for q in range(l.n_qubits):
            # preparation fault: |-> instead of |+>
            rows.append(_pauli_effect(l, sched, q, "Z", -1))
            self.location_names.append(("init", q))
            self.n_outcomes.append(1)
        for a, b in l.edges:
            k = sched.step(a, b)
            if self.mode is CZFaultMode.TWO_QUBIT:
                for pa in range(4):
                    for pb in range(4):
                        if pa == 0 and pb == 0:
                            continue
                        eff = []
                        if pa:
                            eff += _pauli_effect(l, sched, a, _LETTERS[pa], k)
                        if pb:
                            eff += _pauli_effect(l, sched, b, _LETTERS[pb], k)
                        rows.append(eff)
                self.location_names.append(("cz", a, b))
                self.n_outcomes.append(15)
            else:
                for q in (a, b):
                    for pq in range(1, 4):
                        rows.append(_pauli_effect(l, sched, q, _LETTERS[pq], k))
                    self.location_names.append(("cz1", a, b, q))
                    self.n_outcomes.append(3)
        for q in range(l.n_qubits):
            rows.append([q])
            self.location_names.append(("measure", q))
            self.n_outcomes.append(1)
        self.n_outcomes_arr = np.array(self.n_outcomes, dtype=np.int64)
        self.row_offset = np.concatenate([[0], np.cumsum(self.n_outcomes_arr)[:-1]])
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(r) for r in rows])
        indices = np.fromiter((i for r in rows for i in r), dtype=np.int64, count=int(indptr[-1]))
        self.effects = csr_matrix(
            (np.ones(len(indices), dtype=np.int64), indices, indptr), shape=(len(rows), l.n_qubits)
        )
        self.n_locations = len(self.n_outcomes)

    def locations_touching(self, q: int) -> int:
        return sum(1 for name in self.location_names if q in name[1:])

    def sample_array(self, p: float, rng: np.random.Generator) -> np.ndarray:
        hit = rng.random(self.n_locations) < p
        choice = (rng.random(self.n_locations) * self.n_outcomes_arr).astype(np.int64)
        rows = (self.row_offset + choice)[hit]
        if rows.size == 0:
            return np.zeros(self.lattice.n_qubits, dtype=bool)
        counts = np.asarray(self.effects[rows].sum(axis=0)).ravel()
        return (counts % 2).astype(bool)

    def inject(self, location: int, outcome: int) -> FlipPattern:
        """Deterministic mode: the flips caused by one specific fault."""
        row = self.row_offset[location] + outcome
        return FlipPattern(frozenset(int(i) for i in self.effects[row].indices))


def sample_circuit_level(
    l: Lattice,
    schedule: Schedule | None,
    p: float,
    rng: np.random.Generator,
    *,
    mode: CZFaultMode | str = CZFaultMode.TWO_QUBIT,
) -> FlipPattern:
    return FlipPattern.from_array(CircuitNoise(l, mode, schedule).sample_array(p, rng))


def make_sampler(l: Lattice, model: ErrorModel):
    """Return ``f(rng) -> bool array`` drawing one flip pattern under ``model``."""
    if model.kind is NoiseKind.PHENOMENOLOGICAL:
        return lambda rng: sample_phenomenological_array(l, model.p, rng)
    noise = CircuitNoise(l, model.cz_mode)
    return lambda rng: noise.sample_array(model.p, rng)
