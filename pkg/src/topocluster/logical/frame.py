"""Measurement patterns, byproduct frames and logical-failure tests.

A pattern assigns every measured qubit a basis and names the qubit groups
whose outcome parities set byproduct bits. For a primal pair the frame holds
an X_L exponent (flips the sign of Z_L) and one Z exponent per defect (flips
the sign of that defect's ring).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..lattice import Lattice, Parity
from ..noise import FlipPattern
from ..stabilizer.pauli import PauliOperator
from ..syndrome import syndrome_bits
from .geometry import Scenario, injection_scenario
from .surfaces import CorrelationSolver, Surface


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class ByproductFrame:
    """Exponents of X_L, Z_1 and Z_2 applied after a pattern, all mod 2."""

    x: int = 0
    z1: int = 0
    z2: int = 0

    def __xor__(self, other: ByproductFrame) -> ByproductFrame:
        return ByproductFrame(self.x ^ other.x, self.z1 ^ other.z1, self.z2 ^ other.z2)

    def sign(self, operator: str) -> int:
        """Sign picked up by a logical operator ('X1', 'X2' or 'Z') under this frame."""
        bit = {"X1": self.z1, "X2": self.z2, "Z": self.x}[operator]
        return -1 if bit else 1


@dataclass
class MeasurementPattern:
    """Basis per measured qubit ('X', 'Z' or a rotation angle) and named parity groups.

    ``surfaces`` keeps the correlation surface behind each group; its sign is
    the constant part of the byproduct bit.
    """

    bases: dict[int, object]
    groups: dict[str, frozenset[int]]
    surfaces: dict[str, Surface] = field(default_factory=dict)

    def __post_init__(self):
        for name, g in self.groups.items():
            stray = set(g) - set(self.bases)
            if stray:
                raise PatternError(f"group {name!r} uses unmeasured qubits {sorted(stray)[:5]}")

    def parity(self, name: str, record: Mapping[int, int]) -> int:
        try:
            bit = sum(record[q] for q in self.groups[name]) % 2
        except KeyError as exc:
            raise PatternError(f"missing outcome for qubit {exc.args[0]}") from None
        if name in self.surfaces and self.surfaces[name].sign < 0:
            bit ^= 1
        return bit


def _pattern(sc: Scenario, targets: Mapping[str, object]) -> MeasurementPattern:
    l = sc.lattice
    solver = CorrelationSolver(l, sc.io)
    bases: dict[int, object] = {q: l.basis(q) for q in range(l.n_qubits) if q not in sc.io}
    groups, surfaces = {}, {}
    for name, op in targets.items():
        s = solver.solve(op)
        if s is None:
            raise PatternError(f"no correlation surface for {name!r} in {sc.name}")
        groups[name] = s.group
        surfaces[name] = s
    return MeasurementPattern(bases, groups, surfaces)


def _check_unbraided(sc: Scenario) -> None:
    if sc.name.startswith("cnot"):
        raise PatternError("logical operators are undefined inside a braid")


def make_plus_init(sc: Scenario) -> MeasurementPattern:
    """Groups ``s1``, ``s2``: the state left is Z_1^s1 Z_2^s2 |+_L>."""
    _check_unbraided(sc)
    return _pattern(sc, {"s1": sc.operator("X1p", "out"), "s2": sc.operator("X2p", "out")})


def make_zero_init(sc: Scenario) -> MeasurementPattern:
    """Group ``s``: the state left is X_L^s |0_L>."""
    _check_unbraided(sc)
    return _pattern(sc, {"s": sc.operator("Zp", "out")})


def make_readout(sc: Scenario, basis: str) -> MeasurementPattern:
    """Read-out pattern for a block whose defects end inside it ('X' or 'Z')."""
    _check_unbraided(sc)
    name = {"X": "X1p", "Z": "Zp"}[basis]
    return _pattern(sc, {basis: sc.operator(name, "in")})


def measure_logical(
    pattern: MeasurementPattern, basis: str, record: Mapping[int, int], frame: ByproductFrame | None = None
) -> int:
    """Eigenvalue of the logical operator read by ``pattern``, adjusted by ``frame``."""
    value = -1 if pattern.parity(basis, record) else 1
    if frame is not None:
        value *= frame.sign("X1" if basis == "X" else "Z")
    return value


@dataclass(frozen=True)
class Injection:
    scenario: Scenario
    pattern: MeasurementPattern
    theta: float

    @property
    def site(self) -> int:
        return self.scenario.notes["site"]

    def frame(self, record: Mapping[int, int]) -> ByproductFrame:
        """Byproduct X_L^lz Z_1^l1 Z_2^l2 given the Clifford-part outcomes."""
        return ByproductFrame(
            self.pattern.parity("lz", record),
            self.pattern.parity("l1", record),
            self.pattern.parity("l2", record),
        )


def inject_state(theta: float, t: int = 3) -> Injection:
    """Pattern that injects ``(|0> + e^{i theta}|1>)/sqrt(2)`` through one face qubit.

    The injection qubit is correlated with the output pair through
    X_q X_1, X_q X_2 and Z_q Z_L; measuring it in the rotated basis
    ``cos(theta) X - sin(theta) Y`` leaves the logical pair in the target state
    (the sign of Y follows from Y_q Y_L = -X_q X_L Z_q Z_L).
    """
    sc = injection_scenario(t)
    q = sc.notes["site"]
    targets = {
        "l1": sc.operator("X1p", "out") * PauliOperator({q: "X"}),
        "l2": sc.operator("X2p", "out") * PauliOperator({q: "X"}),
        "lz": sc.operator("Zp", "out") * PauliOperator({q: "Z"}),
    }
    pat = _pattern(sc, targets)
    pat.bases[q] = float(theta)
    return Injection(sc, pat, float(theta))


def logical_failure(
    l: Lattice, residual: FlipPattern | np.ndarray, surfaces: Mapping[str, Surface | frozenset[int]]
) -> dict[str, bool]:
    """Which logical readings a syndrome-free residual flips.

    A residual flips a reading exactly when it overlaps the reading's parity
    group an odd number of times.
    """
    flips = residual.to_array(l.n_qubits) if isinstance(residual, FlipPattern) else np.asarray(residual, dtype=bool)
    for parity in Parity:
        if syndrome_bits(l, flips, parity).any():
            raise ValueError("residual leaves odd cells; decode it first")
    out = {}
    for name, s in surfaces.items():
        group = s.group if isinstance(s, Surface) else s
        idx = np.fromiter(group, dtype=np.int64)
        out[name] = bool(flips[idx].sum() % 2) if idx.size else False
    return out
