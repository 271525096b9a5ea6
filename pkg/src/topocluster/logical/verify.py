"""Exact verification of logical-operator claims.

Each suite returns a :class:`Report`. Gate suites combine two independent
routes: correlation surfaces found by GF(2) elimination over cluster
stabilizers, and a tableau simulation of the measured cluster state. For every
measurement branch that is run, the tableau's sign for ``in (x) out`` must
equal the sign the surface predicts from the recorded outcomes.

Branches are produced with forced outcomes. Records consistent with the
cluster state form an affine space: any change that keeps every
trivial-I/O surface parity even is allowed. Solving for such a change that
flips a chosen set of group parities gives a record for each sign branch.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse

from ..lattice import Lattice, Parity, build_lattice
from ..stabilizer.cluster import cluster_tableau, product_of_stabilizers
from ..stabilizer.dense import DenseState, phase_state
from ..stabilizer.pauli import PauliOperator
from ..stabilizer.tableau import MeasurementConflict, Tableau
from . import gf2
from .frame import inject_state, make_plus_init, make_readout, make_zero_init
from .geometry import (
    Scenario,
    cnot_scenario,
    identity_scenario,
    init_scenario,
    readout_scenario,
    round_trip_scenario,
)
from .surfaces import CorrelationSolver, Surface


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class MappingRow:
    """One row of a mapping table: ``input -> sign * output``, sign from ``group``."""

    input: str
    output: str
    sign: int
    group: str
    group_size: int

    def to_text(self) -> str:
        s = "+" if self.sign > 0 else "-"
        return f"{self.input} -> {s}{self.output}  sign-bit group {self.group} ({self.group_size} qubits)"


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    rows: list[MappingRow] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def to_text(self) -> str:
        # no timings here: the text is a deterministic artifact
        lines = [f"# suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        lines += [f"map {r.to_text()}" for r in self.rows]
        for c in self.checks:
            tail = f"  {c.detail}" if c.detail else ""
            lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}{tail}")
        return "\n".join(lines) + "\n"


def _timed(fn: Callable[..., Report]) -> Callable[..., Report]:
    def wrapper(*args, **kwargs) -> Report:
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- cell stabilizers -----------------------------------------------------------


@_timed
def verify_cell_stabilizers(extents: Sequence[int] | Lattice = (4, 4, 4)) -> Report:
    """Every complete cell: the product of its six face stabilizers is +X^6 on the faces."""
    rep = Report("cell-stabilizer")
    l = extents if isinstance(extents, Lattice) else build_lattice(tuple(extents))
    extents = l.extents
    bad, count = [], 0
    for parity in Parity:
        for cell in l.cells(parity):
            faces = [l.qubit_index(c) for c in l.cell_faces(cell)]
            if len(faces) != 6:
                continue
            count += 1
            if product_of_stabilizers(l, faces) != PauliOperator.from_sites("X", faces):
                bad.append(cell)
    rep.add(f"{count} complete cells on {tuple(extents)}", not bad and count > 0, f"bad={bad[:3]}")
    return rep


@_timed
def verify_even_parity(runs: int = 1000, seed: int = 0) -> Report:
    """Noiseless X measurement of a single cell's cluster state: face parity always even."""
    rep = Report("even-parity")
    l = build_lattice((1, 1, 1))
    faces = [l.qubit_index(c) for c in l.cell_faces((1, 1, 1))]
    rng = np.random.default_rng(seed)
    base = cluster_tableau(l)
    odd = 0
    for _ in range(runs):
        t = base.copy()
        bits = [t.measure(q, "X", rng=rng)[0] for q in range(l.n_qubits)]
        odd += sum(bits[q] for q in faces) % 2
    rep.add(f"{runs} seeded runs on the 18-qubit cell", odd == 0, f"odd runs={odd}")
    return rep


# -- correlation surfaces ---------------------------------------------------------


@_timed
def verify_tube(height: int = 3) -> Report:
    """Side faces of a column of cells multiply to X on the tube and Z on two end rings."""
    rep = Report("tube")
    l = build_lattice((1, 1, height))
    side = [(0, 1), (2, 1), (1, 0), (1, 2)]
    tube = [l.qubit_index((x, y, 2 * k + 1)) for k in range(height) for x, y in side]
    op = product_of_stabilizers(l, tube)
    rings = {l.qubit_index((x, y, z)) for z in (0, 2 * height) for x, y in side}
    want = PauliOperator.from_sites("X", tube) * PauliOperator.from_sites("Z", rings)
    rep.add("tube operator equals X on tube faces times Z on end rings", op == want)
    rep.add("Z support is exactly the two rings", op.z_support() == frozenset(rings))
    return rep


def _group_matrix(solver: CorrelationSolver) -> tuple[np.ndarray, sparse.csr_matrix]:
    """Measured qubits and the map from surface variables to group indicators."""
    l = solver.lattice
    measured = np.array([q for q in range(l.n_qubits) if solver.basis[q] in ("X", "Z")], dtype=np.int64)
    rows, cols = [], []
    for r, q in enumerate(measured):
        if solver.basis[q] == "X":
            rows.append(r)
            cols.append(solver.var_index[q])
        else:
            for n in l.neighbors[q]:
                if n in solver.var_index:
                    rows.append(r)
                    cols.append(solver.var_index[n])
    a = sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.uint8), (rows, cols)), shape=(len(measured), len(solver.variables))
    )
    return measured, a


class BranchPlanner:
    """Outcome records realizing chosen sign branches of a set of surfaces."""

    def __init__(self, solver: CorrelationSolver, surfaces: Sequence[Surface]):
        self.solver = solver
        self.measured, a = _group_matrix(solver)
        self.pos = {int(q): i for i, q in enumerate(self.measured)}
        kernel = solver.kernel().astype(np.uint8)
        # every trivial-I/O surface fixes the parity of its group
        self.relations = (sparse.csr_matrix(kernel) @ a.T).toarray() % 2 == 1 if kernel.size else np.zeros((0, len(self.measured)), bool)
        self.groups = np.zeros((len(surfaces), len(self.measured)), dtype=bool)
        for i, s in enumerate(surfaces):
            for q in s.group:
                self.groups[i, self.pos[q]] = True

    def consistent(self, record: Mapping[int, int], reference: Mapping[int, int]) -> bool:
        diff = np.array([record[q] ^ reference[q] for q in self.measured], dtype=bool)
        return not (self.relations.astype(np.uint8) @ diff.astype(np.uint8) % 2).any()

    def record_for(self, reference: Mapping[int, int], flips: Sequence[int]) -> dict[int, int] | None:
        """A record equal to ``reference`` except that group ``i`` parity flips iff ``flips[i]``."""
        a = np.vstack([self.relations, self.groups])
        b = np.concatenate([np.zeros(len(self.relations), bool), np.asarray(flips, dtype=bool)])
        x = gf2.solve(a, b)
        if x is None:
            return None
        return {int(q): reference[int(q)] ^ int(x[i]) for i, q in enumerate(self.measured)}


def run_pattern(
    base: Tableau,
    bases: Mapping[int, str],
    order: Iterable[int],
    record: Mapping[int, int] | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[Tableau, dict[int, int]]:
    """Measure ``order`` on a copy of ``base``; random outcomes follow ``record`` when given."""
    t = base.copy()
    out: dict[int, int] = {}
    for q in order:
        forced = None if record is None else record[q]
        out[q] = t.measure(q, bases[q], forced=forced, rng=rng)[0]
    return t, out


@dataclass(frozen=True)
class Mapping_:
    input: str
    outputs: tuple[str, ...]
    group: str


def _branch_list(n: int, mode: str) -> list[tuple[int, ...]]:
    if mode == "all":
        return list(itertools.product((0, 1), repeat=n))
    singles = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    return [tuple([0] * n)] + singles


def _verify_mappings(
    rep: Report,
    sc: Scenario,
    table: Sequence[Mapping_],
    negatives: Sequence[tuple[str, tuple[str, ...]]],
    branches: str,
) -> None:
    l = sc.lattice
    solver = CorrelationSolver(l, sc.io)
    surfaces, targets = [], []
    for m in table:
        target = sc.operator(m.input, "in") * sc.product(m.outputs, "out")
        s = solver.solve(target)
        label = f"surface {m.input} -> {' '.join(m.outputs)}"
        if not rep.add(label, s is not None and s.io_operator.unsigned() == target.unsigned()):
            return
        surfaces.append(s)
        targets.append(target.unsigned())
        rep.rows.append(MappingRow(m.input, " ".join(m.outputs), s.sign, m.group, len(s.group)))
    neg_ops = []
    for a, outs in negatives:
        op = sc.operator(a, "in") * sc.product(outs, "out")
        rep.add(f"no surface for {a} -> {' '.join(outs)}", solver.solve(op) is None)
        neg_ops.append(op.unsigned())

    base = cluster_tableau(l)
    bases = {q: l.basis(q) for q in range(l.n_qubits) if q not in sc.io}
    order = sorted(bases)
    _, zero = run_pattern(base, bases, order)  # random outcomes default to 0
    planner = BranchPlanner(solver, surfaces)
    seen, mismatches, conflicts = 0, [], 0
    for flips in _branch_list(len(table), branches):
        record = planner.record_for(zero, flips)
        if record is None:
            mismatches.append((flips, "unreachable"))
            continue
        try:
            t, rec = run_pattern(base, bases, order, record)
        except MeasurementConflict:
            conflicts += 1
            continue
        seen += 1
        for m, s, op, f in zip(table, surfaces, targets, flips):
            got = t.verify_eigenoperator(op)
            want = s.eigenvalue(rec)
            if got != want or want != s.eigenvalue(zero) * (-1) ** f:
                mismatches.append((flips, m.input, got, want))
        for op in neg_ops:
            if t.verify_eigenoperator(op) is not None:
                mismatches.append((flips, "negative mapping holds"))
    rep.add(
        f"tableau signs match surface parities on {seen} forced branches ({branches})",
        not mismatches and conflicts == 0 and seen > 0,
        f"mismatches={mismatches[:3]} conflicts={conflicts}",
    )


IDENTITY_TABLE = {
    Parity.PRIMAL: [Mapping_("X1p", ("X1p",), "s1"), Mapping_("X2p", ("X2p",), "s2"), Mapping_("Zp", ("Zp",), "sZ")],
    Parity.DUAL: [Mapping_("Z1d", ("Z1d",), "s1"), Mapping_("Z2d", ("Z2d",), "s2"), Mapping_("Xd", ("Xd",), "sX")],
}

CNOT_TABLE = [
    Mapping_("Xd", ("Xd", "X1p"), "lambda_Xd"),
    Mapping_("X1p", ("X1p",), "lambda_X1p"),
    Mapping_("X2p", ("X2p",), "lambda_X2p"),
    Mapping_("Z1d", ("Z1d",), "lambda_Z1d"),
    Mapping_("Z2d", ("Z2d",), "lambda_Z2d"),
    Mapping_("Zp", ("Z2d", "Zp"), "lambda_Zp"),
]

CNOT_NEGATIVES = [("Xd", ("Xd",)), ("Zp", ("Zp",)), ("I", ())]


@_timed
def verify_identity_gate(parity: Parity | str = Parity.PRIMAL, t: int = 2, branches: str = "all") -> Report:
    """Straight defect pair: each logical operator maps to itself with a byproduct sign."""
    p = Parity(parity)
    rep = Report(f"identity-{p.value}")
    sc = identity_scenario(t, p)
    table = IDENTITY_TABLE[p]
    ring, chain = table[0].input, table[2].input
    negatives = [(ring, ()), (chain, ())]
    _verify_mappings(rep, sc, table, negatives, branches)
    return rep


@_timed
def verify_cnot(t: int = 5, branches: str = "all") -> Report:
    """Dual control braided around a primal target: the six-row CNOT table."""
    rep = Report("cnot")
    sc = cnot_scenario(t)
    _verify_mappings(rep, sc, CNOT_TABLE, [n for n in CNOT_NEGATIVES if n[0] != "I"], branches)
    return rep


# -- primal-primal CNOT from braids -------------------------------------------------


def primal_cnot_circuit(t: Tableau, c: str, tgt: str, m1: int, m2: int) -> str:
    """Compose dual-control braids into a CNOT between primal qubits ``c`` and ``tgt``.

    A dual ancilla in |+> controls braids around ``c``; measuring ``c`` in Z
    moves it onto the ancilla. The ancilla then braids around ``tgt`` and a
    fresh primal qubit in |0>, and is measured in X. Returns the new control.
    """
    t.add_qubit("d", "+")
    t.cx("d", c)
    t.measure(c, "Z", forced=m1)
    t.discard(c, "Z")
    t.cx("d", tgt)
    t.add_qubit("c_out", "0")
    t.cx("d", "c_out")
    t.measure("d", "X", forced=m2)
    t.discard("d", "X")
    return "c_out"


@_timed
def verify_primal_cnot() -> Report:
    """Logical-level composition: the braided circuit equals CNOT up to a known Pauli frame."""
    rep = Report("primal-cnot")
    for m1, m2 in itertools.product((0, 1), repeat=2):
        t = Tableau(capacity=8)
        for r, q in (("Rc", "c"), ("Rt", "tgt")):
            t.add_qubit(r, "+")
            t.add_qubit(q, "0")
            t.cx(r, q)
        out = primal_cnot_circuit(t, "c", "tgt", m1, m2)
        ideal = {
            f"X_Rc X_{out} X_t": (PauliOperator({"Rc": "X", out: "X", "tgt": "X"}), (-1) ** m2),
            "X_Rt X_t": (PauliOperator({"Rt": "X", "tgt": "X"}), 1),
            f"Z_Rc Z_{out}": (PauliOperator({"Rc": "Z", out: "Z"}), (-1) ** m1),
            f"Z_Rt Z_{out} Z_t": (PauliOperator({"Rt": "Z", out: "Z", "tgt": "Z"}), 1),
        }
        bad = [k for k, (op, sign) in ideal.items() if t.verify_eigenoperator(op) != sign]
        rep.add(f"branch m_c={m1} m_d={m2}: CNOT table with frame X^{m1} on both, Z^{m2} on control", not bad, f"bad={bad}")
    return rep


# -- initialization, read-out, round trip ------------------------------------------


@_timed
def verify_initialization(kind: str, t: int = 3, branches: str = "all") -> Report:
    """Init pattern leaves the frame-predicted eigenstate on the output plane."""
    rep = Report(f"init-{kind}")
    sc = init_scenario(kind, t)
    pat = make_plus_init(sc) if kind == "plus" else make_zero_init(sc)
    names = {"s1": "X1p", "s2": "X2p", "s": "Zp"}
    l = sc.lattice
    solver = CorrelationSolver(l, sc.io)
    surfaces = [pat.surfaces[g] for g in pat.groups]
    base = cluster_tableau(l)
    order = sorted(pat.bases)
    _, zero = run_pattern(base, pat.bases, order)
    planner = BranchPlanner(solver, surfaces)
    bad, seen = [], 0
    for flips in _branch_list(len(surfaces), branches):
        record = planner.record_for(zero, flips)
        tab, rec = run_pattern(base, pat.bases, order, record)
        seen += 1
        for g in pat.groups:
            want = -1 if pat.parity(g, rec) else 1
            if tab.verify_eigenoperator(sc.operator(names[g], "out")) != want:
                bad.append((flips, g))
    rep.add(f"output eigenvalues follow the frame on {seen} branches", not bad, f"bad={bad[:3]}")
    other = "Zp" if kind == "plus" else "X1p"
    rep.add(f"{other} is not fixed", solver.solve(sc.operator(other, "out")) is None)
    # two different surfaces with the same boundary read the same parity
    k = solver.kernel()
    s0 = surfaces[0]
    if len(k):
        var = np.zeros(len(solver.variables), dtype=bool)
        for q in s0.qubits:
            var[solver.var_index[q]] = True
        alt = solver.surface([solver.variables[i] for i in np.flatnonzero(var ^ k[len(k) // 2])])
        same = all(alt.eigenvalue(rec) == s0.eigenvalue(rec) for rec in (zero,))
        rep.add("deformed surface reads the same parity", same and alt.qubits != s0.qubits)
    return rep


def _shift(l_from: Lattice, l_to: Lattice, qubits: Iterable[int], dz: int) -> set[int]:
    return {l_to.qubit_index((x, y, z + dz)) for x, y, z in (l_from.qubits[q] for q in qubits)}


@_timed
def verify_round_trip(kind: str, t: int = 5, runs: int = 16, seed: int = 0) -> Report:
    """Initialize, idle and read out in one block; the frame-adjusted result never varies.

    The closed surface is the union of the init surface (below the cut plane)
    and the read-out surface (above it), which share their cut-plane qubits.
    """
    rep = Report(f"round-trip-{kind}")
    sc = round_trip_scenario(kind, t)
    l = sc.lattice
    cut = sc.notes["cut"]
    lo_sc = init_scenario(kind, cut // 2)
    hi_sc = readout_scenario(kind, t - cut // 2)
    basis = "X" if kind == "plus" else "Z"
    name = "s1" if kind == "plus" else "s"
    init = make_plus_init(lo_sc) if kind == "plus" else make_zero_init(lo_sc)
    read = make_readout(hi_sc, basis)
    s_lo = _shift(lo_sc.lattice, l, init.surfaces[name].qubits, 0)
    s_hi = _shift(hi_sc.lattice, l, read.surfaces[basis].qubits, cut)
    plane = {q for q in range(l.n_qubits) if l.qubits[q][2] == cut}
    rep.add("init and read-out surfaces agree on the cut plane", s_lo & plane == s_hi & plane)
    solver = CorrelationSolver(l, ())
    try:
        closed = solver.surface(s_lo | s_hi)
    except ValueError as exc:
        rep.add("glued surface is compatible with the pattern", False, str(exc))
        return rep
    rep.add("glued surface is compatible with the pattern", True)
    frame_group = frozenset(q for q in closed.group if l.qubits[q][2] < cut)
    read_group = closed.group - frame_group
    base = cluster_tableau(l)
    bases = {q: l.basis(q) for q in range(l.n_qubits)}
    rng = np.random.default_rng(seed)
    values = set()
    for _ in range(runs):
        _, rec = run_pattern(base, bases, range(l.n_qubits), rng=rng)
        s = sum(rec[q] for q in frame_group) % 2
        m = sum(rec[q] for q in read_group) % 2
        values.add(closed.sign * (-1) ** (m ^ s))
    rep.add(f"frame-adjusted {basis}_L read-out constant over {runs} random records", len(values) == 1, f"values={values}")
    return rep


# -- injection ------------------------------------------------------------------------


def chain_parity(theta: float, n: int = 4) -> float:
    """P(even) of X_1 X_3 ... (Z_n if n even) on a chain whose first qubit holds the input."""
    st = DenseState(range(n), {0: phase_state(theta)})
    for a in range(n - 1):
        st.cz(a, a + 1)
    bases = {q: "X" for q in range(0, n - 1, 2)}
    if n % 2 == 0:
        bases[n - 1] = "Z"
    return st.parity_distribution(bases)[0]


def cell_parity(theta: float) -> float:
    """18-qubit cell with the input on one face: P(even) of X there and Z on its neighbours."""
    l = build_lattice((1, 1, 1))
    q = l.qubit_index((0, 1, 1))
    st = DenseState(range(l.n_qubits), {q: phase_state(theta)})
    for a, b in l.edges:
        st.cz(a, b)
    bases = {q: "X"} | {n: "Z" for n in l.neighbors[q]}
    return st.parity_distribution(bases)[0]


def chain_teleport_fidelity(theta: float, n: int = 4) -> float:
    """Worst-branch fidelity of the frame-corrected last chain qubit with H^(n-1) of the input."""
    psi = phase_state(theta)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    target = np.linalg.matrix_power(h, n - 1) @ psi
    st = DenseState(range(n), {0: psi})
    for a in range(n - 1):
        st.cz(a, a + 1)
    # rotate the measured qubits into the X basis
    full = st.psi
    for q in range(n - 1):
        full = np.moveaxis(np.tensordot(h, full, axes=([1], [q])), 0, q)
    worst = 1.0
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.diag([1, -1]).astype(complex)
    for bits in itertools.product((0, 1), repeat=n - 1):
        phi = full[bits]
        prob = float(np.vdot(phi, phi).real)
        if prob < 1e-15:
            continue
        phi = phi / math.sqrt(prob)
        fx = fz = 0
        for m in bits:  # frame update per teleport step: H swaps X and Z, then X^m
            fx, fz = fz, fx
            fx ^= m
        corr = np.linalg.matrix_power(X, fx) @ np.linalg.matrix_power(Z, fz)
        phi = np.linalg.inv(corr) @ phi
        worst = min(worst, abs(np.vdot(target, phi)) ** 2)
    return worst


@_timed
def verify_injection(thetas: Sequence[float] = (0.0, math.pi / 2, math.pi / 3), t: int = 3) -> Report:
    """Injection qubit correlations on the lattice plus dense miniature checks."""
    rep = Report("injection")
    inj = inject_state(0.0, t)
    sc, pat = inj.scenario, inj.pattern
    l = sc.lattice
    q = inj.site
    names = {"l1": ("X", "X1p"), "l2": ("X", "X2p"), "lz": ("Z", "Zp")}
    for g, (a, b) in names.items():
        rep.rows.append(MappingRow(f"{a}_q", b, pat.surfaces[g].sign, g, len(pat.groups[g])))
    solver = CorrelationSolver(l, sc.io)
    bases = {k: l.basis(k) for k in range(l.n_qubits) if k not in sc.io}
    order = sorted(bases)
    base = cluster_tableau(l)
    _, zero = run_pattern(base, bases, order)
    surfaces = [pat.surfaces[g] for g in names]
    planner = BranchPlanner(solver, surfaces)
    bad, seen = [], 0
    for flips in _branch_list(3, "all"):
        tab, rec = run_pattern(base, bases, order, planner.record_for(zero, flips))
        seen += 1
        for g, (a, b) in names.items():
            op = (PauliOperator({q: a}) * sc.operator(b, "out")).unsigned()
            if tab.verify_eigenoperator(op) != pat.surfaces[g].eigenvalue(rec):
                bad.append((flips, g))
        # theta = 0: measuring the injection qubit in X leaves a frame-predicted X_L eigenstate
        m_q, _ = tab.measure(q, "X")
        want = pat.surfaces["l1"].eigenvalue(rec) * (-1) ** m_q
        if tab.verify_eigenoperator(sc.operator("X1p", "out")) != want:
            bad.append((flips, "theta=0"))
    rep.add(f"Bell-type correlations of the injection qubit on {seen} branches", not bad, f"bad={bad[:3]}")
    rep.add("the injection qubit alone is not correlated with X_L", solver.solve(sc.operator("X1p", "out")) is None)
    for th in thetas:
        want = (1 + math.cos(th)) / 2
        two = DenseState(["a", "b"], {"a": phase_state(th)})
        two.cz("a", "b")
        checks = {
            "2-qubit X(x)Z": two.parity_distribution({"a": "X", "b": "Z"})[0],
            "4-chain X1 X3 Z4": chain_parity(th, 4),
            "18-qubit cell": cell_parity(th),
        }
        for label, got in checks.items():
            rep.add(f"theta={th:.4f} {label} P(even)", abs(got - want) <= 1e-10, f"got={got:.15f} want={want:.15f}")
        fid = chain_teleport_fidelity(th, 4)
        rep.add(f"theta={th:.4f} frame-corrected chain output fidelity", fid >= 1 - 1e-10, f"fidelity={fid:.15f}")
    return rep


# -- surface deformation ------------------------------------------------------------------


def _sheets(solver: CorrelationSolver) -> list[frozenset[int]]:
    """Constant-z planes of face qubits that are themselves trivial-I/O surfaces.

    Between same-type side boundaries such a sheet is not a product of cells:
    it is the space-like cut separating the input plane from the output plane.
    """
    l = solver.lattice
    out = []
    for z in range(l.lo[2] + 1, l.hi[2]):
        for odd_xy in (True, False):
            qs = [
                i for i, (x, y, zz) in enumerate(l.qubits)
                if zz == z and x % 2 == y % 2 == (1 if odd_xy else 0)
            ]
            if not qs or any(q not in solver.var_index for q in qs):
                continue
            try:
                s = solver.surface(qs)
            except ValueError:
                continue
            if not s.io_operator.support:
                out.append(frozenset(qs))
    return out


@_timed
def verify_deformation(parity: Parity | str = Parity.PRIMAL, t: int = 2) -> Report:
    """Surfaces with the same I/O boundary differ by cell checks and space-like sheets."""
    p = Parity(parity)
    rep = Report(f"deformation-{p.value}")
    sc = identity_scenario(t, p)
    l = sc.lattice
    solver = CorrelationSolver(l, sc.io)
    kernel = solver.kernel()

    def vec(qs: Iterable[int]) -> np.ndarray | None:
        v = np.zeros(len(solver.variables), dtype=bool)
        for q in qs:
            if q not in solver.var_index:
                return None
            v[solver.var_index[q]] ^= True
        return v

    cells = [
        v
        for par in Parity
        for chk in l.checks(par)
        if not set(chk.x_support) & sc.io and (v := vec(chk.x_support)) is not None
    ]
    cells_m = np.array(cells, dtype=bool)
    sheets = np.array([vec(s) for s in _sheets(solver)], dtype=bool).reshape(-1, len(solver.variables))
    r_cells = gf2.rank(cells_m)
    gens = np.vstack([cells_m, sheets])
    r_gens = gf2.rank(gens)
    r_all = gf2.rank(np.vstack([gens, kernel])) if len(kernel) else r_gens
    rep.add(
        f"{len(kernel)} kernel generators lie in the span of {len(cells)} cell checks and {len(sheets)} sheets",
        r_all == r_gens,
        f"rank cells={r_cells} cells+sheets={r_gens} with kernel={r_all}",
    )
    rep.add("cell checks and sheets are trivial-I/O surfaces", r_gens == gf2.rank(kernel))
    return rep


SUITES: dict[str, Callable[[], list[Report]]] = {
    "cell-stabilizer": lambda: [verify_cell_stabilizers((1, 1, 1)), verify_cell_stabilizers((4, 4, 4)), verify_even_parity()],
    "correlation-surface": lambda: [verify_tube(), verify_deformation("primal"), verify_deformation("dual")],
    "identity": lambda: [verify_identity_gate("primal"), verify_identity_gate("dual")],
    "cnot": lambda: [verify_cnot(), verify_primal_cnot()],
    "init": lambda: [
        verify_initialization("plus"),
        verify_initialization("zero"),
        verify_round_trip("plus"),
        verify_round_trip("zero"),
    ],
    "injection": lambda: [verify_injection()],
}
