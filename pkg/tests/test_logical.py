import math

import numpy as np
import pytest

from topocluster.lattice import Parity
from topocluster.logical import (
    ByproductFrame,
    CorrelationSolver,
    MeasurementPattern,
    PatternError,
    cnot_scenario,
    identity_scenario,
    init_scenario,
    inject_state,
    logical_failure,
    make_plus_init,
    make_readout,
    make_zero_init,
    measure_logical,
    readout_scenario,
)
from topocluster.logical import gf2
from topocluster.logical.verify import (
    chain_parity,
    chain_teleport_fidelity,
    cell_parity,
    verify_cell_stabilizers,
    verify_cnot,
    verify_deformation,
    verify_even_parity,
    verify_identity_gate,
    verify_initialization,
    verify_injection,
    verify_primal_cnot,
    verify_round_trip,
    verify_tube,
)
from topocluster.noise import FlipPattern


def test_gf2_solve_and_nullspace():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.random((6, 9)) < 0.4
        x = rng.random(9) < 0.5
        b = (a.astype(int) @ x.astype(int)) % 2 == 1
        sol = gf2.solve(a, b)
        assert sol is not None and np.array_equal((a.astype(int) @ sol.astype(int)) % 2 == 1, b)
        ns = gf2.nullspace(a)
        assert gf2.rank(a) + len(ns) == 9
        assert not ((a.astype(int) @ ns.T.astype(int)) % 2).any()
    assert gf2.solve(np.array([[1, 1], [1, 1]], bool), np.array([1, 0], bool)) is None


def test_frame_composition_and_signs():
    f = ByproductFrame(1, 0, 1) ^ ByproductFrame(1, 1, 1)
    assert f == ByproductFrame(0, 1, 0)
    assert [f.sign(op) for op in ("X1", "X2", "Z")] == [-1, 1, 1]


def test_pattern_rejects_groups_on_unmeasured_qubits():
    with pytest.raises(PatternError):
        MeasurementPattern({0: "X"}, {"g": frozenset({0, 1})})
    pat = MeasurementPattern({0: "X", 1: "X"}, {"g": frozenset({0, 1})})
    assert pat.parity("g", {0: 1, 1: 0}) == 1
    with pytest.raises(PatternError):
        pat.parity("g", {0: 1})
    read = MeasurementPattern({0: "X", 1: "X"}, {"Z": frozenset({0, 1})})
    assert measure_logical(read, "Z", {0: 1, 1: 1}) == 1
    assert measure_logical(read, "Z", {0: 1, 1: 1}, ByproductFrame(x=1)) == -1
    assert measure_logical(read, "Z", {0: 1, 1: 0}, ByproductFrame(z1=1)) == -1


def test_ring_and_chain_operators_anticommute():
    sc = identity_scenario(2, "primal")
    for side in ("in", "out"):
        x1, x2, z = (sc.operator(n, side) for n in ("X1p", "X2p", "Zp"))
        assert x1.commutes_with(x2)
        assert not x1.commutes_with(z) and not x2.commutes_with(z)
    with pytest.raises(KeyError):
        sc.operator("Q7", "in")


def test_patterns_cannot_be_made_inside_a_braid():
    sc = cnot_scenario()
    for make in (make_plus_init, make_zero_init):
        with pytest.raises(PatternError):
            make(sc)


def test_init_and_readout_patterns_expose_their_groups():
    assert set(make_plus_init(init_scenario("plus")).groups) == {"s1", "s2"}
    assert set(make_zero_init(init_scenario("zero")).groups) == {"s"}
    assert set(make_readout(readout_scenario("plus"), "X").groups) == {"X"}
    assert set(make_readout(readout_scenario("zero"), "Z").groups) == {"Z"}
    # a plus-type block has no chain surface and vice versa
    with pytest.raises(PatternError):
        make_zero_init(init_scenario("plus"))


def _identity_surfaces():
    sc = identity_scenario(2, "primal")
    solver = CorrelationSolver(sc.lattice, sc.io)
    return sc.lattice, {n: solver.solve(sc.operator(n, "in") * sc.operator(n, "out")) for n in ("X1p", "X2p", "Zp")}


class TestLogicalFailure:
    l, surf = _identity_surfaces()

    def fails(self, *sites):
        return logical_failure(self.l, FlipPattern.from_coords(self.l, sites), self.surf)

    def test_chain_between_defects_flips_both_rings(self):
        assert self.fails((4, 3, 3), (6, 3, 3)) == {"X1p": True, "X2p": True, "Zp": False}

    def test_loop_around_one_defect_flips_the_chain_reading(self):
        ring = [(3, 2, 2), (4, 3, 2), (3, 4, 2), (2, 3, 2)]
        assert self.fails(*ring) == {"X1p": False, "X2p": False, "Zp": True}
        other = [(x + 4, y, z) for x, y, z in ring]
        assert not any(self.fails(*ring, *other).values())

    def test_trivial_loop_flips_nothing(self):
        # dual loop around a bulk primal face, away from both defects
        loop = [(5, 2, 2), (6, 3, 2), (5, 4, 2), (4, 3, 2)]
        assert not any(self.fails(*loop).values())

    def test_residual_with_odd_cells_is_rejected(self):
        with pytest.raises(ValueError):
            self.fails((4, 3, 3))


def test_cell_stabilizers_and_even_parity():
    assert verify_cell_stabilizers((1, 1, 1)).passed
    assert verify_cell_stabilizers((2, 3, 2)).passed
    assert verify_even_parity(runs=50, seed=3).passed


@pytest.mark.parametrize("parity", list(Parity))
def test_surfaces_deform_by_cell_checks(parity):
    assert verify_deformation(parity).passed


def test_tube_surface():
    assert verify_tube().passed


@pytest.mark.parametrize("parity", list(Parity))
def test_identity_gate_all_branches(parity):
    rep = verify_identity_gate(parity)
    assert rep.passed, rep.to_text()
    assert {r.input for r in rep.rows} == ({"X1p", "X2p", "Zp"} if parity is Parity.PRIMAL else {"Z1d", "Z2d", "Xd"})


def test_cnot_single_branches():
    rep = verify_cnot(branches="single")
    assert rep.passed, rep.to_text()
    table = {(r.input, r.output) for r in rep.rows}
    assert ("Xd", "Xd X1p") in table and ("Zp", "Z2d Zp") in table


def test_primal_cnot_composition():
    assert verify_primal_cnot().passed


@pytest.mark.parametrize("kind", ["plus", "zero"])
def test_initialization_and_round_trip(kind):
    assert verify_initialization(kind).passed
    assert verify_round_trip(kind, runs=4, seed=1).passed


@pytest.mark.parametrize("theta", [0.0, math.pi / 2, math.pi / 3, 1.234])
def test_dense_injection_miniatures(theta):
    want = (1 + math.cos(theta)) / 2
    assert chain_parity(theta) == pytest.approx(want, abs=1e-10)
    assert cell_parity(theta) == pytest.approx(want, abs=1e-10)
    assert chain_teleport_fidelity(theta) == pytest.approx(1.0, abs=1e-10)


def test_injection_pattern():
    inj = inject_state(math.pi / 3)
    assert inj.pattern.bases[inj.site] == pytest.approx(math.pi / 3)
    assert set(inj.pattern.groups) == {"l1", "l2", "lz"}
    assert inj.frame({q: 0 for q in inj.pattern.bases}) == ByproductFrame(
        int(inj.pattern.surfaces["lz"].sign < 0), int(inj.pattern.surfaces["l1"].sign < 0), int(inj.pattern.surfaces["l2"].sign < 0)
    )
    assert verify_injection(thetas=(math.pi / 3,)).passed
