import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chains import enumerate_chains, odd_cells_batch
from topocluster.lattice import Boundaries, DefectSpec, LatticeError, Parity, build_lattice
from topocluster.noise import FlipPattern
from topocluster.syndrome import Syndrome, boundary_visibility, extract_syndrome

CUBE = build_lattice((4, 4, 4))
HALF_DUAL = build_lattice((4, 4, 4), Boundaries.from_mapping({"x-": "dual", "x+": "dual"}))


def flips(l, *sites):
    return FlipPattern.from_coords(l, sites)


def test_empty_pattern_has_empty_syndrome():
    assert not extract_syndrome(CUBE, FlipPattern(), "primal")


def test_single_flip_marks_the_two_cells_sharing_it():
    s = extract_syndrome(CUBE, flips(CUBE, (4, 3, 3)), "primal")
    assert s.odd_cells == {(3, 3, 3), (5, 3, 3)}
    assert not extract_syndrome(CUBE, flips(CUBE, (4, 3, 3)), "dual")


def test_bent_three_chain_marks_its_endpoints():
    f = flips(CUBE, (2, 3, 3), (3, 4, 3), (3, 5, 4))
    assert extract_syndrome(CUBE, f, "primal").odd_cells == {(1, 3, 3), (3, 5, 5)}


@pytest.mark.parametrize("l, parity", [(CUBE, "primal"), (HALF_DUAL, "primal"), (build_lattice((3, 3, 3), Boundaries.uniform("dual")), "dual")])
def test_all_short_chains_mark_exactly_their_cell_ends(l, parity):
    chains = list(enumerate_chains(l, parity, 3))
    observed = odd_cells_batch(l, parity, chains)
    kinds = {k for _, _, k in chains}
    assert {"bulk", "one-exit"} <= kinds
    for (faces, expected, _), got in zip(chains, observed):
        assert got == expected, faces


def test_primal_chain_into_primal_boundary_is_invisible_there():
    # (0,3,3) sits on the x- primal boundary and is read by one cell only
    f = flips(CUBE, (0, 3, 3), (2, 3, 3))
    assert extract_syndrome(CUBE, f, "primal").odd_cells == {(3, 3, 3)}
    (ends,) = boundary_visibility(CUBE, f, "primal")
    assert sorted((e.visible, e.on_boundary) for e in ends) == [(False, True), (True, False)]


def test_primal_chain_into_dual_boundary_marks_the_half_cell():
    l = HALF_DUAL
    assert len(l.cell_faces((1, 3, 3))) == 5
    f = flips(l, (2, 3, 3), (4, 3, 3))
    assert extract_syndrome(l, f, "primal").odd_cells == {(1, 3, 3), (5, 3, 3)}
    (ends,) = boundary_visibility(l, f, "primal")
    assert {e.cell: e.on_boundary for e in ends} == {(1, 3, 3): True, (5, 3, 3): False}


def test_dual_chain_between_dual_boundaries_is_undetectable():
    l = build_lattice((3, 3, 3), Boundaries.uniform("dual"))
    f = flips(l, *[(x, 2, 2) for x in range(1, 6, 2)])
    assert not extract_syndrome(l, f, "dual")
    (ends,) = boundary_visibility(l, f, "dual")
    assert [e.visible for e in ends] == [False, False]


def test_boundary_visibility_rejects_branches():
    f = flips(CUBE, (2, 3, 3), (4, 3, 3), (3, 2, 3))
    with pytest.raises(LatticeError):
        boundary_visibility(CUBE, f, "primal")


def test_cell_next_to_defect_uses_its_remaining_faces():
    l = build_lattice((5, 3, 3), defects=[DefectSpec("dual", [(4, 4, 4), (6, 4, 4)])])
    s = extract_syndrome(l, flips(l, (5, 4, 3)), "dual")
    for c in s.odd_cells:
        assert c not in {(4, 4, 4), (6, 4, 4)}


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, CUBE.n_qubits - 1)), st.sets(st.integers(0, CUBE.n_qubits - 1)))
def test_syndrome_is_linear(a, b):
    fa, fb = FlipPattern(frozenset(a)), FlipPattern(frozenset(b))
    for p in Parity:
        assert extract_syndrome(CUBE, fa ^ fb, p) == extract_syndrome(CUBE, fa, p) ^ extract_syndrome(CUBE, fb, p)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, CUBE.n_qubits - 1)))
def test_primal_and_dual_syndromes_read_disjoint_qubits(a):
    f = FlipPattern(frozenset(a))
    primal_part = FlipPattern(frozenset(q for q in a if CUBE.qubit_class(q).parity is Parity.PRIMAL))
    assert extract_syndrome(CUBE, f, "primal") == extract_syndrome(CUBE, primal_part, "primal")
    assert not extract_syndrome(CUBE, primal_part, "dual")


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, CUBE.n_qubits - 1)))
def test_primal_odd_count_is_even_inside_dual_boundaries(a):
    # every primal face is then read by two primal cells, so odd cells pair up
    l = build_lattice((3, 3, 3), Boundaries.uniform("dual"))
    f = FlipPattern(frozenset(q % l.n_qubits for q in a))
    assert len(extract_syndrome(l, f, "primal")) % 2 == 0


def test_syndrome_text_round_trip():
    s = Syndrome("dual", {(2, 2, 2), (4, 2, 6)})
    assert Syndrome.from_text(s.to_text()) == s
    assert s.counts_per_slice() == {2: 1, 6: 1}
    with pytest.raises(ValueError):
        Syndrome.from_text("1 2 3\n")
