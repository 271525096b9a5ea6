import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topocluster.lattice import (
    Boundaries,
    DefectSpec,
    LatticeError,
    Parity,
    SiteClass,
    build_lattice,
    classify_site,
    lattice_from_json,
)


@pytest.mark.parametrize(
    "site, cls",
    [
        ((0, 1, 1), SiteClass.PRIMAL_FACE_QUBIT),
        ((0, 0, 1), SiteClass.DUAL_FACE_QUBIT),
        ((1, 1, 1), SiteClass.PRIMAL_CELL_CENTER),
        ((0, 0, 0), SiteClass.DUAL_CELL_CENTER),
    ],
)
def test_classify_site(site, cls):
    assert classify_site(site) is cls


@given(st.tuples(*[st.integers(-50, 50)] * 3))
def test_classification_counts_even_coordinates(c):
    evens = sum(v % 2 == 0 for v in c)
    cls = classify_site(c)
    assert cls.is_qubit == (evens in (1, 2))
    assert (cls.parity is Parity.PRIMAL) == (evens <= 1)


def test_single_cell_has_18_qubits():
    assert build_lattice((1, 1, 1)).n_qubits == 18


def test_four_cube_has_64_primal_cells():
    assert len(build_lattice((4, 4, 4)).cells(Parity.PRIMAL)) == 64


def _boundaries():
    return st.tuples(*[st.sampled_from(list(Parity))] * 6).map(lambda t: Boundaries(*t))


@settings(max_examples=30, deadline=None)
@given(st.tuples(*[st.integers(1, 4)] * 3), _boundaries())
def test_edges_are_bipartite_and_handshake(extents, bounds):
    try:
        l = build_lattice(extents, bounds)
    except LatticeError:
        return  # a one-cell axis cannot carry two dual boundaries
    degrees = sum(len(n) for n in l.neighbors)
    assert len(l.edges) * 2 == degrees
    for a, b in l.edges:
        assert {l.qubit_class(a), l.qubit_class(b)} == {SiteClass.PRIMAL_FACE_QUBIT, SiteClass.DUAL_FACE_QUBIT}
        assert sum(abs(u - v) for u, v in zip(l.qubits[a], l.qubits[b])) == 1
    assert max(len(n) for n in l.neighbors) <= 4


def test_interior_sites_have_four_neighbours_and_cells_six_faces():
    l = build_lattice((4, 4, 4))
    for i, c in enumerate(l.qubits):
        if all(l.lo[a] < c[a] < l.hi[a] for a in range(3)):
            assert len(l.neighbors[i]) == 4
    for p in Parity:
        for cell in l.cells(p):
            faces = l.cell_faces(cell)
            interior = all(l.lo[a] < cell[a] < l.hi[a] for a in range(3))
            assert len(faces) == 6 if interior else len(faces) <= 6


def test_interior_face_belongs_to_two_cells_of_its_class():
    l = build_lattice((3, 3, 3))
    for p in Parity:
        owners = {}
        for cell in l.cells(p):
            for f in l.cell_faces(cell):
                owners.setdefault(f, []).append(cell)
        for f, cells in owners.items():
            if all(l.lo[a] < f[a] < l.hi[a] for a in range(3)):
                assert len(cells) == 2


def test_cell_faces_examples():
    l = build_lattice((3, 3, 3))
    assert set(l.cell_faces((1, 1, 1))) == {(0, 1, 1), (2, 1, 1), (1, 0, 1), (1, 2, 1), (1, 1, 0), (1, 1, 2)}
    assert l.cell_faces((3, 3, 3)) == [(2, 3, 3), (4, 3, 3), (3, 2, 3), (3, 4, 3), (3, 3, 2), (3, 3, 4)]
    faces = l.cell_faces((2, 2, 2))
    assert len(faces) == 6 and all(classify_site(f) is SiteClass.DUAL_FACE_QUBIT for f in faces)
    half = build_lattice((3, 3, 3), Boundaries.from_mapping({"x-": "dual"}))
    assert len(half.cell_faces((1, 3, 3))) == 5
    with pytest.raises(LatticeError):
        l.cell_faces((0, 1, 1))


def test_defect_interior_and_flag():
    thin = build_lattice((5, 3, 3), defects=[DefectSpec("primal", [(3, 3, 1), (3, 3, 3)])])
    assert thin.non_fault_tolerant
    assert thin.qubit_index((3, 3, 2)) in thin.z_measured
    assert thin.qubit_index((2, 3, 3)) not in thin.z_measured
    block = [(x, y, z) for x, y, z in itertools.product((3, 5), (3, 5), (3, 5))]
    thick = build_lattice((5, 5, 5), defects=[DefectSpec("primal", block)])
    assert not thick.non_fault_tolerant
    assert {thick.qubits[q] for q in thick.z_measured} >= {(4, 4, 3), (4, 3, 4), (3, 4, 4)}


@pytest.mark.parametrize(
    "cells",
    [
        [(1, 1, 1), (2, 2, 2)],  # mixed cell types
        [(1, 1, 1), (5, 5, 5)],  # not face-connected
        [(99, 1, 1)],  # outside
    ],
)
def test_bad_defects_rejected(cells):
    with pytest.raises(LatticeError):
        build_lattice((3, 3, 3), defects=[DefectSpec("primal", cells)])


def test_overlapping_defects_rejected():
    d = DefectSpec("primal", [(3, 3, 3)])
    with pytest.raises(LatticeError):
        build_lattice((3, 3, 3), defects=[d, d])


def test_json_round_trip_is_byte_identical():
    bounds = Boundaries.from_mapping({"y-": "dual", "z+": "dual"})
    l = build_lattice((4, 3, 5), bounds, [DefectSpec("dual", [(4, 4, z) for z in (2, 4, 6)])])
    again = lattice_from_json(l.to_json())
    assert again.to_json() == l.to_json()
    assert again.qubits == l.qubits and again.neighbors == l.neighbors
    assert build_lattice((4, 3, 5), bounds, l.defects).edges == l.edges


@pytest.mark.parametrize("text", ["{", "[]", '{"extents": [1, 1]}', '{"extents": [0, 1, 1]}', '{"extents": [2,2,2], "defects": [{"parity": "primal", "runs": [[1, 1]]}]}'])
def test_malformed_lattice_json(text):
    with pytest.raises(LatticeError):
        lattice_from_json(text)
