import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topocluster.decoder import (
    build_match_graph,
    cell_graph,
    decode,
    decode_stream,
    is_cleared,
    min_weight_matching,
    residual,
)
from topocluster.experiment import membrane_qubits, memory_lattice
from topocluster.lattice import Boundaries, Parity, build_lattice
from topocluster.matching import MatchingError, brute_force_min_weight, min_weight_perfect_matching
from topocluster.noise import FlipPattern
from topocluster.syndrome import Syndrome, extract_syndrome

CUBE = build_lattice((4, 4, 4))
CLOSED = build_lattice((12, 3, 3), Boundaries.uniform("dual"))  # no primal boundary


def primal(*cells):
    return Syndrome("primal", {tuple(2 * v + 1 for v in c) for c in cells})


def exhaustive(n, edges):
    best = float("inf")

    def go(left, acc):
        nonlocal best
        if not left:
            best = min(best, acc)
            return
        a, rest = left[0], left[1:]
        for i, b in enumerate(rest):
            w = edges.get((a, b))
            if w is not None:
                go(rest[:i] + rest[i + 1 :], acc + w)

    go(list(range(n)), 0)
    return best


def test_cell_cell_weight_is_manhattan_in_cells():
    g = build_match_graph(CUBE, primal((0, 0, 0), (2, 1, 0)))
    assert g.edges[(0, 1)] == 3


def test_boundary_adjacent_cell_has_boundary_weight_one():
    g = build_match_graph(CUBE, primal((0, 1, 1)))
    assert [v.kind for v in g.vertices] == ["cell", "boundary"]
    assert g.edges == {(0, 1): 1}
    g2 = build_match_graph(CUBE, primal((1, 1, 1), (2, 2, 1)))
    assert g2.edges[(0, 2)] == 2 and g2.edges[(2, 3)] == 0


def test_empty_syndrome():
    g = build_match_graph(CUBE, Syndrome("primal", set()))
    assert g.n == 0 and min_weight_matching(g).pairs == ()
    assert decode(CUBE, Syndrome("primal", set())).flips == FlipPattern()


def test_two_cells_pair_at_their_distance():
    m = min_weight_matching(build_match_graph(CLOSED, primal((2, 0, 0), (5, 1, 0))))
    assert m.pairs == ((0, 1),) and m.total_weight == 4


def test_forced_optimum_in_a_line():
    g = build_match_graph(CLOSED, primal((0, 1, 1), (1, 1, 1), (10, 1, 1), (11, 1, 1)))
    m = min_weight_matching(g)
    assert m.pairs == ((0, 1), (2, 3)) and m.total_weight == 2


def test_dp_oracle_agrees_with_plain_enumeration():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = 2 * int(rng.integers(1, 5))
        edges = {(a, b): int(rng.integers(0, 9)) for a, b in itertools.combinations(range(n), 2) if rng.random() < 0.7}
        assert brute_force_min_weight(n, edges) == exhaustive(n, edges)


def random_syndrome(rng, l, parity):
    cells = [c.cell for c in l.checks(parity)]
    k = int(rng.integers(1, 11))
    pick = rng.choice(len(cells), size=min(k, len(cells)), replace=False)
    return Syndrome(parity, {cells[i] for i in pick})


def random_lattices(rng):
    ext = tuple(int(v) for v in rng.integers(2, 6, size=3))
    bounds = Boundaries(*(Parity.PRIMAL if rng.random() < 0.5 else Parity.DUAL for _ in range(6)))
    return build_lattice(ext, bounds)


@pytest.mark.parametrize("prune", [False, True])
def test_matching_is_optimal_on_random_decoder_graphs(prune):
    rng = np.random.default_rng(17 + prune)
    done = 0
    while done < 150:
        l = random_lattices(rng)
        parity = Parity.PRIMAL if rng.random() < 0.5 else Parity.DUAL
        s = random_syndrome(rng, l, parity)
        g = build_match_graph(l, s, prune=prune)
        if g.n % 2 or g.n > 20:
            continue
        full = build_match_graph(l, s)
        m = min_weight_matching(g)
        assert m.total_weight == brute_force_min_weight(full.n, full.edges)
        assert extract_syndrome(l, decode(l, s, prune=prune).flips, parity) == s
        done += 1


def test_correction_clears_the_syndrome():
    rng = np.random.default_rng(5)
    for _ in range(60):
        l = random_lattices(rng)
        f = FlipPattern.from_array(rng.random(l.n_qubits) < 0.05)
        for p in Parity:
            corr = decode(l, extract_syndrome(l, f, p))
            assert is_cleared(l, f, corr)


def test_neighbours_sharing_a_face_flip_just_that_face():
    corr = decode(CUBE, primal((1, 1, 1), (2, 1, 1)))
    assert corr.flips == FlipPattern.from_coords(CUBE, [(4, 3, 3)])


@pytest.mark.parametrize(
    "l",
    [CUBE, build_lattice((3, 3, 3), Boundaries.from_mapping({"x-": "dual", "y+": "dual", "z-": "dual"}))],
)
def test_every_single_flip_is_corrected_exactly(l):
    for q in range(l.n_qubits):
        p = l.qubit_class(q).parity
        f = FlipPattern(frozenset({q}))
        s = extract_syndrome(l, f, p)
        res = residual(l, f, decode(l, s))
        cg = cell_graph(l, p)
        exits = [set(cg.exits[cg.index[c]]) for c in s.odd_cells]
        if len(exits) == 1 and len(exits[0]) > 1:
            # a lone odd cell with several boundary faces cannot tell which one
            # flipped; the residual is then a boundary-hugging pair of them
            assert res == FlipPattern() or (len(res) == 2 and res.qubits <= exits[0])
        else:
            assert res == FlipPattern(), l.qubits[q]


def test_path_avoids_defect_interior():
    from topocluster.lattice import DefectSpec

    l = build_lattice((7, 5, 3), Boundaries.uniform("dual"), [DefectSpec("primal", [(7, y, 3) for y in (3, 5, 7)])])
    # two cells on either side of the defect wall
    s = Syndrome("primal", {(5, 5, 3), (9, 5, 3)})
    corr = decode(l, s)
    assert not corr.flips.qubits & set(l.z_measured)
    assert not extract_syndrome(l, corr.flips, "primal") ^ s


class TestStream:
    l = build_lattice((3, 3, 8), Boundaries.uniform("dual"))

    def syn(self, *cells):
        return Syndrome("primal", {tuple(2 * v + 1 for v in c) for c in cells})

    def test_nothing_committed_when_window_covers_everything(self):
        r = decode_stream(self.l, self.syn((0, 0, 1), (0, 0, 2)), t=3, t_c=3)
        assert r.correction.flips == FlipPattern() and r.pending == {(1, 1, 3), (1, 1, 5)}

    def test_early_errors_match_batch_decoding(self):
        s = self.syn((0, 0, 0), (0, 1, 0), (2, 2, 1), (2, 2, 2))
        r = decode_stream(self.l, s, t=7, t_c=2)
        assert r.correction == decode(self.l, s) and not r.pending

    def test_straddling_pair_is_committed(self):
        s = self.syn((1, 1, 3), (1, 1, 6))
        r = decode_stream(self.l, s, t=7, t_c=3)
        assert len(r.correction.flips) == 3 and not r.pending

    def test_odd_cells_after_t_are_ignored(self):
        r = decode_stream(self.l, self.syn((0, 0, 1), (0, 0, 2), (1, 1, 7)), t=5, t_c=0)
        assert len(r.correction.flips) == 1


def test_matcher_rejects_odd_or_unmatchable_graphs():
    with pytest.raises(MatchingError):
        min_weight_perfect_matching(3, {(0, 1): 1, (1, 2): 1})
    with pytest.raises(MatchingError):
        min_weight_perfect_matching(4, {(0, 1): 1, (1, 2): 1, (1, 3): 1})


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda k: st.dictionaries(
    st.tuples(st.integers(0, 2 * k - 1), st.integers(0, 2 * k - 1)).filter(lambda e: e[0] < e[1]),
    st.integers(0, 12), min_size=1).map(lambda e: (2 * k, e))))
def test_matcher_equals_dp_oracle(case):
    n, edges = case
    best = brute_force_min_weight(n, edges)
    if best == float("inf"):
        with pytest.raises(MatchingError):
            min_weight_perfect_matching(n, edges)
        return
    pairs = min_weight_perfect_matching(n, edges)
    assert sorted(v for p in pairs for v in p) == list(range(n))
    assert sum(edges[p] for p in pairs) == best


def test_success_probability_does_not_increase_with_error_weight():
    l = memory_lattice(5)
    membrane = membrane_qubits(l)
    primal_q = np.array([q for q in range(l.n_qubits) if l.qubit_class(q).parity is Parity.PRIMAL])
    rng = np.random.default_rng(8)
    n = 300
    rates = []
    for w in range(1, 9):
        ok = 0
        for _ in range(n):
            f = np.zeros(l.n_qubits, dtype=bool)
            f[rng.choice(primal_q, size=w, replace=False)] = True
            corr = decode(l, extract_syndrome(l, f, "primal"))
            res = residual(l, f, corr).to_array(l.n_qubits)
            ok += np.count_nonzero(res & membrane) % 2 == 0
        rates.append(ok / n)
    for a, b in zip(rates, rates[1:]):
        sigma = np.sqrt(max(a * (1 - a), 1 / n) / n + max(b * (1 - b), 1 / n) / n)
        assert b <= a + 3 * sigma, rates
    assert rates[0] == 1.0
