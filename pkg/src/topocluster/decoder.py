"""Matching decoder: odd cells are paired with each other or with the boundary,
and the measurement record is bit-flipped along a path for every pair."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .lattice import DIRECTIONS, Coord3, Lattice, Parity, shift
from .matching import min_weight_perfect_matching
from .noise import FlipPattern
from .syndrome import Syndrome, extract_syndrome, syndrome_bits


class CellGraph:
    """Checks of one parity class as nodes; X-measured qubits shared by two checks as edges."""

    def __init__(self, l: Lattice, parity: Parity | str):
        p = Parity(parity)
        self.lattice = l
        self.parity = p
        checks = l.checks(p)
        self.cells = [c.cell for c in checks]
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.coords = np.array(self.cells, dtype=np.int64).reshape(-1, 3)
        qc = l.qubit_checks(p)
        n = len(checks)
        # adjacency in fixed direction order so ties resolve as x-, x+, y-, y+, z-, z+
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.exits: list[list[int]] = [[] for _ in range(n)]
        for i, cell in enumerate(self.cells):
            for a, s in DIRECTIONS:
                face = shift(cell, a, s)
                q = l.index.get(face)
                if q is None or q in l.z_measured:
                    continue
                owners = qc[q]
                if len(owners) == 1 and owners[0] == i:
                    self.exits[i].append(q)
                elif len(owners) == 2 and i in owners:
                    j = owners[0] if owners[1] == i else owners[1]
                    self.adj[i].append((j, q))
        self.boundary_dist = self._boundary_bfs()

    @property
    def has_boundary(self) -> bool:
        return any(self.exits)

    def _boundary_bfs(self) -> np.ndarray:
        n = len(self.cells)
        dist = np.full(n, -1, dtype=np.int64)
        queue = deque()
        for i in range(n):
            if self.exits[i]:
                dist[i] = 0
                queue.append(i)
        while queue:
            i = queue.popleft()
            for j, _ in self.adj[i]:
                if dist[j] < 0:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return dist

    def boundary_weight(self, i: int) -> int:
        """Cells passed through on the way to the nearest boundary, plus one."""
        return int(self.boundary_dist[i]) + 1

    def path_to_boundary(self, i: int) -> list[int]:
        out = []
        while self.boundary_dist[i] > 0:
            for j, q in self.adj[i]:
                if self.boundary_dist[j] == self.boundary_dist[i] - 1:
                    out.append(q)
                    i = j
                    break
        out.append(self.exits[i][0])
        return out

    def shortest_path(self, i: int, j: int) -> list[int]:
        """Qubits along a breadth-first shortest path between checks ``i`` and ``j``."""
        prev: dict[int, tuple[int, int]] = {i: (-1, -1)}
        queue = deque([i])
        while queue and j not in prev:
            u = queue.popleft()
            for v, q in self.adj[u]:
                if v not in prev:
                    prev[v] = (u, q)
                    queue.append(v)
        if j not in prev:
            raise ValueError(f"no path between cells {self.cells[i]} and {self.cells[j]}")
        out = []
        while j != i:
            u, q = prev[j]
            out.append(q)
            j = u
        return out[::-1]

    def staircase_path(self, i: int, j: int) -> list[int]:
        """Straight moves along x, then y, then z; BFS detour if a step is blocked."""
        l = self.lattice
        cur = self.cells[i]
        target = self.cells[j]
        out = []
        for a in range(3):
            while cur[a] != target[a]:
                s = 1 if target[a] > cur[a] else -1
                face = shift(cur, a, s)
                nxt = shift(cur, a, 2 * s)
                q = l.index.get(face)
                if q is None or nxt not in self.index or (self.index[nxt], q) not in self.adj[self.index[cur]]:
                    return self.shortest_path(i, j)
                out.append(q)
                cur = nxt
        return out


def cell_graph(l: Lattice, parity: Parity | str) -> CellGraph:
    # memoised on the lattice object itself; hashing a lattice is not cheap
    cache = l.__dict__.setdefault("_cell_graphs", {})
    p = Parity(parity)
    if p not in cache:
        cache[p] = CellGraph(l, p)
    return cache[p]


@dataclass(frozen=True)
class MatchVertex:
    kind: str  # "cell" or "boundary"
    cell: Coord3


@dataclass
class MatchGraph:
    parity: Parity
    vertices: list[MatchVertex]
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    total_weight: int


@dataclass(frozen=True)
class Correction:
    parity: Parity
    flips: FlipPattern

    def to_text(self, l: Lattice) -> str:
        body = self.flips.to_text(l).splitlines()[1:]
        return "\n".join([f"# correction parity={self.parity.value}"] + body) + "\n"


def build_match_graph(l: Lattice, s: Syndrome, *, prune: bool = False) -> MatchGraph:
    """Odd cells plus one boundary vertex per odd cell.

    Cell-cell weight is the Manhattan distance in cells, cell-boundary weight is
    the boundary distance plus one, and boundary vertices are joined to each
    other at weight zero. With ``prune`` the graph is reduced without changing
    the optimum: a cell pair is only joined if pairing can beat sending both to
    the boundary, and two boundary vertices are only joined if their cells are.
    """
    cg = cell_graph(l, s.parity)
    cells = sorted(s.odd_cells)
    k = len(cells)
    bound = cg.has_boundary
    verts = [MatchVertex("cell", c) for c in cells]
    if bound:
        verts += [MatchVertex("boundary", c) for c in cells]
    g = MatchGraph(s.parity, verts)
    if k == 0:
        return g
    idx = np.array([cg.index[c] for c in cells], dtype=np.int64)
    xyz = cg.coords[idx] // 2
    dist = np.abs(xyz[:, None, :] - xyz[None, :, :]).sum(axis=2)
    bw = cg.boundary_dist[idx] + 1 if bound else None
    keep = np.triu(np.ones((k, k), dtype=bool), 1)
    if prune and bound:
        reach = bw > 0
        both = reach[:, None] & reach[None, :]
        keep &= ~both | (dist < bw[:, None] + bw[None, :])
    ii, jj = np.nonzero(keep)
    for a, b in zip(ii.tolist(), jj.tolist()):
        g.edges[(a, b)] = int(dist[a, b])
    if bound:
        for a in range(k):
            if bw[a] > 0:
                g.edges[(a, k + a)] = int(bw[a])
        if prune:
            for a, b in zip(ii.tolist(), jj.tolist()):
                g.edges[(k + a, k + b)] = 0
        else:
            for a in range(k):
                for b in range(a + 1, k):
                    g.edges[(k + a, k + b)] = 0
    return g


def min_weight_matching(g: MatchGraph) -> Matching:
    pairs = min_weight_perfect_matching(g.n, g.edges)
    return Matching(tuple(pairs), sum(g.edges[p] for p in pairs))


def correction_from_matching(l: Lattice, g: MatchGraph, m: Matching) -> Correction:
    cg = cell_graph(l, g.parity)
    flips: set[int] = set()
    for a, b in m.pairs:
        va, vb = g.vertices[a], g.vertices[b]
        if va.kind == "boundary" and vb.kind == "boundary":
            continue
        if vb.kind == "boundary":
            path = cg.path_to_boundary(cg.index[va.cell])
        elif va.kind == "boundary":
            path = cg.path_to_boundary(cg.index[vb.cell])
        else:
            path = cg.staircase_path(cg.index[va.cell], cg.index[vb.cell])
        flips.symmetric_difference_update(path)
    return Correction(g.parity, FlipPattern(frozenset(flips)))


def decode(l: Lattice, s: Syndrome, *, prune: bool = False) -> Correction:
    g = build_match_graph(l, s, prune=prune)
    return correction_from_matching(l, g, min_weight_matching(g))


def decode_flips(l: Lattice, flips: np.ndarray, parity: Parity | str, *, prune: bool = True) -> np.ndarray:
    """Array-in, array-out decode used by the Monte Carlo loop."""
    p = Parity(parity)
    bits = syndrome_bits(l, flips, p)
    checks = l.checks(p)
    s = Syndrome(p, frozenset(checks[i].cell for i in np.flatnonzero(bits)))
    corr = decode(l, s, prune=prune)
    return corr.flips.to_array(l.n_qubits)


def slice_of(c: Sequence[int], time_axis: int) -> int:
    """Time index of a cell, counted in whole cells."""
    return int(c[time_axis]) // 2


@dataclass(frozen=True)
class StreamResult:
    correction: Correction
    pending: frozenset[Coord3]


def decode_stream(l: Lattice, s: Syndrome, t: int, t_c: int, *, prune: bool = False) -> StreamResult:
    """Decode the odd cells seen up to slice ``t``; commit only pairs with a vertex before ``t - t_c``."""
    ta = l.time_axis
    seen = Syndrome(s.parity, frozenset(c for c in s.odd_cells if slice_of(c, ta) <= t))
    g = build_match_graph(l, seen, prune=prune)
    m = min_weight_matching(g)
    cut = t - t_c
    committed = []
    pending: set[Coord3] = set()
    for a, b in m.pairs:
        va, vb = g.vertices[a], g.vertices[b]
        if va.kind == "boundary" and vb.kind == "boundary":
            continue
        times = [slice_of(v.cell, ta) for v in (va, vb)]
        if min(times) < cut:
            committed.append((a, b))
        else:
            pending.update(v.cell for v in (va, vb) if v.kind == "cell")
    corr = correction_from_matching(l, g, Matching(tuple(committed), sum(g.edges[p] for p in committed)))
    return StreamResult(corr, frozenset(pending))


def residual(l: Lattice, f, corr: Correction) -> FlipPattern:
    base = f if isinstance(f, FlipPattern) else FlipPattern.from_array(f)
    return base ^ corr.flips


def is_cleared(l: Lattice, f, corr: Correction) -> bool:
    return not extract_syndrome(l, residual(l, f, corr), corr.parity)


__all__: Iterable[str] = [
    "CellGraph",
    "Correction",
    "MatchGraph",
    "MatchVertex",
    "Matching",
    "StreamResult",
    "build_match_graph",
    "cell_graph",
    "correction_from_matching",
    "decode",
    "decode_flips",
    "decode_stream",
    "is_cleared",
    "min_weight_matching",
    "residual",
    "slice_of",
]
