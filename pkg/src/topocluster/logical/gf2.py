"""Dense GF(2) linear algebra on numpy bool arrays."""

from __future__ import annotations

import numpy as np


def row_reduce(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` (copied) and its pivot columns."""
    m = np.array(a, dtype=bool, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(m[r:, c])
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray) -> int:
    return len(row_reduce(a)[1])


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of ``a x = b`` over GF(2) (free variables zero), or None."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool).reshape(-1, 1)
    aug, pivots = row_reduce(np.hstack([a, b]))
    n = a.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=bool)
    for r, c in enumerate(pivots):
        x[c] = aug[r, n]
    return x


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of the kernel of ``a`` as rows."""
    a = np.asarray(a, dtype=bool)
    n = a.shape[1]
    red, pivots = row_reduce(a)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=bool)
    for k, f in enumerate(free):
        basis[k, f] = True
        for r, c in enumerate(pivots):
            if red[r, f]:
                basis[k, c] = True
    return basis


def in_span(rows: np.ndarray, v: np.ndarray) -> bool:
    rows = np.asarray(rows, dtype=bool)
    if rows.size == 0:
        return not np.asarray(v, dtype=bool).any()
    return rank(np.vstack([rows, v])) == rank(rows)
