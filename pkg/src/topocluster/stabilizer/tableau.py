"""Binary-symplectic stabilizer tableau (destabilizer form) with dynamic qubits.

Qubits are addressed by arbitrary hashable labels. A qubit that has been
measured can be discarded, which frees its column so that sweeps through a
large cluster only ever hold a few slices in memory.

Row slot ``k`` holds destabilizer ``k`` in ``x[k], z[k]`` and the paired
stabilizer in ``x[cap + k], z[cap + k]``. Unused rows and columns are zero.
"""

from __future__ import annotations

from typing import Hashable, Iterable

import numpy as np

from .pauli import PauliOperator


class MeasurementConflict(RuntimeError):
    """A forced outcome contradicts a deterministic measurement."""


def _g_vec(x1, z1, x2, z2) -> np.ndarray:
    # powers of i from multiplying row 1 into each row 2, summed per row
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    g = np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )
    return g.sum(axis=-1, dtype=np.int64)


class Tableau:
    """Pure stabilizer state on a growing/shrinking set of labelled qubits."""

    def __init__(self, capacity: int = 16):
        cap = max(1, int(capacity))
        self._cap = cap
        self.x = np.zeros((2 * cap, cap), dtype=bool)
        self.z = np.zeros((2 * cap, cap), dtype=bool)
        self.r = np.zeros(2 * cap, dtype=bool)
        self._col: dict[Hashable, int] = {}
        self._free_cols = list(range(cap - 1, -1, -1))
        self._free_slots = list(range(cap - 1, -1, -1))
        self._slot_of_col: dict[int, int] = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def plus_state(cls, labels: Iterable[Hashable]) -> Tableau:
        labels = list(labels)
        t = cls(capacity=max(1, len(labels)))
        for q in labels:
            t.add_qubit(q)
        return t

    @property
    def labels(self) -> list[Hashable]:
        return list(self._col)

    @property
    def n(self) -> int:
        return len(self._col)

    def __contains__(self, label: Hashable) -> bool:
        return label in self._col

    def _grow(self) -> None:
        old = self._cap
        cap = 2 * old
        x = np.zeros((2 * cap, cap), dtype=bool)
        z = np.zeros((2 * cap, cap), dtype=bool)
        r = np.zeros(2 * cap, dtype=bool)
        x[:old, :old] = self.x[:old]
        z[:old, :old] = self.z[:old]
        r[:old] = self.r[:old]
        x[cap : cap + old, :old] = self.x[old:]
        z[cap : cap + old, :old] = self.z[old:]
        r[cap : cap + old] = self.r[old:]
        self.x, self.z, self.r, self._cap = x, z, r, cap
        self._free_cols = list(range(cap - 1, old - 1, -1)) + self._free_cols
        self._free_slots = list(range(cap - 1, old - 1, -1)) + self._free_slots

    def add_qubit(self, label: Hashable, state: str = "+") -> None:
        """Append a fresh qubit in ``|+>`` (default) or ``|0>``."""
        if label in self._col:
            raise ValueError(f"qubit {label!r} already present")
        if not self._free_cols:
            self._grow()
        c = self._free_cols.pop()
        k = self._free_slots.pop()
        s = self._cap + k
        if state == "+":
            self.x[s, c] = True
            self.z[k, c] = True
        elif state == "0":
            self.z[s, c] = True
            self.x[k, c] = True
        else:
            raise ValueError(f"unsupported initial state {state!r}")
        self._col[label] = c

    def _c(self, label: Hashable) -> int:
        try:
            return self._col[label]
        except KeyError:
            raise KeyError(f"qubit {label!r} not in tableau") from None

    # -- gates ----------------------------------------------------------------

    def h(self, a: Hashable) -> None:
        c = self._c(a)
        self.r ^= self.x[:, c] & self.z[:, c]
        xa = self.x[:, c].copy()
        self.x[:, c] = self.z[:, c]
        self.z[:, c] = xa

    def s(self, a: Hashable) -> None:
        c = self._c(a)
        self.r ^= self.x[:, c] & self.z[:, c]
        self.z[:, c] ^= self.x[:, c]

    def cz(self, a: Hashable, b: Hashable) -> None:
        ca, cb = self._c(a), self._c(b)
        if ca == cb:
            raise ValueError("CZ needs two distinct qubits")
        xa, xb = self.x[:, ca], self.x[:, cb]
        self.r ^= xa & xb & (self.z[:, ca] ^ self.z[:, cb])
        self.z[:, ca] ^= xb
        self.z[:, cb] ^= xa

    def cx(self, control: Hashable, target: Hashable) -> None:
        self.h(target)
        self.cz(control, target)
        self.h(target)

    def apply_pauli(self, p: PauliOperator) -> None:
        """Conjugate the state by a Pauli: flips signs of anticommuting rows."""
        xs, zs = self._vectors(p)
        anti = ((self.x & zs) ^ (self.z & xs)).sum(axis=1) % 2 == 1
        self.r ^= anti

    # -- row arithmetic ---------------------------------------------------------

    def _rowsum_many(self, targets: np.ndarray, src: int) -> None:
        """rows[targets] <- rows[src] * rows[targets] with phase tracking."""
        if targets.size == 0:
            return
        xs, zs = self.x[src], self.z[src]
        g = _g_vec(xs[None, :], zs[None, :], self.x[targets], self.z[targets])
        tot = (g + 2 * self.r[targets] + 2 * int(self.r[src])) % 4
        self.r[targets] = tot == 2
        self.x[targets] ^= xs
        self.z[targets] ^= zs

    @staticmethod
    def _mult_into(acc, row_x, row_z, row_r):
        ax, az, ar = acc
        g = int(_g_vec(row_x, row_z, ax, az))
        tot = (g + 2 * ar + 2 * int(row_r)) % 4
        if tot % 2:
            raise ArithmeticError("product of stabilizer rows is not Hermitian")
        return ax ^ row_x, az ^ row_z, int(tot == 2)

    # -- measurement --------------------------------------------------------------

    def measure(
        self,
        a: Hashable,
        basis: str = "Z",
        *,
        forced: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> tuple[int, bool]:
        """Measure qubit ``a`` in basis X, Y or Z.

        Returns ``(outcome, deterministic)`` with outcome 0 for the +1 eigenvalue.
        Random outcomes use ``forced`` when given, else ``rng`` (default 0).
        """
        basis = basis.upper()
        if basis == "X":
            self.h(a)
            try:
                return self._measure_z(a, forced, rng)
            finally:
                self.h(a)
        if basis == "Y":
            # S^dag H maps Y to Z: apply S three times then H
            for _ in range(3):
                self.s(a)
            self.h(a)
            try:
                return self._measure_z(a, forced, rng)
            finally:
                self.h(a)
                self.s(a)
        if basis != "Z":
            raise ValueError(f"unknown basis {basis!r}")
        return self._measure_z(a, forced, rng)

    def _measure_z(self, a, forced, rng) -> tuple[int, bool]:
        c = self._c(a)
        cap = self._cap
        stab_hits = np.nonzero(self.x[cap:, c])[0]
        if stab_hits.size:
            p = cap + int(stab_hits[0])
            k = p - cap
            hits = np.nonzero(self.x[:, c])[0]
            hits = hits[(hits != p) & (hits != k)]
            self._rowsum_many(hits, p)
            # destabilizer k must still anticommute with the new stabilizer
            self.x[k] = self.x[p]
            self.z[k] = self.z[p]
            self.r[k] = self.r[p]
            self.x[p] = False
            self.z[p] = False
            self.z[p, c] = True
            if forced is not None:
                outcome = int(forced) & 1
            elif rng is not None:
                outcome = int(rng.integers(2))
            else:
                outcome = 0
            self.r[p] = bool(outcome)
            return outcome, False
        outcome = self._deterministic_sign(self.x[:cap, c])
        if forced is not None and (int(forced) & 1) != outcome:
            raise MeasurementConflict(
                f"forced outcome {forced} contradicts deterministic outcome {outcome} on {a!r}"
            )
        return outcome, True

    def _deterministic_sign(self, select: np.ndarray) -> int:
        cap = self._cap
        acc = (np.zeros(cap, dtype=bool), np.zeros(cap, dtype=bool), 0)
        for k in np.nonzero(select)[0]:
            s = cap + int(k)
            acc = self._mult_into(acc, self.x[s], self.z[s], self.r[s])
        return int(acc[2])

    def discard(self, a: Hashable, basis: str) -> None:
        """Remove qubit ``a``, which must be in an eigenstate of ``basis`` (X or Z)."""
        basis = basis.upper()
        if basis == "X":
            self.h(a)
        elif basis != "Z":
            raise ValueError("discard supports bases X and Z")
        c = self._c(a)
        cap = self._cap
        t_slots = np.nonzero(self.x[:cap, c])[0]
        if t_slots.size == 0:
            raise ValueError(f"qubit {a!r} is not in a {basis} eigenstate")
        k0 = int(t_slots[0])
        p0 = cap + k0
        others = t_slots[1:]
        if others.size:
            for k in others:
                self._rowsum_many(np.array([p0]), cap + int(k))
            self.x[others] ^= self.x[k0]
            self.z[others] ^= self.z[k0]
        row_x = self.x[p0].copy()
        row_z = self.z[p0].copy()
        row_z[c] = False
        if row_x.any() or row_z.any() or not self.z[p0, c]:
            raise ValueError(f"qubit {a!r} is not in a {basis} eigenstate")
        stab_rows = cap + np.nonzero(self.z[cap:, c])[0]
        stab_rows = stab_rows[stab_rows != p0]
        self._rowsum_many(stab_rows, p0)
        self.x[:, c] = False
        self.z[:, c] = False
        self.x[k0] = False
        self.z[k0] = False
        self.r[k0] = False
        self.x[p0] = False
        self.z[p0] = False
        self.r[p0] = False
        del self._col[a]
        self._free_cols.append(c)
        self._free_slots.append(k0)

    # -- queries --------------------------------------------------------------------

    def _vectors(self, p: PauliOperator) -> tuple[np.ndarray, np.ndarray]:
        xs = np.zeros(self._cap, dtype=bool)
        zs = np.zeros(self._cap, dtype=bool)
        for site, letter in p.letters.items():
            c = self._c(site)
            xs[c] = letter in "XY"
            zs[c] = letter in "YZ"
        return xs, zs

    def verify_eigenoperator(self, p: PauliOperator) -> int | None:
        """+1 or -1 if ``p`` (up to that sign) stabilizes the state, else ``None``."""
        if not p.is_hermitian:
            raise ValueError("operator must be Hermitian")
        cap = self._cap
        xs, zs = self._vectors(p)
        anti = ((self.x & zs) ^ (self.z & xs)).sum(axis=1) % 2 == 1
        if anti[cap:].any():
            return None
        # p = +-prod of the stabilizers whose destabilizers anticommute with p
        acc = (np.zeros(cap, dtype=bool), np.zeros(cap, dtype=bool), 0)
        for k in np.nonzero(anti[:cap])[0]:
            s = cap + int(k)
            acc = self._mult_into(acc, self.x[s], self.z[s], self.r[s])
        ax, az, ar = acc
        if not (np.array_equal(ax, xs) and np.array_equal(az, zs)):
            return None
        prod_sign = -1 if ar else 1
        return prod_sign * p.sign

    def stabilizers(self) -> list[PauliOperator]:
        inv = {c: lab for lab, c in self._col.items()}
        cap = self._cap
        out = []
        for k in range(cap):
            s = cap + k
            if not (self.x[s].any() or self.z[s].any()):
                continue
            letters = {}
            for c in np.nonzero(self.x[s] | self.z[s])[0]:
                letters[inv[int(c)]] = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[
                    (int(self.x[s, c]), int(self.z[s, c]))
                ]
            out.append(PauliOperator(letters, -1 if self.r[s] else 1))
        return out

    def copy(self) -> Tableau:
        t = Tableau.__new__(Tableau)
        t._cap = self._cap
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        t._col = dict(self._col)
        t._free_cols = list(self._free_cols)
        t._free_slots = list(self._free_slots)
        t._slot_of_col = {}
        return t
