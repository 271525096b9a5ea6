"""Sparse signed Pauli operators over arbitrary hashable sites."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping

_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of i picked up when multiplying single-qubit Paulis P1 * P2."""
    if x1 and z1:
        return z2 - x2
    if x1:
        return z2 * (2 * x2 - 1)
    if z1:
        return x2 * (1 - 2 * z2)
    return 0


class PauliOperator:
    """A Pauli product ``i**phase * (tensor of letters)`` with identities omitted.

    Hermitian operators have ``phase`` 0 or 2, i.e. a sign of +1 or -1.
    """

    __slots__ = ("_letters", "_phase")

    def __init__(self, letters: Mapping[Hashable, str] | None = None, sign: int = 1, *, phase: int | None = None):
        clean = {}
        for site, letter in (letters or {}).items():
            letter = letter.upper()
            if letter == "I":
                continue
            if letter not in _BITS:
                raise ValueError(f"unknown Pauli letter {letter!r}")
            clean[site] = letter
        self._letters = clean
        if phase is None:
            if sign not in (1, -1):
                raise ValueError("sign must be +1 or -1")
            phase = 0 if sign == 1 else 2
        self._phase = phase % 4

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls) -> PauliOperator:
        return cls()

    @classmethod
    def single(cls, site: Hashable, letter: str) -> PauliOperator:
        return cls({site: letter})

    @classmethod
    def from_sites(cls, letter: str, sites: Iterable[Hashable], sign: int = 1) -> PauliOperator:
        return cls({s: letter for s in sites}, sign)

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse a dense string such as ``'-XZI'``; sites are the positions 0, 1, ..."""
        sign = 1
        text = text.strip()
        if text[:1] in "+-":
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        return cls({i: ch for i, ch in enumerate(text)}, sign)

    # -- properties -------------------------------------------------------

    @property
    def letters(self) -> dict[Hashable, str]:
        return dict(self._letters)

    @property
    def phase(self) -> int:
        return self._phase

    @property
    def is_hermitian(self) -> bool:
        return self._phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError("operator carries a factor of i and has no real sign")
        return 1 if self._phase == 0 else -1

    @property
    def support(self) -> frozenset:
        return frozenset(self._letters)

    def x_support(self) -> frozenset:
        return frozenset(s for s, l in self._letters.items() if l in "XY")

    def z_support(self) -> frozenset:
        return frozenset(s for s, l in self._letters.items() if l in "YZ")

    def __getitem__(self, site: Hashable) -> str:
        return self._letters.get(site, "I")

    def __len__(self) -> int:
        return len(self._letters)

    # -- algebra ----------------------------------------------------------

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        letters = dict(self._letters)
        phase = self._phase + other._phase
        for site, l2 in other._letters.items():
            l1 = letters.get(site)
            if l1 is None:
                letters[site] = l2
                continue
            x1, z1 = _BITS[l1]
            x2, z2 = _BITS[l2]
            phase += _g(x1, z1, x2, z2)
            bits = (x1 ^ x2, z1 ^ z2)
            if bits == (0, 0):
                del letters[site]
            else:
                letters[site] = _LETTER[bits]
        out = PauliOperator(letters)
        out._phase = phase % 4
        return out

    def __neg__(self) -> PauliOperator:
        out = PauliOperator(self._letters)
        out._phase = (self._phase + 2) % 4
        return out

    def commutes_with(self, other: PauliOperator) -> bool:
        anti = 0
        for site, l2 in other._letters.items():
            l1 = self._letters.get(site)
            if l1 is not None and l1 != l2:
                anti ^= 1
        return anti == 0

    def restricted(self, sites: Iterable[Hashable]) -> PauliOperator:
        """Letters on ``sites`` only, sign +1."""
        keep = set(sites)
        return PauliOperator({s: l for s, l in self._letters.items() if s in keep})

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> PauliOperator:
        out = PauliOperator({mapping[s]: l for s, l in self._letters.items()})
        out._phase = self._phase
        return out

    def unsigned(self) -> PauliOperator:
        return PauliOperator(self._letters)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PauliOperator)
            and self._phase == other._phase
            and self._letters == other._letters
        )

    def __hash__(self) -> int:
        return hash((self._phase, frozenset(self._letters.items())))

    def to_string(self, sites: Iterable[Hashable] | None = None) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self._phase]
        if sites is None:
            body = " ".join(f"{l}{s}" for s, l in sorted(self._letters.items(), key=lambda kv: _sort_key(kv[0])))
            return prefix + (body or "I")
        return prefix + "".join(self[s] for s in sites)

    def __repr__(self) -> str:
        return f"PauliOperator({self.to_string()})"


def _sort_key(site):
    return (0, site) if isinstance(site, (int, tuple)) else (1, repr(site))
