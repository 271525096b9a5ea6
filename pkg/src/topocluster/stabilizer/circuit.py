"""Plain-text circuit records: ``init q``, ``cz a b``, ``measure q basis [forced]``."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .tableau import Tableau


class CircuitFormatError(ValueError):
    pass


def _label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_circuit(text: str) -> list[tuple]:
    ops: list[tuple] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].lower()
        if head == "init" and len(tok) in (2, 3):
            state = tok[2].lower() if len(tok) == 3 else "plus"
            if state not in ("plus", "zero"):
                raise CircuitFormatError(f"line {lineno}: unknown initial state {tok[2]!r}")
            ops.append(("init", _label(tok[1]), state))
        elif head == "cz" and len(tok) == 3:
            ops.append(("cz", _label(tok[1]), _label(tok[2])))
        elif head == "measure" and len(tok) in (3, 4):
            basis = tok[2].upper()
            if basis not in ("X", "Y", "Z"):
                raise CircuitFormatError(f"line {lineno}: unknown basis {tok[2]!r}")
            forced = int(tok[3]) if len(tok) == 4 else None
            if forced not in (None, 0, 1):
                raise CircuitFormatError(f"line {lineno}: forced outcome must be 0 or 1")
            ops.append(("measure", _label(tok[1]), basis, forced))
        else:
            raise CircuitFormatError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return ops


def format_circuit(ops: Iterable[tuple]) -> str:
    lines = []
    for op in ops:
        if op[0] == "init":
            lines.append(f"init {op[1]}" + ("" if op[2] == "plus" else f" {op[2]}"))
        elif op[0] == "cz":
            lines.append(f"cz {op[1]} {op[2]}")
        else:
            lines.append(f"measure {op[1]} {op[2]}" + ("" if op[3] is None else f" {op[3]}"))
    return "\n".join(lines) + "\n"


def run_tableau(circuit, rng: np.random.Generator | None = None) -> tuple[Tableau, dict]:
    """Execute a circuit on a fresh tableau; returns it with ``{qubit: (outcome, deterministic)}``."""
    ops = parse_circuit(circuit) if isinstance(circuit, str) else list(circuit)
    t = Tableau()
    record = {}
    for op in ops:
        if op[0] == "init":
            t.add_qubit(op[1], "+" if op[2] == "plus" else "0")
        elif op[0] == "cz":
            t.cz(op[1], op[2])
        else:
            record[op[1]] = t.measure(op[1], op[2], forced=op[3], rng=rng)
    return t, record
