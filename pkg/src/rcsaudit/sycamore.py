"""Sycamore-style circuit structure: grid couplers and the A-H activation patterns.

Qubit ids follow the ``q{row}_{col}`` naming. A full circuit of depth ``m``
has ``m`` cycles, each a layer of 1-gates on every qubit followed by one
coupler pattern, and a closing layer of 1-gates, so ``|G1| = n (m + 1)``.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .components import CircuitSpec, Gate

# (column offset, vertical, stagger) of each 2-gate pattern on the grid
PATTERNS = {
    "A": (0, True, True),
    "B": (1, True, True),
    "C": (1, False, True),
    "D": (0, False, True),
    "E": (0, False, False),
    "F": (1, False, False),
    "G": (0, True, False),
    "H": (1, True, False),
}

SEQUENCES = {"ABCDCDAB": "ABCDCDAB", "EFGH": "EFGH"}

_QUBIT_RE = re.compile(r"^q(\d+)_(\d+)$")


def grid_position(qubit: str) -> tuple[int, int]:
    m = _QUBIT_RE.match(qubit)
    if not m:
        raise ValueError(f"not a grid qubit id: {qubit!r}")
    return int(m.group(1)), int(m.group(2))


def in_pattern(pair: tuple[str, str], pattern: str) -> bool:
    """Whether the coupler ``pair`` is activated by ``pattern``."""
    col_offset, vertical, stagger = PATTERNS[pattern]
    a, b = (grid_position(q) for q in pair)
    if vertical:
        a, b = (a[1], a[0]), (b[1], b[0])
    a, b = sorted((a, b))
    if a[0] != b[0] or b[1] != a[1] + 1:
        return False
    cell = (a[0] % 2, (a[1] - col_offset) % 2)
    return cell == (0, 0) or cell == (1, int(stagger))


def pattern_sequence(sequence: str, m: int) -> list[str]:
    if sequence not in SEQUENCES:
        raise ValueError(f"unknown pattern sequence {sequence!r}")
    seq = SEQUENCES[sequence]
    return [seq[i % len(seq)] for i in range(m)]


def full_circuit(
    qubits: Sequence[str],
    couplers: Iterable[tuple[str, str]],
    m: int,
    sequence: str = "EFGH",
    name: str = "",
) -> CircuitSpec:
    """Structure of a full circuit on ``qubits`` (no gate matrices)."""
    qubits = list(qubits)
    present = set(qubits)
    used = [tuple(p) for p in couplers if set(p) <= present]
    # orient pairs along measurement order for stable output
    order = {q: i for i, q in enumerate(qubits)}
    used = [tuple(sorted(p, key=order.__getitem__)) for p in used]
    layers: list[tuple[Gate, ...]] = []
    one_layer = tuple(Gate((q,)) for q in qubits)
    for pattern in pattern_sequence(sequence, m):
        layers.append(one_layer)
        layers.append(tuple(Gate(p) for p in used if in_pattern(p, pattern)))
    if m > 0:
        layers.append(one_layer)
    return CircuitSpec(qubits=qubits, depth=m, layers=layers, name=name or f"n{len(qubits)}_m{m}_p{sequence}")
