"""Component error tables and circuit structure shared by every module.

All probabilities here are unitless fractions. Percent and per-mille values
only exist in fixture files and are converted once, in :mod:`rcsaudit.ingest`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .exceptions import MissingComponentError

QubitId = Hashable


def _check_prob(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0 or np.isnan(value):
        raise ValueError(f"{name} must be a probability in [0, 1], got {value}")
    return value


def pair_key(a: QubitId, b: QubitId) -> frozenset:
    """Unordered key for a 2-gate coupler."""
    if a == b:
        raise ValueError(f"self-pair {a!r}-{b!r} is not a 2-gate")
    return frozenset((a, b))


@dataclass(frozen=True)
class ReadoutErrorPair:
    """Asymmetric readout error: ``q01`` reads 1 for a prepared 0, ``q10`` the reverse."""

    q01: float
    q10: float

    def __post_init__(self):
        object.__setattr__(self, "q01", _check_prob(self.q01, "q01"))
        object.__setattr__(self, "q10", _check_prob(self.q10, "q10"))

    @property
    def mean(self) -> float:
        return 0.5 * (self.q01 + self.q10)


@dataclass
class ComponentErrorTable:
    readout: dict[QubitId, ReadoutErrorPair] = field(default_factory=dict)
    one_gate: dict[QubitId, float] = field(default_factory=dict)
    two_gate: dict[frozenset, float] = field(default_factory=dict)
    insertion_order: dict[QubitId, int] = field(default_factory=dict)
    # qubits listed in the source without a 1-gate rate
    missing_one_gate: frozenset = frozenset()

    def __post_init__(self):
        for q, e in self.one_gate.items():
            _check_prob(e, f"1-gate error of {q!r}")
        for k, e in self.two_gate.items():
            if not isinstance(k, frozenset) or len(k) != 2:
                raise ValueError(f"2-gate key {k!r} must be an unordered pair of distinct qubits")
            _check_prob(e, f"2-gate error of {sorted(map(str, k))}")
        for q, n in self.insertion_order.items():
            if int(n) < 1:
                raise ValueError(f"insertion order of {q!r} must be >= 1, got {n}")

    @classmethod
    def uniform(
        cls,
        qubits: Iterable[QubitId],
        pairs: Iterable[tuple[QubitId, QubitId]],
        e1: float,
        e2: float,
        eread: float,
    ) -> "ComponentErrorTable":
        """Table with every component at the same rate (readout symmetric)."""
        qubits = list(qubits)
        ro = ReadoutErrorPair(eread, eread)
        return cls(
            readout={q: ro for q in qubits},
            one_gate={q: e1 for q in qubits},
            two_gate={pair_key(a, b): e2 for a, b in pairs},
        )

    def e1(self, q: QubitId) -> float:
        try:
            return self.one_gate[q]
        except KeyError:
            raise MissingComponentError("1-gate", q) from None

    def e2(self, a: QubitId, b: QubitId) -> float:
        try:
            return self.two_gate[pair_key(a, b)]
        except KeyError:
            raise MissingComponentError("2-gate", (a, b)) from None

    def eread(self, q: QubitId) -> float:
        try:
            return self.readout[q].mean
        except KeyError:
            raise MissingComponentError("readout", q) from None

    def qubits_up_to(self, n: int) -> list[QubitId]:
        """Qubits that belong to the n-qubit circuit, in insertion order."""
        chosen = [q for q, k in self.insertion_order.items() if k <= n]
        return sorted(chosen, key=lambda q: self.insertion_order[q])

    def replace(self, **changes) -> "ComponentErrorTable":
        data = {
            "readout": dict(self.readout),
            "one_gate": dict(self.one_gate),
            "two_gate": dict(self.two_gate),
            "insertion_order": dict(self.insertion_order),
            "missing_one_gate": self.missing_one_gate,
        }
        data.update(changes)
        return ComponentErrorTable(**data)


@dataclass(frozen=True)
class Gate:
    """A gate site. ``matrix`` is only needed for simulation."""

    qubits: tuple
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) not in (1, 2):
            raise ValueError(f"gates act on 1 or 2 qubits, got {self.qubits}")
        if len(self.qubits) == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"2-gate on a single qubit {self.qubits}")
        if self.matrix is not None:
            m = np.asarray(self.matrix, dtype=complex)
            d = 2 ** len(self.qubits)
            if m.shape != (d, d):
                raise ValueError(f"gate on {self.qubits} needs a {d}x{d} matrix, got {m.shape}")
            object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return len(self.qubits)


@dataclass
class CircuitSpec:
    """Circuit structure: qubits in measurement order and a sequence of layers.

    ``depth`` counts cycles and is metadata; gate counts always come from the
    layers themselves.
    """

    qubits: list
    depth: int = 0
    layers: list[tuple[Gate, ...]] = field(default_factory=list)
    patch_partition: tuple[frozenset, frozenset] | None = None
    name: str = ""

    def __post_init__(self):
        self.qubits = list(self.qubits)
        known = set(self.qubits)
        if len(known) != len(self.qubits):
            raise ValueError("duplicate qubit ids in circuit")
        self.layers = [tuple(layer) for layer in self.layers]
        for i, layer in enumerate(self.layers):
            used: set = set()
            for g in layer:
                for q in g.qubits:
                    if q not in known:
                        raise ValueError(f"layer {i}: gate on unknown qubit {q!r}")
                    if q in used:
                        raise ValueError(f"layer {i}: qubit {q!r} used by two gates")
                    used.add(q)
        if self.patch_partition is not None:
            a, b = (frozenset(p) for p in self.patch_partition)
            if a & b or (a | b) != known:
                raise ValueError("patch partition must split the qubits into two disjoint sets")
            for g in self.two_gates():
                x, y = g.qubits
                if (x in a) != (y in a):
                    raise ValueError(f"2-gate {g.qubits} crosses the patch boundary")
            self.patch_partition = (a, b)

    @property
    def n(self) -> int:
        return len(self.qubits)

    def one_gates(self) -> list[Gate]:
        return [g for layer in self.layers for g in layer if g.arity == 1]

    def two_gates(self) -> list[Gate]:
        return [g for layer in self.layers for g in layer if g.arity == 2]

    @property
    def g1_count(self) -> int:
        return len(self.one_gates())

    @property
    def g2_count(self) -> int:
        return len(self.two_gates())

    def restrict(self, qubits: Sequence[QubitId], name: str = "") -> "CircuitSpec":
        """Sub-circuit on ``qubits``; 2-gates leaving the set are dropped."""
        keep = set(qubits)
        layers = [tuple(g for g in layer if set(g.qubits) <= keep) for layer in self.layers]
        return CircuitSpec(
            qubits=[q for q in self.qubits if q in keep],
            depth=self.depth,
            layers=layers,
            name=name or self.name,
        )

    def patches(self) -> tuple["CircuitSpec", "CircuitSpec"]:
        if self.patch_partition is None:
            raise ValueError("circuit has no patch partition")
        a, b = self.patch_partition
        return self.restrict(a, f"{self.name}/patch1"), self.restrict(b, f"{self.name}/patch2")


def readout_pairs_for(qubits: Sequence[QubitId], readout) -> list[ReadoutErrorPair]:
    """Normalise a single pair, a sequence, or a qubit-keyed mapping to a list."""
    if isinstance(readout, ReadoutErrorPair):
        return [readout] * len(qubits)
    if isinstance(readout, Mapping):
        try:
            return [readout[q] for q in qubits]
        except KeyError as exc:
            raise MissingComponentError("readout", exc.args[0]) from None
    pairs = list(readout)
    if len(pairs) != len(qubits):
        raise ValueError(f"need {len(qubits)} readout pairs, got {len(pairs)}")
    return pairs
