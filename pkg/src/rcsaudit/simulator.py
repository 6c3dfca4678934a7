"""Dense state-vector simulator and noisy bitstring sampler.

The simulator is the ground-truth oracle for the estimators. Noise lives at
the sampling level: a global mixture with the uniform distribution plus
classical readout and 1->0 damping channels applied to the drawn bits.

Randomness: every randomized call takes an integer seed (or a
``numpy.random.Generator``). Independent streams for parallel tasks come from
:func:`split_seed`, i.e. ``numpy.random.SeedSequence(seed).spawn(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .components import CircuitSpec, Gate, ReadoutErrorPair, readout_pairs_for
from .estimators import SampleSet
from .exceptions import SimulationError

MAX_QUBITS = 24
UNITARY_ATOL = 1e-10
NORM_ATOL = 1e-10


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def split_seed(seed: int, k: int) -> list[np.random.SeedSequence]:
    """``k`` independent child seeds for parallel tasks."""
    return np.random.SeedSequence(seed).spawn(k)


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.size != 2**self.n:
            raise SimulationError(f"{a.size} amplitudes for n={self.n}")
        norm = float(np.vdot(a, a).real)
        if abs(norm - 1.0) > NORM_ATOL:
            raise SimulationError(f"state norm {norm} deviates from 1")
        self.amplitudes = a

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()

    def probability(self, bitstring: str) -> float:
        return float(np.abs(self.amplitudes[int(bitstring, 2)]) ** 2)


@dataclass(frozen=True)
class NoiseConfig:
    global_fidelity: float = 1.0
    readout: ReadoutErrorPair | dict | list | None = None
    damping: float = 0.0

    def __post_init__(self):
        for name in ("global_fidelity", "damping"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class RandomCircuitConfig:
    n: int
    m: int
    coupling: tuple = field(default=())
    gate_set: str = "haar"
    seed: int = 0

    def __post_init__(self):
        pairs = tuple(tuple(p) for p in self.coupling)
        for a, b in pairs:
            if a == b or not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"coupling pair {(a, b)} invalid for n={self.n}")
        object.__setattr__(self, "coupling", pairs)
        if self.gate_set != "haar":
            raise ValueError(f"unsupported gate set {self.gate_set!r}")


def line_coupling(n: int) -> tuple:
    return tuple((i, i + 1) for i in range(n - 1))


def complete_coupling(n: int) -> tuple:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def grid_coupling(rows: int, cols: int) -> tuple:
    pairs = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                pairs.append((q, q + 1))
            if r + 1 < rows:
                pairs.append((q, q + cols))
    return tuple(pairs)


def _check_unitary(m: np.ndarray, where) -> None:
    d = m.shape[0]
    if not np.allclose(m.conj().T @ m, np.eye(d), atol=UNITARY_ATOL, rtol=0):
        raise SimulationError(f"gate on {where} is not unitary")


def apply_gate(psi: np.ndarray, matrix: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    """Apply a k-qubit gate to a state tensor of shape ``(2,) * n``."""
    k = len(axes)
    u = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def simulate_ideal(circuit: CircuitSpec, init: int | str = 0) -> StateVector:
    """Exact output state of ``circuit`` from basis state ``init``.

    Axis ``i`` of the state tensor is ``circuit.qubits[i]``, so amplitude
    index bits read left to right follow measurement order.
    """
    n = circuit.n
    if n > MAX_QUBITS:
        raise SimulationError(f"n={n} exceeds the dense simulator cap of {MAX_QUBITS}")
    index = int(init, 2) if isinstance(init, str) else int(init)
    if not 0 <= index < 2**n:
        raise SimulationError(f"initial basis state {init!r} out of range")
    pos = {q: i for i, q in enumerate(circuit.qubits)}
    psi = np.zeros(2**n, dtype=complex)
    psi[index] = 1.0
    psi = psi.reshape((2,) * n) if n else psi
    for li, layer in enumerate(circuit.layers):
        for g in layer:
            if g.matrix is None:
                raise SimulationError(f"layer {li}: gate on {g.qubits} has no matrix")
            _check_unitary(g.matrix, g.qubits)
            psi = apply_gate(psi, g.matrix, tuple(pos[q] for q in g.qubits))
        norm = float(np.vdot(psi, psi).real)
        if abs(norm - 1.0) > NORM_ATOL:
            raise SimulationError(f"norm drifted to {norm} after layer {li}")
    return StateVector(n, psi.reshape(-1))


def _indices_to_bits(idx: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def sample_with_fidelity(state: StateVector, phi: float, count: int, seed=None, circuit_id: str = "") -> SampleSet:
    """Draw ``count`` bitstrings from ``phi * p_ideal + (1 - phi) * uniform``."""
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must lie in [0, 1], got {phi}")
    rng = _rng(seed)
    p = state.probabilities()
    d = p.size
    coherent = rng.random(count) < phi
    idx = rng.integers(0, d, size=count)
    k = int(coherent.sum())
    if k:
        cdf = np.cumsum(p)
        cdf[-1] = 1.0
        idx[coherent] = np.searchsorted(cdf, rng.random(k), side="right")
    return SampleSet(
        n=state.n,
        bitstrings=_indices_to_bits(idx, state.n),
        ideal_probs=p[idx],
        circuit_id=circuit_id,
        distribution=p,
    )


def apply_readout_channel(samples: SampleSet, readout, seed=None) -> SampleSet:
    """Flip each bit 0->1 with ``q01`` and 1->0 with ``q10`` of its qubit.

    ``readout`` is one :class:`ReadoutErrorPair` for all qubits, a sequence in
    bit order, or a mapping keyed by ``samples.qubits``.
    """
    rng = _rng(seed)
    ids = samples.qubits if samples.qubits is not None else list(range(samples.n))
    pairs = readout_pairs_for(ids, readout)
    q01 = np.array([p.q01 for p in pairs])
    q10 = np.array([p.q10 for p in pairs])
    bits = samples.bitstrings
    u = rng.random(bits.shape)
    flip = np.where(bits == 1, u < q10, u < q01)
    return samples.with_bitstrings(bits ^ flip.astype(np.uint8))


def apply_damping(samples: SampleSet, gamma: float, m: int, seed=None) -> SampleSet:
    """Classical decay surrogate: a 1 survives ``m`` cycles with ``(1 - gamma)**m``."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if m < 0:
        raise ValueError("m must be >= 0")
    rng = _rng(seed)
    survive = (1.0 - gamma) ** m
    bits = samples.bitstrings
    decay = (bits == 1) & (rng.random(bits.shape) >= survive)
    return samples.with_bitstrings(np.where(decay, 0, bits).astype(np.uint8))


def apply_noise(samples: SampleSet, noise: NoiseConfig, m: int, seed=None) -> SampleSet:
    """Damping then readout, as configured. The mixture weight is applied at sampling."""
    rng = _rng(seed)
    out = samples
    if noise.damping:
        out = apply_damping(out, noise.damping, m, rng)
    if noise.readout is not None:
        out = apply_readout_channel(out, noise.readout, rng)
    return out


def _random_matching(pairs: tuple, rng: np.random.Generator) -> list[tuple[int, int]]:
    order = rng.permutation(len(pairs))
    used: set = set()
    chosen = []
    for i in order:
        a, b = pairs[i]
        if a not in used and b not in used:
            chosen.append((a, b))
            used.update((a, b))
    return sorted(chosen)


def generate_random_circuit(config: RandomCircuitConfig) -> CircuitSpec:
    """Alternate Haar-random 1-gate layers and 2-gate layers on disjoint couplers.

    Each of the ``m`` cycles is one 1-gate layer on every qubit and one layer
    of Haar 4x4 gates on a random maximal matching of the coupling graph.
    """
    if config.m > 0 and not config.coupling:
        raise ValueError("2-gate layers need a nonempty coupling graph")
    rng = np.random.default_rng(config.seed)
    u2 = unitary_group(2, seed=rng)
    u4 = unitary_group(4, seed=rng)
    layers = []
    for _ in range(config.m):
        layers.append(tuple(Gate((q,), u2.rvs()) for q in range(config.n)))
        layers.append(tuple(Gate(p, u4.rvs()) for p in _random_matching(config.coupling, rng)))
    return CircuitSpec(
        qubits=list(range(config.n)),
        depth=config.m,
        layers=layers,
        name=f"rand_n{config.n}_m{config.m}_s{config.seed}",
    )
