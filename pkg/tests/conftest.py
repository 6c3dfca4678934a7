import numpy as np
import pytest

from rcsaudit.components import CircuitSpec
from rcsaudit.ingest import load_fixtures
from rcsaudit.simulator import RandomCircuitConfig, complete_coupling, generate_random_circuit, simulate_ideal


def random_state(n: int, m: int, seed: int):
    circuit = generate_random_circuit(RandomCircuitConfig(n, m, complete_coupling(n), seed=seed))
    return circuit, simulate_ideal(circuit)


def collision_excess(state) -> float:
    """``2**n sum p**2 - 1``: the XEB expectation per unit of fidelity for this circuit."""
    p = state.probabilities()
    return float(p.size * np.sum(p**2) - 1.0)


def dense_unitary(circuit: CircuitSpec) -> np.ndarray:
    """Full 2^n x 2^n product built from Kronecker-embedded gates."""
    n = circuit.n
    pos = {q: i for i, q in enumerate(circuit.qubits)}
    total = np.eye(2**n, dtype=complex)
    for layer in circuit.layers:
        for g in layer:
            k = len(g.qubits)
            axes = [pos[q] for q in g.qubits]
            rest = [i for i in range(n) if i not in axes]
            # permute so the gate qubits lead, embed, permute back
            perm = axes + rest
            full = np.kron(g.matrix, np.eye(2 ** (n - k)))
            p = np.zeros((2**n, 2**n))
            for idx in range(2**n):
                bits = [(idx >> (n - 1 - i)) & 1 for i in range(n)]
                new = [bits[j] for j in perm]
                p[int("".join(map(str, new)), 2), idx] = 1
            total = p.T @ full @ p @ total
    return total


@pytest.fixture(scope="session")
def corpus():
    return load_fixtures()
