"""Linear XEB vs maximum-likelihood fidelity on simulated noisy samples."""

# %%
import numpy as np

from rcsaudit.estimators import mean_fidelity, mle_fidelity, xeb_linear
from rcsaudit.simulator import (
    RandomCircuitConfig,
    complete_coupling,
    generate_random_circuit,
    sample_with_fidelity,
    simulate_ideal,
    split_seed,
)

n, m, phi, count = 10, 12, 0.3, 20_000
seeds = split_seed(2024, 8)

# %%
xs, ms = [], []
for k, s in enumerate(seeds):
    rng = np.random.default_rng(s)
    circuit = generate_random_circuit(RandomCircuitConfig(n, m, complete_coupling(n), seed=int(rng.integers(2**31))))
    state = simulate_ideal(circuit)
    # for a fixed circuit XEB targets phi * (2^n sum p^2 - 1), not phi itself
    excess = 2**n * float(np.sum(state.probabilities() ** 2)) - 1
    samples = sample_with_fidelity(state, phi, count, seed=rng, circuit_id=f"c{k}")
    x, ml = xeb_linear(samples), mle_fidelity(samples)
    xs.append(x)
    ms.append(ml)
    print(f"c{k}: excess {excess:.3f} xeb {x.value:.4f}+-{x.stderr:.4f} mle {ml.value:.4f}+-{ml.stderr:.4f}")

# %%
print(f"mean xeb {mean_fidelity(xs):.4f}  mean mle {mean_fidelity(ms):.4f}  (true {phi})")
print(f"spread xeb {np.std([x.value for x in xs]):.4f}  mle {np.std([x.value for x in ms]):.4f}")
