"""Asymmetric readout error and amplitude damping both pull the share of ones below one half."""

# %%
import numpy as np

from rcsaudit.components import ReadoutErrorPair
from rcsaudit.estimators import SampleSet, depth_regression, ones_statistics, predicted_ones_at_zero_depth
from rcsaudit.simulator import apply_damping, apply_readout_channel, split_seed

pair = ReadoutErrorPair(0.0225, 0.0547)
print(f"predicted share of ones for uniform bits: {predicted_ones_at_zero_depth(pair):.4f}")

# %%
rng = np.random.default_rng(1)
bits = SampleSet(5, rng.integers(0, 2, size=(20_000, 5), dtype=np.uint8))
noisy = apply_readout_channel(bits, pair, seed=2)
st = ones_statistics(noisy)
print(f"observed {st.overall:.4f}, zeros minus ones {st.zeros_minus_ones_pct:.2f}%")

# %%
# damping grows with depth, so the share of ones falls linearly at small gamma
points = []
for m, s in zip(range(4, 33, 4), split_seed(3, 8)):
    g = np.random.default_rng(s)
    raw = SampleSet(1, g.integers(0, 2, size=(20_000, 1), dtype=np.uint8))
    points.append((m, ones_statistics(apply_damping(raw, 0.01, m, seed=g)).overall))
reg = depth_regression(points)
lo, hi = reg.confidence_interval()
print(f"slope {reg.slope:.2e} per cycle, 95% CI [{lo:.2e}, {hi:.2e}], p={reg.p_value:.1e}")
