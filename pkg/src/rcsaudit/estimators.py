"""Sample-based fidelity estimators and bitstring statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .components import ReadoutErrorPair
from .exceptions import DegenerateDesignError, EmptySelectionError, MissingAmplitudesError

MLE_TOL = 1e-10


@dataclass
class SampleSet:
    """Measured bitstrings of one circuit, leftmost bit = first qubit.

    ``bitstrings`` is an ``(N, n)`` uint8 array. ``ideal_probs[i]`` is the
    ideal output probability of ``bitstrings[i]``. ``distribution`` optionally
    holds all ``2**n`` ideal probabilities (index = bitstring read as a binary
    number), which lets noise channels refresh ``ideal_probs``.
    """

    n: int
    bitstrings: np.ndarray
    ideal_probs: np.ndarray | None = None
    circuit_id: str = ""
    depth: int | None = None
    qubits: list | None = None
    distribution: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        b = np.asarray(self.bitstrings, dtype=np.uint8)
        if b.ndim == 1 and b.size == 0:
            b = b.reshape(0, self.n)
        if b.ndim != 2 or b.shape[1] != self.n:
            raise ValueError(f"bitstrings must have shape (N, {self.n}), got {b.shape}")
        if b.size and b.max() > 1:
            raise ValueError("bitstrings must contain only 0 and 1")
        self.bitstrings = b
        if self.ideal_probs is not None:
            p = np.asarray(self.ideal_probs, dtype=float)
            if p.shape != (len(b),):
                raise ValueError(f"ideal_probs has {p.size} entries for {len(b)} bitstrings")
            if np.any(p < 0):
                raise ValueError("ideal probabilities must be >= 0")
            self.ideal_probs = p
        if self.qubits is not None and len(self.qubits) != self.n:
            raise ValueError(f"{len(self.qubits)} qubit ids for n={self.n}")

    def __len__(self):
        return len(self.bitstrings)

    @property
    def indices(self) -> np.ndarray:
        """Bitstrings as integers, first qubit most significant."""
        weights = 1 << np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return self.bitstrings.astype(np.int64) @ weights

    def as_strings(self) -> list[str]:
        return ["".join("01"[v] for v in row) for row in self.bitstrings]

    def with_bitstrings(self, bitstrings: np.ndarray) -> "SampleSet":
        """Copy with new bits; ideal probabilities follow when the distribution is known."""
        out = SampleSet(
            n=self.n,
            bitstrings=bitstrings,
            circuit_id=self.circuit_id,
            depth=self.depth,
            qubits=self.qubits,
            distribution=self.distribution,
        )
        if self.distribution is not None:
            out.ideal_probs = self.distribution[out.indices]
        return out


@dataclass(frozen=True)
class FidelityEstimate:
    value: float
    estimator_tag: str
    sample_count: int
    feasible: bool = True
    stderr: float = math.nan

    def __post_init__(self):
        if self.estimator_tag not in ("xeb", "mle"):
            raise ValueError(f"unknown estimator {self.estimator_tag!r}")
        if self.estimator_tag == "mle" and self.feasible and not 0.0 <= self.value <= 1.0:
            raise ValueError("a feasible MLE must lie in [0, 1]")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class OnesStatistics:
    per_qubit: dict
    overall: float
    zeros_minus_ones_pct: float


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    slope_stderr: float
    p_value: float
    n_points: int = 0

    def confidence_interval(self, level: float = 0.95) -> tuple[float, float]:
        dof = self.n_points - 2
        half = stats.t.ppf(0.5 + level / 2, dof) * self.slope_stderr
        return self.slope - half, self.slope + half


def _scaled_probs(samples: SampleSet) -> np.ndarray:
    if samples.ideal_probs is None:
        raise MissingAmplitudesError(f"sample set {samples.circuit_id!r} has no ideal probabilities")
    if len(samples) == 0:
        raise MissingAmplitudesError(f"sample set {samples.circuit_id!r} is empty")
    return np.ldexp(samples.ideal_probs, samples.n)


def xeb_linear(samples: SampleSet) -> FidelityEstimate:
    """Linear cross-entropy fidelity ``2**n * mean(p) - 1``."""
    y = _scaled_probs(samples)
    se = float(np.std(y, ddof=1) / math.sqrt(len(y))) if len(y) > 1 else math.nan
    return FidelityEstimate(float(np.mean(y) - 1.0), "xeb", len(y), True, se)


def mle_score(phi: float, x: np.ndarray) -> float:
    """Derivative of the mixture log-likelihood, ``sum x / (1 + phi x)``."""
    # a sample with p = 0 has zero likelihood at phi = 1: its term is -inf there
    with np.errstate(divide="ignore"):
        return float(np.sum(x / (1.0 + phi * x)))


def mle_fidelity(samples: SampleSet, tol: float = MLE_TOL) -> FidelityEstimate:
    """Maximum-likelihood fidelity under ``phi * p_ideal + (1 - phi) * uniform``.

    The log-likelihood is concave in ``phi`` so the score is decreasing and
    the root is bracketed by bisection on [0, 1]. When the score does not
    change sign, the boundary maximiser is returned with ``feasible=False``.
    """
    x = _scaled_probs(samples) - 1.0
    n = len(x)
    s0 = mle_score(0.0, x)
    if s0 <= 0.0:
        return FidelityEstimate(0.0, "mle", n, False, _mle_stderr(0.0, x))
    s1 = mle_score(1.0, x)
    if s1 >= 0.0:
        return FidelityEstimate(1.0, "mle", n, False, _mle_stderr(1.0, x))
    lo, hi = 0.0, 1.0
    s_lo, s_hi = s0, s1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s = mle_score(mid, x)
        assert s_hi <= s <= s_lo, "score is not monotone: likelihood model violated"
        if s > 0.0:
            lo, s_lo = mid, s
        else:
            hi, s_hi = mid, s
    phi = 0.5 * (lo + hi)
    return FidelityEstimate(phi, "mle", n, True, _mle_stderr(phi, x))


def _mle_stderr(phi: float, x: np.ndarray) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        info = float(np.sum((x / (1.0 + phi * x)) ** 2))
    if not np.isfinite(info) or info <= 0:
        return math.nan
    return 1.0 / math.sqrt(info)


def mean_fidelity(estimates: Sequence, mode: str = "all") -> float:
    """Mean of estimates: ``all``, ``winsorized`` (clamped to [0, 1]) or
    ``restricted`` (only values already in [0, 1]; infeasible MLEs are dropped).
    """
    if len(estimates) == 0:
        raise EmptySelectionError("no estimates to average")
    values = np.array([float(e) for e in estimates])
    if mode == "all":
        return float(values.mean())
    if mode == "winsorized":
        return float(np.clip(values, 0.0, 1.0).mean())
    if mode == "restricted":
        feasible = np.array([getattr(e, "feasible", True) for e in estimates])
        keep = (values >= 0.0) & (values <= 1.0) & feasible
        if not keep.any():
            raise EmptySelectionError("no estimate lies in [0, 1]")
        return float(values[keep].mean())
    raise ValueError(f"unknown mode {mode!r}")


def ones_statistics(samples: SampleSet) -> OnesStatistics:
    if len(samples) == 0:
        raise ValueError("ones statistics need at least one bitstring")
    per = samples.bitstrings.mean(axis=0)
    ids = samples.qubits if samples.qubits is not None else range(samples.n)
    overall = float(per.mean())
    return OnesStatistics(
        {q: float(v) for q, v in zip(ids, per)}, overall, 100.0 * (1.0 - 2.0 * overall)
    )


def predicted_ones_at_zero_depth(pair: ReadoutErrorPair) -> float:
    """Expected fraction of 1's when reading uniformly prepared basis states."""
    return 0.5 + 0.5 * (pair.q01 - pair.q10)


def depth_regression(points: Iterable[tuple[float, float]]) -> RegressionResult:
    """OLS of proportion on depth with a two-sided t-test on the slope."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or len(pts) < 3:
        raise DegenerateDesignError("depth regression needs at least 3 points")
    m, y = pts[:, 0], pts[:, 1]
    if np.ptp(m) == 0:
        raise DegenerateDesignError("all points share the same depth")
    k = len(m)
    mc = m - m.mean()
    sxx = float(mc @ mc)
    slope = float(mc @ (y - y.mean()) / sxx)
    intercept = float(y.mean() - slope * m.mean())
    resid = y - (intercept + slope * m)
    rss = float(resid @ resid)
    scale = max(float(np.abs(y).max()), 1.0)
    if rss <= (1e-14 * scale) ** 2 * k:
        # exact fit
        return RegressionResult(slope, intercept, 0.0, 1.0 if abs(slope) <= 1e-15 * scale else 0.0, k)
    se = math.sqrt(rss / (k - 2) / sxx)
    t = slope / se
    p = float(2.0 * stats.t.sf(abs(t), k - 2))
    return RegressionResult(slope, intercept, se, min(max(p, 0.0), 1.0), k)
