"""Closed-form digital error-model fidelity predictions.

Every prediction is a product of per-component survival factors ``1 - e``.
Products with more than :data:`LOG_SPACE_THRESHOLD` factors are accumulated
in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .components import CircuitSpec, ComponentErrorTable, QubitId

LOG_SPACE_THRESHOLD = 64

MODEL_TAGS = ("formula77", "averaged", "cycle", "refined", "adjusted_patch")


@dataclass(frozen=True)
class AveragedRates:
    """Sycamore-wide average error rates (simultaneous operation)."""

    e1_avg: float = 0.0016
    e2_avg: float = 0.0062
    eread_avg: float = 0.038
    e2cycle_avg: float = 0.0093

    def __post_init__(self):
        for name in ("e1_avg", "e2_avg", "eread_avg", "e2cycle_avg"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


SYCAMORE_AVERAGES = AveragedRates()


@dataclass(frozen=True)
class FidelityPrediction:
    value: float
    model_tag: str
    inputs_digest: str = ""
    # set when the raw value fell outside [0, 1] and was clamped
    clamped: bool = False
    raw_value: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.model_tag not in MODEL_TAGS:
            raise ValueError(f"unknown model tag {self.model_tag!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"prediction {self.value} outside [0, 1]")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class RefinedFactorRow:
    """Fidelity factors of the refined discrete-error model (fractions)."""

    f_1gate: float
    f_2gate: float
    f_readout: float
    f_idle: float = 1.0
    f_prep: float = 1.0
    circuit_type: str = "full"
    n: int = 0
    m: int = 0

    def __post_init__(self):
        for name in ("f_1gate", "f_2gate", "f_readout", "f_idle", "f_prep"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.circuit_type not in ("full", "2-patch", "4-patch"):
            raise ValueError(f"unknown circuit type {self.circuit_type!r}")


def survival_product(errors: Iterable[float]) -> float:
    """``prod(1 - e)``, summed as logs once there are many factors."""
    e = np.fromiter(errors, dtype=float)
    if e.size <= LOG_SPACE_THRESHOLD:
        return float(np.prod(1.0 - e))
    with np.errstate(divide="ignore"):
        return float(np.exp(np.sum(np.log1p(-e))))


def _power(base: float, exponent: float) -> float:
    if exponent == 0:
        return 1.0
    if base == 0.0:
        return 0.0 if exponent > 0 else math.inf
    return math.exp(exponent * math.log(base))


def _check_count(name: str, v: int) -> int:
    if v < 0:
        raise ValueError(f"{name} must be >= 0, got {v}")
    return v


def gate_survival(circuit: CircuitSpec, table: ComponentErrorTable) -> float:
    """Product of 1-gate and 2-gate survival factors of ``circuit``."""
    errors = [table.e1(g.qubits[0]) for g in circuit.one_gates()]
    errors += [table.e2(*g.qubits) for g in circuit.two_gates()]
    return survival_product(errors)


def readout_survival_product(qubits: Sequence[QubitId], table: ComponentErrorTable) -> float:
    """Probability that none of ``qubits`` suffers a readout error.

    Each qubit contributes ``1 - (q01 + q10) / 2``.
    """
    return survival_product(table.eread(q) for q in qubits)


def predict_formula77(circuit: CircuitSpec, table: ComponentErrorTable) -> FidelityPrediction:
    """Digital error-model product over all 1-gates, 2-gates and measured qubits.

    Raises :class:`~rcsaudit.exceptions.MissingComponentError` naming the first
    component without a rate.
    """
    errors = [table.e1(g.qubits[0]) for g in circuit.one_gates()]
    errors += [table.e2(*g.qubits) for g in circuit.two_gates()]
    errors += [table.eread(q) for q in circuit.qubits]
    value = survival_product(errors)
    digest = f"n={circuit.n} |G1|={circuit.g1_count} |G2|={circuit.g2_count} per-component"
    return FidelityPrediction(value, "formula77", digest)


def predict_averaged(n: int, g1: int, g2: int, rates: AveragedRates = SYCAMORE_AVERAGES) -> FidelityPrediction:
    for name, v in (("n", n), ("g1", g1), ("g2", g2)):
        _check_count(name, v)
    value = (
        _power(1 - rates.e1_avg, g1)
        * _power(1 - rates.e2_avg, g2)
        * _power(1 - rates.eread_avg, n)
    )
    digest = f"n={n} g1={g1} g2={g2} e1={rates.e1_avg} e2={rates.e2_avg} eread={rates.eread_avg}"
    return FidelityPrediction(value, "averaged", digest)


def predict_cycle(n: int, g2: int, rates: AveragedRates = SYCAMORE_AVERAGES) -> FidelityPrediction:
    """1-gate errors folded into a per-2-gate "cycle" error."""
    _check_count("n", n)
    _check_count("g2", g2)
    value = _power(1 - rates.e2cycle_avg, g2) * _power(1 - rates.eread_avg, n)
    digest = f"n={n} g2={g2} e2cycle={rates.e2cycle_avg} eread={rates.eread_avg}"
    return FidelityPrediction(value, "cycle", digest)


def deviation_estimate(
    n: int,
    g1: int,
    g2: int,
    rates: AveragedRates = SYCAMORE_AVERAGES,
    rel_accuracy: float = 0.2,
) -> float:
    """Random-walk estimate of the relative deviation of the product prediction.

    Assumes unbiased, independent per-component rate estimates, each accurate
    to ``rel_accuracy``; their effect then grows like the square root of the
    component count.
    """
    if rel_accuracy < 0:
        raise ValueError("rel_accuracy must be >= 0")
    for name, v in (("n", n), ("g1", g1), ("g2", g2)):
        _check_count(name, v)
    return rel_accuracy * (
        math.sqrt(n) * rates.eread_avg + math.sqrt(g1) * rates.e1_avg + math.sqrt(g2) * rates.e2_avg
    )


def predict_refined(row: RefinedFactorRow) -> tuple[FidelityPrediction, FidelityPrediction]:
    """Return ``(D, G)``: the three-factor product and its idle/prep refinement."""
    d = row.f_1gate * row.f_2gate * row.f_readout
    g = d * row.f_idle * row.f_prep
    digest = f"{row.circuit_type} n={row.n} m={row.m}"
    return FidelityPrediction(d, "formula77", digest), FidelityPrediction(g, "refined", digest)


def adjusted_patch_prediction(pred_full: float, removed_2gates: int, e2_avg: float = 0.0062) -> FidelityPrediction:
    """Undo the survival factors of ``removed_2gates`` 2-gates.

    This extrapolates, so the raw value can exceed 1; it is then clamped and
    ``clamped`` is set.
    """
    if not 0.0 <= pred_full <= 1.0:
        raise ValueError(f"pred_full must lie in [0, 1], got {pred_full}")
    _check_count("removed_2gates", removed_2gates)
    if removed_2gates == 0 or pred_full == 0.0:
        raw = float(pred_full)
    else:
        raw = pred_full * _power(1 - e2_avg, -removed_2gates)
    value = min(max(raw, 0.0), 1.0)
    return FidelityPrediction(
        value, "adjusted_patch", f"a={removed_2gates} e2={e2_avg}", clamped=value != raw, raw_value=raw
    )


def back_solve_removed(pred_full: float, adjusted: float, e2_avg: float = 0.0062) -> float:
    """Real-valued number of removed 2-gates that maps ``pred_full`` to ``adjusted``."""
    return math.log(adjusted / pred_full) / -math.log1p(-e2_avg)


def combine_patch_fidelities(f_patch1: float, f_patch2: float) -> float:
    return float(f_patch1) * float(f_patch2)
