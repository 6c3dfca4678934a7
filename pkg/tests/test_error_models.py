import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcsaudit.components import CircuitSpec, ComponentErrorTable, Gate, ReadoutErrorPair, pair_key
from rcsaudit.error_models import (
    SYCAMORE_AVERAGES,
    AveragedRates,
    RefinedFactorRow,
    adjusted_patch_prediction,
    back_solve_removed,
    combine_patch_fidelities,
    deviation_estimate,
    predict_averaged,
    predict_cycle,
    predict_formula77,
    predict_refined,
    readout_survival_product,
    survival_product,
)
from rcsaudit.exceptions import MissingComponentError
from rcsaudit.ingest import load_fixtures
from rcsaudit.reports import rate_table, sycamore_circuit
from rcsaudit.sycamore import full_circuit


@pytest.fixture(scope="module")
def corpus():
    return load_fixtures()


def small_circuit():
    # q0-q1 and q2-q3 in separate patches
    layers = [
        (Gate(("a",)), Gate(("b",)), Gate(("c",)), Gate(("d",))),
        (Gate(("a", "b")), Gate(("c", "d"))),
        (Gate(("a",)), Gate(("c",))),
        (Gate(("a", "b")),),
    ]
    return CircuitSpec(["a", "b", "c", "d"], 2, layers, (frozenset("ab"), frozenset("cd")))


def table_for(circuit, e1=0.01, e2=0.02, eread=0.03):
    pairs = {tuple(g.qubits) for g in circuit.two_gates()}
    return ComponentErrorTable.uniform(circuit.qubits, pairs, e1, e2, eread)


def test_formula77_trivial_cases():
    c = small_circuit()
    assert predict_formula77(c, table_for(c, 0, 0, 0)).value == 1.0
    one = CircuitSpec(["q"])
    t = ComponentErrorTable(readout={"q": ReadoutErrorPair(0.038, 0.038)})
    assert predict_formula77(one, t).value == pytest.approx(0.962)
    assert predict_formula77(one, t).model_tag == "formula77"


def test_formula77_counts_each_gate():
    c = small_circuit()
    assert (c.g1_count, c.g2_count) == (6, 3)
    got = predict_formula77(c, table_for(c)).value
    assert got == pytest.approx(0.99**6 * 0.98**3 * 0.97**4, rel=1e-12)


def test_formula77_missing_component_names_it():
    c = small_circuit()
    t = table_for(c)
    del t.two_gate[pair_key("c", "d")]
    with pytest.raises(MissingComponentError, match="2-gate.*'c', 'd'"):
        predict_formula77(c, t)
    t = table_for(c)
    del t.readout["d"]
    with pytest.raises(MissingComponentError, match="readout"):
        predict_formula77(c, t)


def test_formula77_sycamore_53(corpus):
    circuit = sycamore_circuit(corpus, 53)
    assert (circuit.g1_count, circuit.g2_count) == (795, 301)
    got = predict_formula77(circuit, corpus.component_table()).value
    assert round(got, 4) == pytest.approx(0.0053)


def test_both_full_sequences_give_the_same_counts(corpus):
    t = corpus.component_table()
    qs = t.qubits_up_to(53)
    a = full_circuit(qs, corpus.couplers(), 14, "EFGH")
    b = full_circuit(qs, corpus.couplers(), 14, "ABCDCDAB")
    assert a.g2_count == b.g2_count == 301
    assert predict_formula77(a, t).value == pytest.approx(predict_formula77(b, t).value, rel=1e-12)


def test_factorization_over_patches():
    c = small_circuit()
    t = table_for(c)
    p1, p2 = c.patches()
    full = predict_formula77(c, t).value
    assert full == pytest.approx(predict_formula77(p1, t).value * predict_formula77(p2, t).value, abs=1e-12)


def test_uniform_rates_equal_averaged(corpus):
    circuit = sycamore_circuit(corpus, 53)
    r = SYCAMORE_AVERAGES
    t = rate_table(corpus, "avg", "avg", "avg")
    f77 = predict_formula77(circuit, t).value
    avg = predict_averaged(circuit.n, circuit.g1_count, circuit.g2_count, r).value
    assert f77 == pytest.approx(avg, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    which=st.sampled_from(["e1", "e2", "eread"]),
    base=st.floats(0.0, 0.2),
    bump=st.floats(1e-4, 0.1),
)
def test_monotone_in_each_rate(which, base, bump):
    c = small_circuit()
    rates = {"e1": 0.01, "e2": 0.02, "eread": 0.03}
    rates[which] = base
    lo = predict_formula77(c, table_for(c, **rates)).value
    rates[which] = base + bump
    hi = predict_formula77(c, table_for(c, **rates)).value
    assert hi < lo


def test_log_space_product_matches_direct():
    errors = [0.001 * (i % 7) for i in range(500)]
    direct = math.prod(1 - e for e in errors)
    assert survival_product(errors) == pytest.approx(direct, rel=1e-12)
    assert survival_product([0.5, 1.0]) == 0.0
    assert survival_product([]) == 1.0


def test_predict_averaged_examples():
    assert predict_averaged(53, 795, 301).value == pytest.approx(0.0055, abs=1e-4)
    assert predict_averaged(0, 0, 0, AveragedRates(0.5, 0.5, 0.5, 0.5)).value == 1.0
    assert round(predict_averaged(12, 0, 0).value, 3) == 0.628
    with pytest.raises(ValueError):
        predict_averaged(-1, 0, 0)


def test_predict_cycle_examples():
    assert predict_cycle(53, 301).value == pytest.approx(0.0077, abs=1e-4)
    assert predict_cycle(0, 0).value == 1.0
    assert predict_cycle(12, 0).value == pytest.approx(predict_averaged(12, 0, 0).value, abs=1e-15)


def test_deviation_estimate():
    assert deviation_estimate(53, 795, 301) == pytest.approx(0.086, abs=1e-3)
    assert deviation_estimate(53, 795, 301, rel_accuracy=0) == 0
    assert deviation_estimate(1, 0, 0) == pytest.approx(0.0076)
    with pytest.raises(ValueError):
        deviation_estimate(1, 0, 0, rel_accuracy=-0.1)


@given(
    st.integers(0, 200), st.integers(0, 200), st.integers(0, 500), st.integers(0, 500),
    st.floats(0, 2), st.floats(0, 2),
)
def test_deviation_linear_and_subadditive(n1, n2, g1, g2, r1, r2):
    d = deviation_estimate
    assert d(n1, g1, g2, rel_accuracy=r1 + r2) == pytest.approx(d(n1, g1, g2, rel_accuracy=r1) + d(n1, g1, g2, rel_accuracy=r2), abs=1e-12)
    whole = d(n1 + n2, 2 * g1, 2 * g2)
    assert whole <= d(n1, g1, g2) + d(n2, g1, g2) + 1e-12


def test_readout_survival(corpus):
    t = corpus.component_table()
    assert readout_survival_product([], t) == 1.0
    assert readout_survival_product(t.qubits_up_to(53), t) == pytest.approx(0.123, abs=5e-4)
    assert readout_survival_product(t.qubits_up_to(12), t) == pytest.approx(0.520, abs=5e-4)
    with pytest.raises(MissingComponentError):
        readout_survival_product(["nope"], t)


def test_predict_refined():
    d, g = predict_refined(RefinedFactorRow(0.700, 0.624, 0.755, 0.767, 0.816, "full", 31, 12))
    assert d.value == pytest.approx(0.330, abs=2e-3)
    assert g.value == pytest.approx(0.206, abs=2e-3)
    assert g.model_tag == "refined"
    d, g = predict_refined(RefinedFactorRow(1, 1, 1, 1, 1))
    assert d.value == g.value == 1
    _, g = predict_refined(RefinedFactorRow(0.069, 0.033, 0.485, 0.243, 0.561, "4-patch", 83, 32))
    assert g.value == pytest.approx(0.00015, abs=2e-5)
    with pytest.raises(ValueError):
        RefinedFactorRow(1.2, 1, 1)


def test_adjusted_patch_prediction():
    assert adjusted_patch_prediction(0.3862, 0).value == 0.3862
    assert adjusted_patch_prediction(0.3862, 18, 0.0062).value == pytest.approx(0.4320, abs=5e-4)
    assert adjusted_patch_prediction(0.00234, 18, 0.0062).value == pytest.approx(0.00262, abs=5e-5)


def test_adjusted_patch_back_solve_round_trip():
    a = back_solve_removed(0.3862, 0.43195)
    assert round(a) == 18
    assert adjusted_patch_prediction(0.3862, round(a)).value == pytest.approx(0.43195, abs=5e-4)


def test_adjusted_patch_clamps_and_flags():
    p = adjusted_patch_prediction(0.99, 50, 0.0062)
    assert p.clamped and p.value == 1.0 and p.raw_value > 1
    assert not adjusted_patch_prediction(0.5, 3).clamped


@given(st.floats(1e-6, 1.0), st.integers(0, 300), st.floats(0.0, 0.05))
def test_adjust_inverts_removal(pred, a, e2):
    removed = pred * (1 - e2) ** a
    got = adjusted_patch_prediction(removed, a, e2)
    assert got.raw_value == pytest.approx(pred, abs=1e-12)


def test_combine_patch_fidelities():
    assert combine_patch_fidelities(0.5832, 0.5416) == pytest.approx(0.3159, abs=5e-4)
    assert combine_patch_fidelities(1, 0.37) == 0.37
    assert combine_patch_fidelities(0.0437, 0.0669) == pytest.approx(0.0029, abs=1e-4)
    assert combine_patch_fidelities(1.1, -0.1) == pytest.approx(-0.11)


def test_circuit_validation():
    with pytest.raises(ValueError, match="unknown qubit"):
        CircuitSpec(["a"], 1, [(Gate(("b",)),)])
    with pytest.raises(ValueError, match="two gates"):
        CircuitSpec(["a", "b", "c"], 1, [(Gate(("a", "b")), Gate(("b", "c")))])
    with pytest.raises(ValueError, match="crosses"):
        CircuitSpec(["a", "b"], 1, [(Gate(("a", "b")),)], (frozenset("a"), frozenset("b")))


def test_rate_validation():
    with pytest.raises(ValueError):
        ReadoutErrorPair(1.2, 0)
    with pytest.raises(ValueError):
        AveragedRates(e1_avg=-0.1)
    with pytest.raises(ValueError):
        ComponentErrorTable(insertion_order={"a": 0})
