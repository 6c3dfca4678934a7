import shutil

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_state
from rcsaudit.components import pair_key
from rcsaudit.exceptions import ChecksumError, MissingAmplitudesError, ParseError
from rcsaudit.ingest import (
    FIXTURE_ENV,
    attach_amplitudes,
    canonical_csv,
    circuit_to_json,
    load_fixtures,
    parse_amplitudes,
    parse_circuit,
    parse_colors,
    parse_component_table,
    parse_key_values,
    parse_legend,
    parse_samples,
    parse_two_gate_table,
    serialize_amplitudes,
    serialize_component_table,
    serialize_samples,
    serialize_two_gate_table,
)
from rcsaudit.simulator import sample_with_fidelity, simulate_ideal

HEADER = "qubit,q01_pct,q10_pct,e1_sim_pct,n_ins\n"


def test_component_row_units():
    t = parse_component_table(HEADER + "q0_5,0.50,2.78,0.25,38\n")
    ro = t.readout["q0_5"]
    assert (ro.q01, ro.q10) == pytest.approx((0.005, 0.0278))
    assert t.one_gate["q0_5"] == pytest.approx(0.0025)
    assert t.insertion_order["q0_5"] == 38


def test_component_empty_body_and_comments():
    t = parse_component_table("# a comment\n" + HEADER)
    assert t.readout == {} and t.one_gate == {}


def test_component_errors_report_line():
    with pytest.raises(ParseError, match=":3:.*probability"):
        parse_component_table(HEADER + "a,1,1,1,1\nb,120,1,1,2\n", "t.csv")
    with pytest.raises(ParseError, match="duplicate qubit"):
        parse_component_table(HEADER + "a,1,1,1,1\na,1,1,1,2\n")
    with pytest.raises(ParseError, match="expected 5 fields"):
        parse_component_table(HEADER + "a,1,1\n")
    with pytest.raises(ParseError, match="not a number"):
        parse_component_table(HEADER + "a,x,1,1,1\n")
    with pytest.raises(ParseError, match="header"):
        parse_component_table("qubit,q01,q10\n")
    with pytest.raises(ParseError, match="n_ins"):
        parse_component_table(HEADER + "a,1,1,1,0\n")


def test_missing_one_gate_is_flagged():
    t = parse_component_table(HEADER + "a,1,1,,1\nb,1,1,0.1,2\n")
    assert t.missing_one_gate == {"a"}
    assert "a" not in t.one_gate


def test_two_gate_table():
    pairs = parse_two_gate_table("qubit1,qubit2,e2_pct_per_mille\nq0_5,q0_6,9.54\n")
    assert pairs[pair_key("q0_6", "q0_5")] == pytest.approx(0.00954)
    with pytest.raises(ParseError, match="duplicate pair"):
        parse_two_gate_table("qubit1,qubit2,e2_pct_per_mille\na,b,1\nb,a,2\n")
    with pytest.raises(ParseError, match="self-pair"):
        parse_two_gate_table("qubit1,qubit2,e2_pct_per_mille\na,a,1\n")


def test_samples_and_amplitudes():
    s = parse_samples("0101\n1010\n", n=4)
    assert len(s) == 2 and s.as_strings() == ["0101", "1010"]
    with pytest.raises(ParseError, match="length 3"):
        parse_samples("0101\n101\n", n=4)
    with pytest.raises(ParseError, match="non-binary"):
        parse_samples("0121\n")
    with pytest.raises(ParseError, match="negative"):
        parse_amplitudes("bitstring,probability\n01,-0.1\n")
    amps = parse_amplitudes("bitstring,probability\n0101,0.1\n1010,0.2\n")
    assert list(attach_amplitudes(s, amps).ideal_probs) == [0.1, 0.2]
    with pytest.raises(MissingAmplitudesError, match="1010"):
        attach_amplitudes(parse_samples("0101\n1010\n"), {"0101": 0.1})


def test_sample_and_amplitude_round_trip():
    _, state = random_state(5, 3, seed=1)
    s = sample_with_fidelity(state, 0.7, 300, seed=2)
    back = parse_samples(serialize_samples(s))
    assert np.array_equal(back.bitstrings, s.bitstrings)
    back = attach_amplitudes(back, parse_amplitudes(serialize_amplitudes(s)))
    assert np.array_equal(back.ideal_probs, s.ideal_probs)


def test_circuit_json_round_trip():
    circuit, state = random_state(4, 3, seed=5)
    again = parse_circuit(circuit_to_json(circuit))
    assert again.qubits == circuit.qubits and again.depth == 3
    assert np.allclose(simulate_ideal(again).amplitudes, state.amplitudes, atol=1e-14)
    with pytest.raises(ParseError):
        parse_circuit("{not json")


def test_legend_and_colors():
    legend = parse_legend("# scale=log\nvalue,r,g,b\n0.001,0,0,0\n0.01,255,255,255\n", density=1)
    assert legend.value_scale == "log" and len(legend.anchors) == 2
    with pytest.raises(ParseError):
        parse_legend("value,r,g,b\n0.01,0,0,0\n0.001,1,1,1\n")
    with pytest.raises(ParseError, match="duplicate gate"):
        parse_colors("gate_id,r,g,b\na,1,2,3\na,1,2,3\n")
    with pytest.raises(ParseError):
        parse_colors("gate_id,r,g,b\na,1,2,300\n")


def test_key_values():
    assert parse_key_values("# c\nn = 4\nphi=0.5\n") == {"n": "4", "phi": "0.5"}
    with pytest.raises(ParseError, match="line 1:"):
        parse_key_values("oops\n")


def test_fixture_counts(corpus):
    assert len(corpus["table1"].rows) == 53
    assert len(corpus["table6"].rows) == 36
    assert len(corpus["two_gate"].rows) == 86
    assert corpus["table1"].format_tag == "component_table"
    with pytest.raises(KeyError):
        corpus["table9"]


def test_fixture_citations(corpus):
    for name in corpus.names():
        assert corpus[name].source_citation


def test_fixture_values_are_single_scaled(corpus):
    for readout in ("reported", "relfreq"):
        t = corpus.component_table(readout)
        values = [v for ro in t.readout.values() for v in (ro.q01, ro.q10)]
        values += list(t.one_gate.values()) + list(t.two_gate.values())
        assert max(values) <= 0.2 and min(values) >= 0


@pytest.mark.parametrize("name", ["table1", "table1_relfreq"])
def test_component_fixture_round_trip(corpus, name):
    text = corpus[name].text
    assert serialize_component_table(parse_component_table(text)) == canonical_csv(text)


def test_two_gate_fixture_round_trip(corpus):
    text = corpus["two_gate"].text
    assert serialize_two_gate_table(parse_two_gate_table(text), corpus.couplers()) == canonical_csv(text)


@given(st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100), st.integers(1, 99)), min_size=1, max_size=10))
def test_component_round_trip_property(rows):
    body = "".join(f"q{i},{a:.4f},{b:.4f},,{k}\n" for i, (a, b, k) in enumerate(rows))
    text = HEADER + body
    assert serialize_component_table(parse_component_table(text)) == canonical_csv(text)


def test_checksum_mismatch_detected(tmp_path, monkeypatch, corpus):
    copy = tmp_path / "data"
    shutil.copytree(corpus.directory, copy)
    monkeypatch.setenv(FIXTURE_ENV, str(copy))
    assert len(load_fixtures()["table1"].rows) == 53
    path = copy / "table3.csv"
    path.write_text(path.read_text().replace("0.520", "0.521"))
    with pytest.raises(ChecksumError, match="table3.csv"):
        load_fixtures()
    (copy / "MANIFEST.sha256").unlink()
    with pytest.raises(ChecksumError, match="manifest"):
        load_fixtures()
