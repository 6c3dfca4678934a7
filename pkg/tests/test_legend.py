import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from rcsaudit.legend import (
    ColorLegend,
    RGBTriple,
    build_legend_table,
    color_at,
    extract_gate_errors,
    match_color,
    round_half_up,
)

BLACK, WHITE = RGBTriple(0, 0, 0), RGBTriple(255, 255, 255)


@pytest.fixture(scope="module")
def sycamore(corpus):
    legend = corpus.legend()
    return legend, build_legend_table(legend)


def test_sycamore_table_size(sycamore):
    legend, table = sycamore
    assert len(legend.anchors) == 13
    assert len(table) == 1201
    assert np.all(np.diff(table.values) > 0)
    assert table.values[0] == 0.0008 and table.values[-1] == 0.017


def test_density_zero_keeps_anchors():
    t = build_legend_table(ColorLegend(((0.0, BLACK), (1.0, WHITE)), 0))
    assert t.entries == [(0.0, BLACK), (1.0, WHITE)]


def test_midpoint_rounds_half_up():
    t = build_legend_table(ColorLegend(((0.0, BLACK), (1.0, WHITE)), 1))
    assert t.entries[1] == (0.5, RGBTriple(128, 128, 128))
    assert list(round_half_up([0.5, 1.5, 2.49])) == [1, 2, 2]


@given(st.integers(2, 8), st.integers(0, 30))
def test_entry_count_formula(anchors, density):
    rng = np.random.default_rng(anchors * 100 + density)
    legend = ColorLegend(tuple((float(i), RGBTriple(*rng.integers(0, 256, 3))) for i in range(anchors)), density)
    assert len(build_legend_table(legend)) == (anchors - 1) * (density + 1) + 1


def test_invalid_legends():
    with pytest.raises(ValueError):
        ColorLegend(((1.0, BLACK), (0.5, WHITE)))
    with pytest.raises(ValueError):
        ColorLegend(((1.0, BLACK),))
    with pytest.raises(ValueError):
        ColorLegend(((0.0, BLACK), (1.0, WHITE)), value_scale="log")
    with pytest.raises(ValueError):
        RGBTriple(0, 256, 0)


def test_anchor_colors_match_exactly(sycamore):
    legend, table = sycamore
    for value, color in legend.anchors:
        assert match_color(table, color) == (value, 0)


def test_round_trip_every_entry(sycamore):
    _, table = sycamore
    for value, color in table.entries:
        got, dist = match_color(table, color)
        assert got == value and dist == 0


def test_midpoint_color_gives_midpoint_value():
    legend = ColorLegend(((0.0, RGBTriple(0, 0, 0)), (1.0, RGBTriple(200, 100, 0))), 99)
    t = build_legend_table(legend)
    assert match_color(t, RGBTriple(100, 50, 0))[0] == pytest.approx(0.5)


def test_log_scale_values_are_geometric():
    legend = ColorLegend(((0.001, BLACK), (0.01, WHITE)), 1, "log")
    assert build_legend_table(legend).values[1] == pytest.approx(np.sqrt(1e-5))
    assert color_at(legend, np.sqrt(1e-5)) == RGBTriple(128, 128, 128)


def test_perturbed_anchor_one_unit(sycamore):
    legend, table = sycamore
    for value, c in legend.anchors:
        for ch in range(3):
            q = c.as_array()
            q[ch] += 1 if q[ch] < 255 else -1
            got, dist = match_color(table, RGBTriple(*q))
            d = np.abs(table.colors - q).sum(axis=1)
            assert dist == d.min()
            assert got == table.values[d == d.min()].min()
            if dist == 1:
                assert got == value
            else:
                # the bump landed on the neighbouring interpolated color
                i, j = np.searchsorted(table.values, [value, got])
                assert abs(int(i) - int(j)) == 1


def test_ties_go_to_smaller_value():
    legend = ColorLegend(((0.0, RGBTriple(0, 0, 0)), (1.0, RGBTriple(2, 0, 0))), 0)
    t = build_legend_table(legend)
    assert match_color(t, RGBTriple(1, 0, 0)) == (0.0, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 1200), st.sampled_from([0, 1, 2]), st.sampled_from([-1, 1]))
@example(101, 2, -1)  # corner at an anchor: ties with the entry two steps back
def test_unit_perturbation_stays_local(sycamore, i, ch, sign):
    _, table = sycamore
    color = table.colors[i].copy()
    if not 0 <= color[ch] + sign <= 255:
        return
    color[ch] += sign
    got, d = match_color(table, RGBTriple(*color))
    j = int(np.searchsorted(table.values, got))
    assert d <= 1
    assert abs(j - i) <= 2


def test_sycamore_two_gate_aggregates(corpus, sycamore):
    _, table = sycamore
    matched, summary = extract_gate_errors(table, corpus.colors("two_gate_colors"))
    assert summary.count == 86
    assert summary.mean == pytest.approx(6.23e-3, abs=table.grid_step(6.23e-3))
    assert summary.median == pytest.approx(6.00e-3, abs=table.grid_step(6.00e-3))
    assert summary.min == pytest.approx(2.37e-3, abs=table.grid_step(2.37e-3))
    assert summary.max == pytest.approx(16.91e-3, abs=table.grid_step(16.91e-3))
    assert matched["q0_5-q0_6"][0] == pytest.approx(9.54e-3, abs=table.grid_step(9.54e-3))


def test_sycamore_one_gate_mean(corpus, sycamore):
    _, table = sycamore
    _, summary = extract_gate_errors(table, corpus.colors("one_gate_colors"))
    assert summary.count == 53
    assert summary.mean == pytest.approx(1.58e-3, abs=table.grid_step(1.58e-3))


def test_extract_needs_colors(sycamore):
    with pytest.raises(ValueError):
        extract_gate_errors(sycamore[1], {})


def test_colors_generated_from_table_round_trip(sycamore):
    _, table = sycamore
    colors = {f"g{i}": RGBTriple(*table.colors[i]) for i in range(0, 1201, 37)}
    matched, _ = extract_gate_errors(table, colors)
    assert all(matched[f"g{i}"] == (table.values[i], 0) for i in range(0, 1201, 37))
