"""Recover numeric values from colorbar-coded figures.

A legend is a list of anchor ``(value, RGB)`` pairs read at the tick marks.
Between neighbouring anchors ``density`` further entries are interpolated,
channel-wise linearly with round-half-up to integers. The value coordinate is
interpolated linearly or, for logarithmic colorbars, geometrically. A query
color is then mapped to the entry with the smallest L1 distance in RGB space.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class RGBTriple:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for ch in ("r", "g", "b"):
            v = getattr(self, ch)
            if int(v) != v or not 0 <= v <= 255:
                raise ValueError(f"channel {ch}={v} must be an integer in [0, 255]")
            object.__setattr__(self, ch, int(v))

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.g, self.b], dtype=np.int64)


@dataclass(frozen=True)
class ColorLegend:
    anchors: tuple[tuple[float, RGBTriple], ...]
    interpolation_density: int = 99
    value_scale: str = "linear"

    def __post_init__(self):
        anchors = tuple((float(v), c if isinstance(c, RGBTriple) else RGBTriple(*c)) for v, c in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        if len(anchors) < 2:
            raise ValueError("a legend needs at least 2 anchors")
        values = [v for v, _ in anchors]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("anchor values must be strictly increasing")
        if self.interpolation_density < 0:
            raise ValueError("interpolation density must be >= 0")
        if self.value_scale not in ("linear", "log"):
            raise ValueError(f"unknown value scale {self.value_scale!r}")
        if self.value_scale == "log" and values[0] <= 0:
            raise ValueError("a log-scale legend needs positive anchor values")


@dataclass(frozen=True)
class LegendTable:
    values: np.ndarray  # (K,)
    colors: np.ndarray  # (K, 3) int64

    def __len__(self):
        return len(self.values)

    @property
    def entries(self) -> list[tuple[float, RGBTriple]]:
        return [(float(v), RGBTriple(*map(int, c))) for v, c in zip(self.values, self.colors)]

    def grid_step(self, value: float) -> float:
        """Spacing of table values around ``value``."""
        i = int(np.clip(np.searchsorted(self.values, value), 1, len(self.values) - 1))
        return float(self.values[i] - self.values[i - 1])


def round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(np.asarray(x, dtype=float) + 0.5).astype(np.int64)


def _segment(legend: ColorLegend, k: int, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    (v0, c0), (v1, c1) = legend.anchors[k], legend.anchors[k + 1]
    if legend.value_scale == "log":
        values = v0 * (v1 / v0) ** t
    else:
        values = v0 + t * (v1 - v0)
    colors = c0.as_array() + t[:, None] * (c1.as_array() - c0.as_array())
    return values, colors


def build_legend_table(legend: ColorLegend) -> LegendTable:
    """Anchors plus ``density`` interpolated entries per interval.

    Entry count is ``(anchors - 1) * (density + 1) + 1``.
    """
    steps = legend.interpolation_density + 1
    t = np.arange(steps) / steps
    values, colors = [], []
    for k in range(len(legend.anchors) - 1):
        v, c = _segment(legend, k, t)
        values.append(v)
        colors.append(round_half_up(c))
    last_v, last_c = legend.anchors[-1]
    values.append(np.array([last_v]))
    colors.append(last_c.as_array()[None, :])
    return LegendTable(np.concatenate(values), np.concatenate(colors))


def color_at(legend: ColorLegend, value: float) -> RGBTriple:
    """Color the legend assigns to an arbitrary in-range value (rounded)."""
    values = [v for v, _ in legend.anchors]
    if not values[0] <= value <= values[-1]:
        raise ValueError(f"{value} outside legend range [{values[0]}, {values[-1]}]")
    k = min(int(np.searchsorted(values, value, side="right")) - 1, len(values) - 2)
    v0, v1 = values[k], values[k + 1]
    if legend.value_scale == "log":
        t = np.log(value / v0) / np.log(v1 / v0)
    else:
        t = (value - v0) / (v1 - v0)
    _, c = _segment(legend, k, np.array([t]))
    return RGBTriple(*map(int, round_half_up(c)[0]))


def match_color(table: LegendTable, query: RGBTriple) -> tuple[float, int]:
    """Value of the nearest entry in L1 distance, and that distance.

    Equidistant entries resolve to the smallest value.
    """
    if len(table) == 0:
        raise ValueError("empty legend table")
    q = query.as_array() if isinstance(query, RGBTriple) else np.asarray(query, dtype=np.int64)
    dist = np.abs(table.colors - q).sum(axis=1)
    best = int(dist.min())
    candidates = np.flatnonzero(dist == best)
    i = candidates[np.argmin(table.values[candidates])]
    return float(table.values[i]), best


@dataclass(frozen=True)
class ExtractionSummary:
    mean: float
    median: float
    min: float
    max: float
    count: int


def summarize(values: Sequence[float]) -> ExtractionSummary:
    vals = list(values)
    return ExtractionSummary(
        statistics.fmean(vals), statistics.median(vals), min(vals), max(vals), len(vals)
    )


def extract_gate_errors(
    table: LegendTable, colors: Mapping[str, RGBTriple]
) -> tuple[dict[str, tuple[float, int]], ExtractionSummary]:
    """Match every gate color; returns ``{gate: (error_rate, l1_distance)}`` and aggregates."""
    if not colors:
        raise ValueError("no gate colors given")
    matched = {gate: match_color(table, c) for gate, c in colors.items()}
    return matched, summarize(v for v, _ in matched.values())
