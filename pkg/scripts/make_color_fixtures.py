"""Regenerate the stand-in Sycamore colorbar and gate-color fixtures.

The original figure's pixel colors are not distributed with the toolkit, so
the shipped legend is a synthetic log-scale colorbar with the Sycamore tick
values. Each gate's color is what that colorbar shows at the gate's
tabulated error rate (channel values rounded), i.e. what reading a pixel of
a re-rendered figure would give. Run from the repository root, then refresh
the checksum manifest with ``python scripts/make_color_fixtures.py --manifest``.
"""

import argparse
import csv
import hashlib
import pathlib

from rcsaudit.legend import ColorLegend, color_at

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "rcsaudit" / "data"

TICKS = [0.0008, 0.0009, 0.001, 0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008, 0.009, 0.01, 0.017]
# every segment moves one channel by >= 100 so interpolated entries stay distinct
ANCHOR_RGB = [
    (40, 0, 120),
    (40, 0, 250),
    (40, 130, 250),
    (40, 250, 250),
    (40, 250, 120),
    (40, 250, 0),
    (150, 250, 0),
    (255, 250, 0),
    (255, 140, 0),
    (255, 30, 0),
    (255, 0, 110),
    (255, 120, 110),
    (255, 240, 110),
]


def sycamore_legend():
    return ColorLegend(tuple(zip(TICKS, ANCHOR_RGB)), 99, "log")


def read_rows(path):
    with open(path) as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))


def write_legend():
    with open(DATA / "legend_sycamore.csv", "w", newline="") as f:
        f.write("# source: synthetic stand-in colorbar with the Sycamore tick values (0.0008 .. 0.01, top 0.017)\n")
        f.write("# scale=log\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["value", "r", "g", "b"])
        for v, c in zip(TICKS, ANCHOR_RGB):
            w.writerow([v, *c])


def write_colors(name, source, rows, key, scale):
    legend = sycamore_legend()
    with open(DATA / name, "w", newline="") as f:
        f.write(f"# source: colors of {source} rendered through legend_sycamore.csv\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["gate_id", "r", "g", "b"])
        for gate_id, value in rows:
            c = color_at(legend, value * scale)
            w.writerow([gate_id, c.r, c.g, c.b])


def write_manifest():
    lines = []
    for p in sorted(DATA.glob("*.csv")):
        lines.append(f"{hashlib.sha256(p.read_bytes()).hexdigest()}  {p.name}\n")
    (DATA / "MANIFEST.sha256").write_text("".join(lines))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--manifest", action="store_true", help="only rewrite the checksum manifest")
    args = ap.parse_args()
    if not args.manifest:
        write_legend()
        two = [(f"{r['qubit1']}-{r['qubit2']}", float(r["e2_pct_per_mille"])) for r in read_rows(DATA / "two_gate.csv")]
        one = [(r["qubit"], float(r["e1_retrieved_per_mille"])) for r in read_rows(DATA / "one_gate.csv")]
        write_colors("two_gate_colors.csv", "the 2-gate error table", two, "e2", 1e-3)
        write_colors("one_gate_colors.csv", "the retrieved 1-gate error table", one, "e1", 1e-3)
    write_manifest()


if __name__ == "__main__":
    main()
