"""Parsers for every external file format and the shipped fixture corpus.

Units are declared by header suffix: ``_pct`` is percent, ``_per_mille`` is
per 1000. Both are converted to fractions here and nowhere else.

Bit order: the leftmost character of a bitstring is the first qubit of the
circuit's qubit list (measurement order).
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .components import CircuitSpec, ComponentErrorTable, Gate, ReadoutErrorPair, pair_key
from .estimators import SampleSet
from .exceptions import ChecksumError, MissingAmplitudesError, ParseError
from .legend import ColorLegend, RGBTriple

FIXTURE_ENV = "RCSAUDIT_FIXTURES"

COMPONENT_HEADER = ["qubit", "q01_pct", "q10_pct", "e1_sim_pct", "n_ins"]
TWO_GATE_HEADER = ["qubit1", "qubit2", "e2_pct_per_mille"]
AMPLITUDE_HEADER = ["bitstring", "probability"]
LEGEND_HEADER = ["value", "r", "g", "b"]
COLOR_HEADER = ["gate_id", "r", "g", "b"]

UNIT_SCALE = {"_pct": 1e-2, "_per_mille": 1e-3}


def _lines(text: str) -> Iterator[tuple[int, str]]:
    """Non-blank, non-comment lines with their 1-based line numbers."""
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            yield i, line


def _comments(text: str) -> list[str]:
    return [ln.strip()[1:].strip() for ln in text.splitlines() if ln.strip().startswith("#")]


def read_csv(text: str, header: list[str] | None = None, source: str | None = None):
    """Return ``(header, [(line_no, row_dict)])``; checks the header when given."""
    numbered = list(_lines(text))
    if not numbered:
        if header is not None:
            return header, []
        raise ParseError("empty file", source=source)
    first_no, first = numbered[0]
    got = [h.strip() for h in next(csv.reader([first]))]
    if header is not None and got != header:
        raise ParseError(f"expected header {','.join(header)}, got {','.join(got)}", first_no, source)
    rows = []
    for no, line in numbered[1:]:
        cells = [c.strip() for c in next(csv.reader([line]))]
        if len(cells) != len(got):
            raise ParseError(f"expected {len(got)} fields, got {len(cells)}", no, source)
        rows.append((no, dict(zip(got, cells))))
    return got, rows


def _number(cell: str, no: int, source, what: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"{what}: not a number: {cell!r}", no, source) from None


def _scaled(cell: str, column: str, no: int, source) -> float:
    scale = next((s for suffix, s in UNIT_SCALE.items() if column.endswith(suffix)), None)
    if scale is None:
        raise ParseError(f"column {column!r} declares no unit suffix", no, source)
    value = _number(cell, no, source, column) * scale
    if not 0.0 <= value <= 1.0:
        raise ParseError(f"{column}={cell} is not a probability after unit conversion", no, source)
    return value


def parse_component_table(text: str, source: str | None = None) -> ComponentErrorTable:
    """Per-qubit readout pairs, 1-gate errors and insertion order.

    A blank ``e1_sim_pct`` cell is allowed and recorded in ``missing_one_gate``.
    """
    _, rows = read_csv(text, COMPONENT_HEADER, source)
    readout, one_gate, order, missing = {}, {}, {}, set()
    for no, r in rows:
        q = r["qubit"]
        if not q:
            raise ParseError("empty qubit id", no, source)
        if q in readout:
            raise ParseError(f"duplicate qubit {q!r}", no, source)
        readout[q] = ReadoutErrorPair(
            _scaled(r["q01_pct"], "q01_pct", no, source), _scaled(r["q10_pct"], "q10_pct", no, source)
        )
        if r["e1_sim_pct"]:
            one_gate[q] = _scaled(r["e1_sim_pct"], "e1_sim_pct", no, source)
        else:
            missing.add(q)
        if r["n_ins"]:
            n_ins = _number(r["n_ins"], no, source, "n_ins")
            if n_ins != int(n_ins) or n_ins < 1:
                raise ParseError(f"n_ins must be a positive integer, got {r['n_ins']}", no, source)
            order[q] = int(n_ins)
    return ComponentErrorTable(readout, one_gate, {}, order, frozenset(missing))


def parse_two_gate_table(text: str, source: str | None = None) -> dict[frozenset, float]:
    _, rows = read_csv(text, TWO_GATE_HEADER, source)
    out: dict[frozenset, float] = {}
    for no, r in rows:
        a, b = r["qubit1"], r["qubit2"]
        if a == b:
            raise ParseError(f"self-pair {a}-{b}", no, source)
        key = pair_key(a, b)
        if key in out:
            raise ParseError(f"duplicate pair {a}-{b}", no, source)
        out[key] = _scaled(r["e2_pct_per_mille"], "e2_pct_per_mille", no, source)
    return out


def parse_one_gate_table(text: str, column: str, source: str | None = None) -> dict[str, float]:
    header, rows = read_csv(text, None, source)
    if header[0] != "qubit" or column not in header:
        raise ParseError(f"need columns qubit and {column}", 1, source)
    return {r["qubit"]: _scaled(r[column], column, no, source) for no, r in rows}


def parse_samples(text: str, n: int | None = None, source: str | None = None, **meta) -> SampleSet:
    """One bitstring per line, leftmost character = first qubit."""
    strings = []
    for no, line in _lines(text):
        s = line.strip()
        if set(s) - {"0", "1"}:
            raise ParseError(f"non-binary character in {s!r}", no, source)
        if n is None:
            n = len(s)
        if len(s) != n:
            raise ParseError(f"bitstring of length {len(s)}, expected {n}", no, source)
        strings.append(s)
    if n is None:
        raise ParseError("no bitstrings and no declared width", source=source)
    bits = np.array([[c == "1" for c in s] for s in strings], dtype=np.uint8).reshape(len(strings), n)
    return SampleSet(n=n, bitstrings=bits, **meta)


def parse_amplitudes(text: str, source: str | None = None) -> dict[str, float]:
    _, rows = read_csv(text, AMPLITUDE_HEADER, source)
    out = {}
    width = None
    for no, r in rows:
        s = r["bitstring"]
        if set(s) - {"0", "1"} or not s:
            raise ParseError(f"bad bitstring {s!r}", no, source)
        if width is None:
            width = len(s)
        elif len(s) != width:
            raise ParseError(f"bitstring of length {len(s)}, expected {width}", no, source)
        p = _number(r["probability"], no, source, "probability")
        if p < 0:
            raise ParseError(f"negative probability {p} for {s}", no, source)
        if s in out and out[s] != p:
            raise ParseError(f"conflicting probabilities for {s}", no, source)
        out[s] = p
    return out


def attach_amplitudes(samples: SampleSet, amplitudes: dict[str, float]) -> SampleSet:
    """Align ideal probabilities with the samples; every bitstring must be covered."""
    probs = []
    for s in samples.as_strings():
        if s not in amplitudes:
            raise MissingAmplitudesError(f"no amplitude for sampled bitstring {s}")
        probs.append(amplitudes[s])
    samples.ideal_probs = np.array(probs, dtype=float).reshape(len(probs))
    return samples


def parse_legend(text: str, density: int = 99, scale: str | None = None, source: str | None = None) -> ColorLegend:
    """Anchor lines ``value,r,g,b``; a ``# scale=log`` comment sets the value scale."""
    _, rows = read_csv(text, LEGEND_HEADER, source)
    if scale is None:
        scale = "linear"
        for c in _comments(text):
            if c.replace(" ", "").startswith("scale="):
                scale = c.replace(" ", "").split("=", 1)[1]
    anchors = []
    for no, r in rows:
        try:
            color = RGBTriple(*(int(r[ch]) for ch in "rgb"))
        except ValueError as exc:
            raise ParseError(str(exc), no, source) from None
        anchors.append((_number(r["value"], no, source, "value"), color))
    try:
        return ColorLegend(tuple(anchors), density, scale)
    except ValueError as exc:
        raise ParseError(str(exc), source=source) from None


def parse_colors(text: str, source: str | None = None) -> dict[str, RGBTriple]:
    _, rows = read_csv(text, COLOR_HEADER, source)
    out = {}
    for no, r in rows:
        if r["gate_id"] in out:
            raise ParseError(f"duplicate gate id {r['gate_id']!r}", no, source)
        try:
            out[r["gate_id"]] = RGBTriple(*(int(r[ch]) for ch in "rgb"))
        except ValueError as exc:
            raise ParseError(str(exc), no, source) from None
    return out


def parse_key_values(text: str, source: str | None = None) -> dict[str, str]:
    """Flat ``key = value`` config file."""
    out = {}
    for no, line in _lines(text):
        if "=" not in line:
            raise ParseError(f"expected key = value, got {line.strip()!r}", no, source)
        k, v = (s.strip() for s in line.split("=", 1))
        out[k] = v
    return out


# -- serialization (canonical forms) -----------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".10g")


def serialize_component_table(table: ComponentErrorTable) -> str:
    lines = [",".join(COMPONENT_HEADER)]
    for q, ro in table.readout.items():
        e1 = _fmt(table.one_gate[q] * 100) if q in table.one_gate else ""
        n_ins = str(table.insertion_order[q]) if q in table.insertion_order else ""
        lines.append(",".join([str(q), _fmt(ro.q01 * 100), _fmt(ro.q10 * 100), e1, n_ins]))
    return "\n".join(lines) + "\n"


def serialize_two_gate_table(pairs: dict[frozenset, float], order: Iterable[tuple[str, str]] | None = None) -> str:
    lines = [",".join(TWO_GATE_HEADER)]
    keys = [tuple(p) for p in order] if order is not None else [tuple(sorted(k)) for k in pairs]
    for a, b in keys:
        lines.append(f"{a},{b},{_fmt(pairs[pair_key(a, b)] * 1000)}")
    return "\n".join(lines) + "\n"


def canonical_csv(text: str) -> str:
    """Comments dropped, whitespace stripped, numeric cells in ``.10g`` form."""
    out = []
    for _, line in _lines(text):
        cells = []
        for c in next(csv.reader([line])):
            c = c.strip()
            try:
                cells.append(_fmt(float(c)) if c else "")
            except ValueError:
                cells.append(c)
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def serialize_samples(samples: SampleSet) -> str:
    return "".join(s + "\n" for s in samples.as_strings())


def serialize_amplitudes(samples: SampleSet) -> str:
    if samples.ideal_probs is None:
        raise MissingAmplitudesError("sample set has no ideal probabilities")
    seen = {}
    for s, p in zip(samples.as_strings(), samples.ideal_probs):
        seen.setdefault(s, p)
    rows = ["bitstring,probability"] + [f"{s},{p:.17g}" for s, p in sorted(seen.items())]
    return "\n".join(rows) + "\n"


# -- circuit files (JSON) -----------------------------------------------------


def circuit_to_json(circuit: CircuitSpec, include_matrices: bool = True) -> str:
    def gate(g: Gate):
        d = {"qubits": list(g.qubits)}
        if include_matrices and g.matrix is not None:
            d["matrix"] = [[[float(z.real), float(z.imag)] for z in row] for row in g.matrix]
        return d

    doc = {
        "name": circuit.name,
        "qubits": circuit.qubits,
        "depth": circuit.depth,
        "layers": [[gate(g) for g in layer] for layer in circuit.layers],
    }
    if circuit.patch_partition is not None:
        order = {q: i for i, q in enumerate(circuit.qubits)}
        doc["patches"] = [sorted(p, key=order.__getitem__) for p in circuit.patch_partition]
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def parse_circuit(text: str, source: str | None = None) -> CircuitSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid circuit JSON: {exc.msg}", exc.lineno, source) from None
    try:
        layers = []
        for layer in doc.get("layers", []):
            gates = []
            for g in layer:
                m = g.get("matrix")
                if m is not None:
                    m = np.array([[complex(re, im) for re, im in row] for row in m])
                gates.append(Gate(tuple(g["qubits"]), m))
            layers.append(tuple(gates))
        patches = doc.get("patches")
        return CircuitSpec(
            qubits=doc["qubits"],
            depth=int(doc.get("depth", 0)),
            layers=layers,
            patch_partition=tuple(frozenset(p) for p in patches) if patches else None,
            name=doc.get("name", ""),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed circuit: {exc}", source=source) from None


# -- fixture corpus -----------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    source_citation: str
    format_tag: str
    header: tuple[str, ...]
    rows: tuple[dict, ...]
    text: str = field(repr=False, default="")

    def column(self, key: str) -> list[str]:
        return [r[key] for r in self.rows]


FORMAT_TAGS = {
    tuple(COMPONENT_HEADER): "component_table",
    tuple(TWO_GATE_HEADER): "two_gate_table",
    tuple(LEGEND_HEADER): "legend",
    tuple(COLOR_HEADER): "gate_colors",
}


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("rcsaudit") / "data"))


def _verify_manifest(directory: Path) -> dict[str, str]:
    manifest = directory / "MANIFEST.sha256"
    if not manifest.exists():
        raise ChecksumError(f"fixture manifest missing in {directory}")
    expected = {}
    for line in manifest.read_text().splitlines():
        if line.strip():
            digest, name = line.split(None, 1)
            expected[name.strip()] = digest
    for name, digest in expected.items():
        path = directory / name
        if not path.exists():
            raise ChecksumError(f"fixture {name} listed in manifest but missing")
        actual = hashlib.sha256(path.read_bytes()).hexdigest()
        if actual != digest:
            raise ChecksumError(f"fixture {name} is corrupted (sha256 {actual[:12]} != {digest[:12]})")
    return expected


@dataclass
class ParsedCorpus:
    fixtures: dict[str, Fixture]
    digests: dict[str, str] = field(default_factory=dict)
    directory: Path | None = None

    def __getitem__(self, name: str) -> Fixture:
        try:
            return self.fixtures[name]
        except KeyError:
            raise KeyError(f"no fixture named {name!r}") from None

    def __contains__(self, name):
        return name in self.fixtures

    def names(self) -> list[str]:
        return sorted(self.fixtures)

    def component_table(self, readout: str = "reported") -> ComponentErrorTable:
        """Sycamore table: readout ``reported`` or ``relfreq`` (n=53 relative frequencies).

        1-gate and 2-gate rates come from the gate tables in both cases; the
        two readout datasets are never mixed.
        """
        name = {"reported": "table1", "relfreq": "table1_relfreq"}[readout]
        table = parse_component_table(self[name].text, name)
        one = parse_one_gate_table(self["one_gate"].text, "e1_reported_per_mille", "one_gate")
        return table.replace(
            one_gate={q: one[q] for q in table.readout},
            two_gate=parse_two_gate_table(self["two_gate"].text, "two_gate"),
            missing_one_gate=frozenset(),
        )

    def one_gate(self, column: str = "reported") -> dict[str, float]:
        return parse_one_gate_table(self["one_gate"].text, f"e1_{column}_per_mille", "one_gate")

    def couplers(self) -> list[tuple[str, str]]:
        return [(r["qubit1"], r["qubit2"]) for r in self["two_gate"].rows]

    def legend(self, name: str = "legend_sycamore") -> ColorLegend:
        return parse_legend(self[name].text, source=name)

    def colors(self, name: str) -> dict[str, RGBTriple]:
        return parse_colors(self[name].text, name)


def load_fixtures(directory: str | Path | None = None) -> ParsedCorpus:
    """Load and checksum every fixture CSV; honours ``$RCSAUDIT_FIXTURES``."""
    directory = Path(directory) if directory is not None else fixture_dir()
    digests = _verify_manifest(directory)
    fixtures = {}
    for name in sorted(digests):
        if not name.endswith(".csv"):
            continue
        text = (directory / name).read_text(encoding="utf-8")
        stem = name[: -len(".csv")]
        header, rows = read_csv(text, None, name)
        cites = [c.split(":", 1)[1].strip() for c in _comments(text) if c.startswith("source:")]
        if not cites:
            raise ParseError("fixture has no source citation", 1, name)
        fixtures[stem] = Fixture(
            name=stem,
            source_citation=cites[0],
            format_tag=FORMAT_TAGS.get(tuple(header), "table"),
            header=tuple(header),
            rows=tuple(r for _, r in rows),
            text=text,
        )
    return ParsedCorpus(fixtures, digests, directory)
