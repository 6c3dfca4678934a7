"""``rcsaudit`` command line.

Exit codes: 0 success, 2 input error, 3 tolerance failure.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .components import ReadoutErrorPair
from .error_models import (
    AveragedRates,
    RefinedFactorRow,
    adjusted_patch_prediction,
    back_solve_removed,
    predict_averaged,
    predict_cycle,
    predict_formula77,
    predict_refined,
)
from .estimators import (
    depth_regression,
    mean_fidelity,
    mle_fidelity,
    ones_statistics,
    predicted_ones_at_zero_depth,
    xeb_linear,
)
from .exceptions import AuditError, EmptySelectionError
from .ingest import (
    attach_amplitudes,
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
    serialize_samples,
)
from .legend import build_legend_table, extract_gate_errors
from .plots import scatter_svg
from .reports import TARGETS, Report, build_report, rate_table, sycamore_circuit
from .simulator import (
    NoiseConfig,
    RandomCircuitConfig,
    apply_noise,
    complete_coupling,
    generate_random_circuit,
    grid_coupling,
    line_coupling,
    sample_with_fidelity,
    simulate_ideal,
    split_seed,
)

EXIT_OK, EXIT_INPUT, EXIT_TOLERANCE = 0, 2, 3

MODELS = ("f77", "avg", "cycle", "refined", "adj-patch")


class InputError(Exception):
    pass


class Context:
    """Per-invocation settings plus the inputs read so far (for the header line)."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.precision: int = args.precision
        self.jobs: int = max(1, args.jobs)
        self.seed: int = args.seed
        self.inputs: list[tuple[str, str]] = []
        self._corpus = None

    def fmt(self, x) -> str:
        if isinstance(x, (bool, np.bool_)):
            return str(bool(x)).lower()
        if isinstance(x, (int, np.integer)):
            return str(int(x))
        if isinstance(x, float) and math.isnan(x):
            return "nan"
        return format(float(x), f".{self.precision}g")

    def read(self, path: str | Path) -> str:
        p = Path(path)
        if not p.is_file():
            raise InputError(f"input file not found: {p}")
        data = p.read_bytes()
        self.inputs.append((p.name, hashlib.sha256(data).hexdigest()[:12]))
        return data.decode("utf-8")

    @property
    def corpus(self):
        if self._corpus is None:
            self._corpus = load_fixtures()
            digest = hashlib.sha256("".join(sorted(self._corpus.digests.values())).encode()).hexdigest()
            self.inputs.append(("fixtures", digest[:12]))
        return self._corpus

    def fixture_text(self, spec: str) -> str:
        """``fixture:NAME`` selects a shipped fixture; anything else is a path."""
        if spec.startswith("fixture:"):
            return self.corpus[spec.split(":", 1)[1]].text
        return self.read(spec)

    def header(self, command: str) -> str:
        inputs = ",".join(f"{n}:{d}" for n, d in self.inputs) or "none"
        return f"# rcsaudit {__version__} command={command} seed={self.seed} inputs={inputs}"

    def map(self, fn: Callable, items: Sequence):
        if self.jobs == 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return list(pool.map(fn, items))


def _csv(rows: list[list[str]]) -> str:
    return "".join(",".join(r) + "\n" for r in rows)


def _emit(ctx: Context, command: str, body: str, out=None) -> None:
    text = ctx.header(command) + "\n" + body
    target = ctx.args.output if out is None else out
    if target and target != "-":
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(text)
    else:
        sys.stdout.write(text)


# -- predict ------------------------------------------------------------------


def _rates(args) -> AveragedRates:
    return AveragedRates(args.e1, args.e2, args.eread, args.e2cycle)


def _sources(spec: str) -> tuple[str, str, str]:
    parts = [s.strip() for s in spec.split(",")]
    if len(parts) != 3:
        raise InputError("--sources needs three comma-separated entries: 1-gate,2-gate,readout")
    return tuple(parts)


def cmd_predict(ctx: Context) -> int:
    a = ctx.args
    rates = _rates(a)
    rows: list[list[str]]
    if a.model in ("avg", "cycle", "f77"):
        rows = [["model", "n", "m", "g1", "g2", "value", "inputs"]]
        if a.model == "f77" and a.circuit:
            circuits = [parse_circuit(ctx.read(a.circuit), a.circuit)]
        elif a.n and (a.model == "f77" or a.g2 is None):
            if not a.m:
                raise InputError("--m is required to build the Sycamore circuit layout")
            circuits = [sycamore_circuit(ctx.corpus, n, m) for n in a.n for m in a.m]
        else:
            circuits = []
        if a.model == "f77":
            if not circuits:
                raise InputError("f77 needs --circuit or --n/--m")
            table = _f77_table(ctx, a)
            for c in circuits:
                p = predict_formula77(c, table)
                rows.append(["f77", str(c.n), str(c.depth), str(c.g1_count), str(c.g2_count), ctx.fmt(p.value), f'"{p.inputs_digest}; {a.sources}"'])
        else:
            if circuits:
                cases = [(c.n, c.depth, c.g1_count, c.g2_count) for c in circuits]
            else:
                if not a.n or a.g2 is None or (a.model == "avg" and a.g1 is None):
                    raise InputError(f"{a.model} needs --n and gate counts (--g1/--g2) or --m")
                cases = [(n, "", a.g1 or 0, a.g2) for n in a.n]
            for n, m, g1, g2 in cases:
                p = predict_averaged(n, g1, g2, rates) if a.model == "avg" else predict_cycle(n, g2, rates)
                rows.append([a.model, str(n), str(m), str(g1), str(g2), ctx.fmt(p.value), f'"{p.inputs_digest}"'])
    elif a.model == "refined":
        rows = [["model", "row", "D", "G"]]
        for spec in a.row or []:
            rows.append(["refined", spec.replace(",", "/"), *(ctx.fmt(p.value) for p in predict_refined(_refined_row(ctx, spec)))])
        if a.factors:
            f = [float(x) for x in a.factors.split(",")]
            if len(f) != 5:
                raise InputError("--factors needs A,B,C,E,F as five fractions")
            rows.append(["refined", "factors", *(ctx.fmt(p.value) for p in predict_refined(RefinedFactorRow(*f)))])
        if len(rows) == 1:
            raise InputError("refined needs --row TYPE,N,M or --factors")
    else:
        rows = [["model", "row", "pred_full", "removed_2gates", "value", "clamped"]]
        cases = []
        for spec in a.row or []:
            r = _table5_row(ctx, spec)
            pred = float(r["pred"])
            cases.append((spec.replace(",", "/"), pred, round(back_solve_removed(pred, float(r["adj_pred"]), rates.e2_avg))))
        if a.pred is not None:
            if a.removed is None:
                raise InputError("adj-patch needs --removed with --pred")
            cases.append(("", a.pred, a.removed))
        if not cases:
            raise InputError("adj-patch needs --pred/--removed or --row N,M,TYPE")
        for spec, pred, removed in cases:
            p = adjusted_patch_prediction(pred, removed, rates.e2_avg)
            rows.append(["adj-patch", spec, ctx.fmt(pred), str(removed), ctx.fmt(p.value), ctx.fmt(p.clamped)])
    _emit(ctx, "predict", _csv(rows))
    return EXIT_OK


def _f77_table(ctx: Context, a):
    one, two, readout = _sources(a.sources)
    table = rate_table(ctx.corpus, one, two, readout, _rates(a)) if a.rates is None or a.two_gate is None else None
    if a.rates:
        parsed = parse_component_table(ctx.read(a.rates), a.rates)
        table = parsed if table is None else table.replace(readout=parsed.readout, one_gate=parsed.one_gate)
    if a.two_gate:
        pairs = parse_two_gate_table(ctx.read(a.two_gate), a.two_gate)
        table = table.replace(two_gate=pairs)
    return table


def _refined_row(ctx: Context, spec: str) -> RefinedFactorRow:
    try:
        kind, n, m = (s.strip() for s in spec.split(","))
    except ValueError:
        raise InputError(f"--row must be TYPE,N,M, got {spec!r}") from None
    for r in ctx.corpus["table6"].rows:
        if (r["type"], r["n"], r["m"]) == (kind, n, m):
            f = [float(r[c]) / 100 for c in "ABCEF"]
            return RefinedFactorRow(*f, circuit_type=kind, n=int(n), m=int(m))
    raise InputError(f"no refined-model row {spec!r} in fixture table6")


def _table5_row(ctx: Context, spec: str) -> dict:
    try:
        n, m, kind = (s.strip() for s in spec.split(","))
    except ValueError:
        raise InputError(f"--row must be N,M,TYPE, got {spec!r}") from None
    for r in ctx.corpus["table5"].rows:
        if (r["n"], r["m"], r["type"]) == (n, m, kind):
            return r
    raise InputError(f"no patch row {spec!r} in fixture table5")


# -- estimate / ones ----------------------------------------------------------


def _sample_pairs(ctx: Context, a, need_amplitudes: bool) -> list[tuple[str, str, str | None]]:
    """``(circuit_id, samples_text, amplitudes_text)`` per circuit, in sorted order."""
    pairs = []
    if a.dir:
        d = Path(a.dir)
        files = sorted(d.glob("*.samples"))
        if not files:
            raise InputError(f"no *.samples files in {d}")
        for s in files:
            amp = s.with_suffix(".amplitudes.csv")
            if need_amplitudes and not amp.exists():
                raise InputError(f"samples {s.name} lack amplitudes: {amp.name} not found")
            pairs.append((s.stem, ctx.read(s), ctx.read(amp) if amp.exists() else None))
    samples = a.samples or []
    amps = getattr(a, "amplitudes", None) or []
    if need_amplitudes and len(amps) != len(samples):
        raise InputError(f"{len(samples)} sample files but {len(amps)} amplitude files")
    for i, s in enumerate(samples):
        pairs.append((Path(s).stem, ctx.read(s), ctx.read(amps[i]) if i < len(amps) else None))
    if not pairs:
        raise InputError("no samples given (use --samples or --dir)")
    return pairs


def cmd_estimate(ctx: Context) -> int:
    a = ctx.args
    pairs = _sample_pairs(ctx, a, need_amplitudes=True)

    def work(item):
        cid, stext, atext = item
        samples = attach_amplitudes(parse_samples(stext, source=cid, circuit_id=cid), parse_amplitudes(atext, cid))
        return cid, samples.n, len(samples), xeb_linear(samples), mle_fidelity(samples)

    results = ctx.map(work, pairs)
    rows = [["circuit_id", "n", "samples", "xeb", "xeb_stderr", "mle", "mle_stderr", "feasible"]]
    for cid, n, count, x, m in results:
        rows.append([cid, str(n), str(count), ctx.fmt(x.value), ctx.fmt(x.stderr), ctx.fmt(m.value), ctx.fmt(m.stderr), ctx.fmt(m.feasible)])
    body = _csv(rows)
    for name, col in (("xeb", 3), ("mle", 4)):
        ests = [r[col] for r in results]
        parts = []
        for mode in ("all", "winsorized", "restricted"):
            try:
                parts.append(f"{mode}={ctx.fmt(mean_fidelity(ests, mode))}")
            except EmptySelectionError:
                parts.append(f"{mode}=nan")
        body += f"# summary estimator={name} count={len(ests)} " + " ".join(parts) + "\n"
    if a.svg:
        series = {
            "XEB": [(r[1], r[3].value) for r in results],
            "MLE": [(r[1], r[4].value) for r in results],
        }
        Path(a.svg).write_text(scatter_svg(series, "Fidelity estimates vs circuit size", "n (qubits)", "fidelity"))
    _emit(ctx, "estimate", body)
    return EXIT_OK


def cmd_ones(ctx: Context) -> int:
    a = ctx.args
    pairs = _sample_pairs(ctx, a, need_amplitudes=False)
    depths = list(a.depths or [])
    if depths and len(depths) != len(pairs):
        raise InputError(f"{len(pairs)} sample files but {len(depths)} depths")
    if not depths:
        for cid, _, _ in pairs:
            circuit = Path(a.dir or ".") / f"{cid}.circuit.json"
            if not circuit.exists():
                raise InputError(f"no depth for {cid}: pass --depths or provide {circuit.name}")
            depths.append(parse_circuit(ctx.read(circuit), circuit.name).depth)
    rows = [["circuit_id", "m", "samples", "ones", "zeros_minus_ones_pct"]]
    points = []
    for (cid, stext, _), m in zip(pairs, depths):
        s = parse_samples(stext, source=cid)
        st = ones_statistics(s)
        rows.append([cid, str(m), str(len(s)), ctx.fmt(st.overall), ctx.fmt(st.zeros_minus_ones_pct)])
        points.append((float(m), st.overall))
    body = _csv(rows)
    reg = None
    if len(points) >= 3 and len({p[0] for p in points}) >= 2:
        reg = depth_regression(points)
        lo, hi = reg.confidence_interval()
        body += (
            f"# regression slope={ctx.fmt(reg.slope)} stderr={ctx.fmt(reg.slope_stderr)} "
            f"intercept={ctx.fmt(reg.intercept)} p_value={ctx.fmt(reg.p_value)} ci95=[{ctx.fmt(lo)},{ctx.fmt(hi)}]\n"
        )
    if a.readout:
        q01, q10 = (float(x) for x in a.readout.split(","))
        body += f"# predicted_ones_at_zero_depth={ctx.fmt(predicted_ones_at_zero_depth(ReadoutErrorPair(q01, q10)))}\n"
    if a.svg:
        line = (reg.slope, reg.intercept) if reg else None
        Path(a.svg).write_text(scatter_svg({"ones": points}, "Proportion of 1's vs depth", "m (cycles)", "proportion of 1's", line))
    _emit(ctx, "ones", body)
    return EXIT_OK


# -- legend -------------------------------------------------------------------


def cmd_legend(ctx: Context) -> int:
    a = ctx.args
    legend = parse_legend(ctx.fixture_text(a.legend), a.density, a.scale, a.legend)
    colors = parse_colors(ctx.fixture_text(a.colors), a.colors)
    table = build_legend_table(legend)
    matched, summary = extract_gate_errors(table, colors)
    rows = [["gate_id", "error_rate", "l1_distance"]]
    rows += [[g, ctx.fmt(v), str(d)] for g, (v, d) in matched.items()]
    body = _csv(rows) + (
        f"# summary entries={len(table)} count={summary.count} mean={ctx.fmt(summary.mean)} "
        f"median={ctx.fmt(summary.median)} min={ctx.fmt(summary.min)} max={ctx.fmt(summary.max)}\n"
    )
    _emit(ctx, "legend", body)
    return EXIT_OK


# -- simulate -----------------------------------------------------------------


def _coupling(spec: str, n: int):
    if spec == "complete":
        return complete_coupling(n)
    if spec == "line":
        return line_coupling(n)
    if spec.startswith("grid:"):
        r, c = (int(x) for x in spec[5:].lower().split("x"))
        if r * c != n:
            raise InputError(f"grid {r}x{c} does not have {n} qubits")
        return grid_coupling(r, c)
    raise InputError(f"unknown coupling {spec!r} (complete, line, grid:RxC)")


SIM_KEYS = {
    "n": int, "m": int, "count": int, "phi": float, "circuits": int,
    "coupling": str, "q01": float, "q10": float, "damping": float, "seed": int,
}


def cmd_simulate(ctx: Context) -> int:
    a = ctx.args
    cfg = {"m": 0, "count": 1000, "phi": 1.0, "circuits": 1, "coupling": "complete", "q01": 0.0, "q10": 0.0, "damping": 0.0}
    if a.config:
        for k, v in parse_key_values(ctx.read(a.config), a.config).items():
            if k not in SIM_KEYS:
                raise InputError(f"unknown simulator config key {k!r}")
            try:
                cfg[k] = SIM_KEYS[k](v)
            except ValueError:
                raise InputError(f"config {k}={v!r} is not a valid {SIM_KEYS[k].__name__}") from None
    for k in SIM_KEYS:
        v = getattr(a, k, None)
        if v is not None and k != "seed":
            cfg[k] = v
    seed = cfg.get("seed", ctx.seed) if a.seed_from_cli is None else ctx.seed
    if "n" not in cfg:
        raise InputError("simulate needs --n (or n in --config)")
    n = cfg["n"]
    coupling = _coupling(cfg["coupling"], n) if n > 1 else ()
    noise = NoiseConfig(cfg["phi"], ReadoutErrorPair(cfg["q01"], cfg["q10"]), cfg["damping"])
    children = split_seed(seed, cfg["circuits"])

    def work(k: int):
        child = children[k]
        circuit_seed = int(child.generate_state(1, dtype=np.uint64)[0])
        rng = np.random.default_rng(child)
        circuit = generate_random_circuit(RandomCircuitConfig(n, cfg["m"], coupling if cfg["m"] else (), seed=circuit_seed))
        state = simulate_ideal(circuit)
        cid = f"c{k:03d}"
        samples = sample_with_fidelity(state, noise.global_fidelity, cfg["count"], rng, circuit_id=cid)
        samples = apply_noise(samples, noise, cfg["m"], rng)
        return cid, circuit, samples

    results = ctx.map(work, list(range(cfg["circuits"])))
    out = Path(a.output) if a.output else None
    params = " ".join(f"{k}={cfg[k]}" for k in sorted(cfg) if k != "seed")
    header = ctx.header("simulate") + f" {params}\n"
    if out is None:
        if len(results) != 1:
            raise InputError("several circuits need --output DIR")
        sys.stdout.write(header + serialize_samples(results[0][2]))
        return EXIT_OK
    out.mkdir(parents=True, exist_ok=True)
    for cid, circuit, samples in results:
        (out / f"{cid}.circuit.json").write_text(circuit_to_json(circuit))
        (out / f"{cid}.samples").write_text(header + serialize_samples(samples))
        (out / f"{cid}.amplitudes.csv").write_text(header + serialize_amplitudes(samples))
    sys.stdout.write(header + f"# wrote {len(results)} circuit(s) to {out}\n")
    return EXIT_OK


# -- report -------------------------------------------------------------------


def _report_csv(ctx: Context, report: Report) -> str:
    rows = [report.columns]
    for r in report.rows:
        rows.append(["" if c not in r else (r[c] if isinstance(r[c], str) else ctx.fmt(r[c])) for c in report.columns])
    return _csv(rows)


def _diff_csv(ctx: Context, report: Report) -> str:
    rows = [["row", "column", "computed", "expected", "tolerance", "ok", "note"]]
    for c in report.cells:
        rows.append([c.row, c.column, format(c.computed, ".10g"), c.expected, format(c.tolerance, ".3g"), ctx.fmt(c.ok), c.note])
    return _csv(rows)


def cmd_report(ctx: Context) -> int:
    a = ctx.args
    options = {}
    if a.target == "table6" and a.columns:
        options["columns"] = tuple(s.strip() for s in a.columns.split(","))
    report = build_report(a.target, ctx.corpus, **options)
    if a.target == "table5" and a.combined:
        report.cells = [c for c in report.cells if c.column == "f77_comb"]
    summary = f"# diff target={report.target} cells={len(report.cells)} outside_tolerance={len(report.failures)}\n"
    for c in report.failures:
        summary += f"# FAIL {c.row} {c.column}: computed {c.computed:.6g} expected {c.expected} (tol {c.tolerance:.3g})\n"
    for s in report.skipped:
        summary += f"# not regenerated: {s}\n"
    gap = report.artifacts.get("google77_gap")
    gap_csv = None
    if gap:
        rows = [["n", "google77", "regenerated", "rel_dev"]]
        rows += [[str(g["n"]), ctx.fmt(g["google77"]), ctx.fmt(g["regenerated"]), ctx.fmt(g["rel_dev"])] for g in gap]
        gap_csv = _csv(rows)
        big = sum(abs(g["rel_dev"]) > 0.05 for g in gap)
        summary += f"# google77 gap: {big}/{len(gap)} rows deviate by more than 5% (artifact, not a failure)\n"
    if a.output:
        out = Path(a.output)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{report.target}.csv").write_text(ctx.header("report") + "\n" + _report_csv(ctx, report))
        (out / f"{report.target}_diff.csv").write_text(ctx.header("report") + "\n" + _diff_csv(ctx, report))
        if gap_csv:
            (out / f"{report.target}_google77_gap.csv").write_text(ctx.header("report") + "\n" + gap_csv)
        sys.stdout.write(ctx.header("report") + "\n" + summary)
    else:
        body = _report_csv(ctx, report) + (gap_csv and "\n" + gap_csv or "") + summary
        sys.stdout.write(ctx.header("report") + "\n" + body)
    return EXIT_OK if report.ok else EXIT_TOLERANCE


# -- parser -------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--jobs", type=int, default=d(1), help="worker threads for per-circuit work")
    p.add_argument("--seed", type=int, default=d(0), help="master seed")
    p.add_argument("--precision", type=int, default=d(4), help="significant digits in output")
    p.add_argument("--output", default=d(None), help="output file (or directory for simulate/report)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcsaudit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rcsaudit {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        return p

    p = add("predict", "closed-form fidelity predictions")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--m", type=int, nargs="+", help="depths; gate counts then come from the Sycamore layout")
    p.add_argument("--g1", type=int)
    p.add_argument("--g2", type=int)
    p.add_argument("--circuit", help="circuit JSON file (f77)")
    p.add_argument("--rates", help="component table CSV: readout and 1-gate rates (f77)")
    p.add_argument("--two-gate", dest="two_gate", help="2-gate table CSV (f77)")
    p.add_argument("--sources", default="qb-spec,gate-spec,qb-spec", help="fixture rate sources 1-gate,2-gate,readout")
    p.add_argument("--row", action="append", help="fixture row: TYPE,N,M (refined) or N,M,TYPE (adj-patch)")
    p.add_argument("--factors", help="refined factors A,B,C,E,F as fractions")
    p.add_argument("--pred", type=float, help="full-circuit prediction (adj-patch)")
    p.add_argument("--removed", type=int, help="removed 2-gates (adj-patch)")
    p.add_argument("--e1", type=float, default=0.0016)
    p.add_argument("--e2", type=float, default=0.0062)
    p.add_argument("--eread", type=float, default=0.038)
    p.add_argument("--e2cycle", type=float, default=0.0093)
    p.set_defaults(func=cmd_predict)

    for name, help, amps in (("estimate", "XEB and MLE fidelity estimates", True), ("ones", "proportion of 1's vs depth", False)):
        p = add(name, help)
        p.add_argument("--samples", nargs="+")
        if amps:
            p.add_argument("--amplitudes", nargs="+")
        else:
            p.add_argument("--depths", type=int, nargs="+")
            p.add_argument("--readout", help="q01,q10 for the zero-depth prediction")
        p.add_argument("--dir", help="directory of <id>.samples (+ <id>.amplitudes.csv) files")
        p.add_argument("--svg", help="write a plot to this SVG file")
    sub.choices["estimate"].set_defaults(func=cmd_estimate)
    sub.choices["ones"].set_defaults(func=cmd_ones)

    p = add("legend", "retrieve error rates from gate colors")
    p.add_argument("--legend", default="fixture:legend_sycamore", help="legend CSV (or fixture:NAME)")
    p.add_argument("--colors", required=True, help="gate color CSV (or fixture:NAME)")
    p.add_argument("--density", type=int, default=99)
    p.add_argument("--scale", choices=("linear", "log"), help="override the legend file's value scale")
    p.set_defaults(func=cmd_legend)

    p = add("simulate", "random circuits, exact simulation and noisy samples")
    p.add_argument("--config", help="key = value simulator config file")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--phi", type=float)
    p.add_argument("--circuits", type=int)
    p.add_argument("--coupling")
    p.add_argument("--q01", type=float)
    p.add_argument("--q10", type=float)
    p.add_argument("--damping", type=float)
    p.set_defaults(func=cmd_simulate)

    p = add("report", "regenerate a table from fixtures and diff it")
    p.add_argument("target", help=f"one of {', '.join(TARGETS)}")
    p.add_argument("--columns", help="table6 column groups, e.g. D,G,ratios")
    p.add_argument("--combined", action="store_true", help="table5: only the combined column")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    # an explicit --seed beats a seed in a simulator config file
    args.seed_from_cli = True if any(x == "--seed" or x.startswith("--seed=") for x in argv) else None
    if args.command == "report" and args.target not in TARGETS:
        print(f"rcsaudit: unknown report target {args.target!r}; choose from {', '.join(TARGETS)}", file=sys.stderr)
        return EXIT_INPUT
    ctx = Context(args)
    try:
        return args.func(ctx)
    except (InputError, AuditError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"rcsaudit {args.command}: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
