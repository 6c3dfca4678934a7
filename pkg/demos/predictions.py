"""Component-error fidelity predictions for the 53-qubit Sycamore circuit."""

# %%
from rcsaudit.error_models import deviation_estimate, predict_averaged, predict_cycle, predict_formula77
from rcsaudit.ingest import load_fixtures
from rcsaudit.reports import build_report, sycamore_circuit

corpus = load_fixtures()
circuit = sycamore_circuit(corpus, 53)
print("qubits", circuit.n, "1-gates", circuit.g1_count, "2-gates", circuit.g2_count)

# %%
# per-component product vs the averaged and per-cycle shortcuts
f77 = predict_formula77(circuit, corpus.component_table()).value
avg = predict_averaged(circuit.n, circuit.g1_count, circuit.g2_count).value
cyc = predict_cycle(circuit.n, circuit.g2_count).value
print(f"per-component {f77:.4f}  averaged {avg:.4f}  per-cycle {cyc:.4f}")

# %%
# how far off a 20% misjudgement of every rate could push the log-fidelity
print(f"deviation bound {deviation_estimate(53, 795, 301, rel_accuracy=0.2):.3f}")

# %%
# regenerate the audit tables and list cells outside tolerance
for target in ("table2", "table3", "table4", "table5", "table6", "gate_tables"):
    r = build_report(target, corpus)
    print(f"{target}: {len(r.cells)} cells, {len(r.failures)} outside tolerance")
    for c in r.failures:
        print(f"   {c.row} {c.column}: computed {c.computed:.6g} printed {c.expected}")

# %%
gap = build_report("table4", corpus).artifacts["google77_gap"]
for g in gap[::9]:
    print(f"n={g['n']}: regenerated {g['regenerated']:.4f} reported {g['google77']:.4f} ({g['rel_dev']:+.0%})")
