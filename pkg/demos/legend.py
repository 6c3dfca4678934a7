"""Reading gate error rates back from colorbar pixel colors."""

# %%
from rcsaudit.legend import RGBTriple, build_legend_table, extract_gate_errors, match_color
from rcsaudit.ingest import load_fixtures

corpus = load_fixtures()
table = build_legend_table(corpus.legend())
print("legend entries", len(table))

# %%
# every entry maps back to itself
v, c = table.entries[400]
print(v, c, match_color(table, c))

# %%
# a slightly off pixel still lands on or next to the same entry
r, g, b = c.r, c.g, c.b
print(match_color(table, RGBTriple(min(r + 1, 255), g, b)))

# %%
for name in ("two_gate_colors", "one_gate_colors"):
    _, s = extract_gate_errors(table, corpus.colors(name))
    print(f"{name}: n={s.count} mean {s.mean * 1e3:.2f} median {s.median * 1e3:.2f} "
          f"min {s.min * 1e3:.2f} max {s.max * 1e3:.2f} (per mille)")
