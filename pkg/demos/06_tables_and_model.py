"""Regenerating the digit-growth tables and checking the cost model against instrumentation."""

# %%
from rnsalu import FracSplit, StepCounter, natural_system
from rnsalu.costmodel import cost_report, emit_graph_data, emit_table, model_inequalities, validate_counters
from rnsalu.fraction import mul

print(emit_table(2, range(8, 15)).to_text())
print(emit_table(5, range(6, 15)).to_text())

# %% The Q=6 and Q=7 rows of the printed interpretation table follow the power-augmented systems.
print(emit_table(5, range(6, 8), "power-augmented").to_text())

# %% Graph 3's ratio climbs slowly and stays below one.
for Q, ratio, exact in emit_graph_data(3, range(6, 15)).rows:
    print(f"Q={Q:2d}  log2(p)/Q={ratio:.4f}  log2(p)/log2(P)={exact:.4f}")

# %% Both digit-count inequalities hold at every width.
print({Q: all(model_inequalities(Q).values()) for Q in range(6, 15)})

# %% Instrumented steps against the model's bounds.
split = FracSplit(natural_system(8), [17, 19])
c = StepCounter()
for a in range(-5, 6):
    mul(split.fixed(a), split.fixed(3 * a + 1), c)
print(validate_counters(cost_report(8, 5, 0), c))
