"""
Narendra plants
===============

Four nonlinear identification benchmarks, each predicted one step ahead
with a frozen-weight test segment. The second plant is driven by a known
input, which enters the regressor next to the lagged outputs.
"""

# %%
from enfn.harness import PRESETS, emit_table, run_experiment
from enfn.signals import gen_narendra4

for name in ("narendra1", "narendra2", "narendra3", "narendra4"):
    cfg = PRESETS[name]
    report = run_experiment(cfg)
    print(f"{name}: {cfg.signal.n_points} points, train {cfg.train_len}, "
          f"test {cfg.test_len}, best p = {report.best_p}")
    print(emit_table(report)[0])

# %%
# The fourth plant divides by 1 + y^2 + sin + sin, which can approach zero.
# A guard clamps tiny denominators; over the 500-step run it never fires.
y, hits = gen_narendra4(500, return_guard_hits=True)
print("guard hits:", hits, " range:", y.min().round(3), y.max().round(3))
