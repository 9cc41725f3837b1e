"""
Mackey-Glass one-step prediction
================================

Predict y(k+1) from y(k-3..k) on the chaotic Mackey-Glass series (tau = 17,
sampled every 0.1). The first 7000 points train the neuron online; the
next 5000 are predicted with frozen weights.
"""

# %%
import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from enfn.harness import PRESETS, emit_table, run_experiment

config = PRESETS["mackey-glass"]
report = run_experiment(config)
print(emit_table(report)[0])
print(f"best p by SMAPE: {report.best_p} ({report.duration:.2f} s)")

# %%
# The trace holds target, prediction and error over the test segment for the
# best order.
k, target, pred, err = report.trace.T
fig, ax = plt.subplots(figsize=(10, 3))
ax.plot(k, target, color="tab:blue", lw=0.8, label="series")
ax.plot(k, pred, color="tab:green", lw=0.8, label="prediction")
ax.plot(k, err, color="tab:red", lw=0.8, label="error")
ax.legend(loc="upper right")
ax.set_title(f"Mackey-Glass, p={report.best_p}, h={config.h}, alpha={config.alpha}")
fig.tight_layout()
fig.savefig("mackey_glass_trace.png", dpi=100)

# %%
# The adaptive rule tracks the trajectory during training, so the frozen
# test error depends on where the weights stand when adaptation stops.
from dataclasses import replace

for train_len in (6000, 6500, 7000):
    rep = run_experiment(replace(config, train_len=train_len, test_len=4000))
    print(train_len, " ".join(f"p={r.p}:{r.smape:.3f}" for r in rep.rows))
