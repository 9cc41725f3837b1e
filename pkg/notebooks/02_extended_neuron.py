"""
From NFN to ENFN
================

The classic neo-fuzzy neuron attaches a constant to each membership
function; the extended neuron attaches a polynomial of order p in the same
input. Both are linear in their weights, so the same online rule trains
them. Here one input is fitted to a smooth nonlinear target.
"""

# %%
import numpy as np

from enfn import EnfnModel, LearnerState, ModelConfig, batch_least_squares, run_online
from enfn.metrics import rmse

rng = np.random.default_rng(0)
X = rng.random((4000, 1))
y = np.sin(2 * np.pi * X[:, 0]) + 0.3 * X[:, 0] ** 2
X_test = np.linspace(0, 1, 200)[:, None]
y_test = np.sin(2 * np.pi * X_test[:, 0]) + 0.3 * X_test[:, 0] ** 2

# %%
# Same three memberships, increasing consequent order. The weight count
# grows as (p + 1) * h * n.
for p in (0, 1, 2, 3):
    cfg = ModelConfig.uniform(n=1, h=3, p=p)
    model = EnfnModel(cfg)
    run_online(model, LearnerState.adaptive(alpha=0.9), X, y)
    ls = batch_least_squares(cfg, X, y)
    print(f"p={p}: {cfg.weight_count():2d} weights, online test RMSE "
          f"{rmse(y_test, model.predict_many(X_test)):.4f}, least squares "
          f"{rmse(y_test, ls.predict_many(X_test)):.4f}")

# %%
# Each rule reads as "IF x is X_l THEN w0 + w1 x + ... + wp x^p".
cfg = ModelConfig.uniform(n=1, h=3, p=2)
model = batch_least_squares(cfg, X, y)
for l, c in enumerate(cfg.grid.centers):
    w = model.rule_weights(0, l)
    print(f"IF x is near {c:.1f} THEN {w[0]:+.3f} {w[1]:+.3f} x {w[2]:+.3f} x^2")

# %%
# The smoothing parameter alpha moves the rule between a Kaczmarz projection
# (alpha = 0, fast but noisy) and a stochastic approximation (alpha = 1,
# ever-shrinking steps).
noisy = y + rng.normal(scale=0.1, size=y.size)
for alpha in (0.0, 0.5, 0.9, 0.99, 1.0):
    model = EnfnModel(ModelConfig.uniform(n=1, h=3, p=2))
    run_online(model, LearnerState.adaptive(alpha), X, noisy)
    print(f"alpha={alpha:<5} test RMSE {rmse(y_test, model.predict_many(X_test)):.4f}")
