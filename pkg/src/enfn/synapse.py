"""
Forward map of the (extended) neo-fuzzy neuron.

Each input ``x_i`` passes through its own synapse: a bank of membership
functions, each carrying a polynomial consequent of order ``p`` in ``x_i``.
The model output is linear in the flattened weight vector::

    y_hat = w . phi(x)

where ``phi(x)`` stacks ``mu_li(x_i) * x_i**j`` for input ``i``, membership
``l`` and power ``j = 0..p`` in that nesting order (input-major). ``p = 0``
is the classic neo-fuzzy neuron.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ShapeError
from .membership import Kind, MembershipGrid, make_uniform_centers


@dataclass(frozen=True)
class ModelConfig:
    """Structural parameters of an ENFN.

    ``grid`` is either one grid shared by all inputs or a tuple with one grid
    per input.
    """

    n: int
    p: int
    grid: MembershipGrid | tuple

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"input dimension must be >= 1, got {self.n}")
        if int(self.p) != self.p or self.p < 0:
            raise ConfigurationError(f"inference order must be >= 0, got {self.p}")
        if isinstance(self.grid, MembershipGrid):
            return
        grids = tuple(self.grid)
        if len(grids) != self.n or not all(isinstance(g, MembershipGrid) for g in grids):
            raise ConfigurationError("per-input grids must be n MembershipGrid objects")
        object.__setattr__(self, "grid", grids)

    @classmethod
    def uniform(cls, n, h=3, p=0, kind=Kind.TRIANGULAR, q=2):
        return cls(n=n, p=p, grid=make_uniform_centers(h, kind=kind, degree=q))

    @property
    def grids(self) -> tuple:
        if isinstance(self.grid, MembershipGrid):
            return (self.grid,) * self.n
        return self.grid

    @property
    def h(self) -> int:
        return self.grids[0].h

    def block_sizes(self) -> list:
        """Number of weights owned by each input's synapse."""
        return [(self.p + 1) * g.size for g in self.grids]

    def weight_count(self) -> int:
        # (p + 1) * h * n for triangular grids
        return sum(self.block_sizes())

    def offset(self, i: int) -> int:
        return sum(self.block_sizes()[:i])


def _powers(x: np.ndarray, p: int) -> np.ndarray:
    out = np.empty(x.shape + (p + 1,))
    acc = np.ones_like(x)
    for j in range(p + 1):
        out[..., j] = acc
        acc = acc * x
    return out


def fuzzify_many(config: ModelConfig, X) -> np.ndarray:
    """Regressor matrix, one row ``phi(x)`` per sample.

    ``X`` has shape ``(N, n)``. Inputs are clamped to [0, 1] before both the
    membership evaluation and the polynomial powers.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != config.n:
        raise ShapeError(f"expected inputs of shape (N, {config.n}), got {X.shape}")
    X = np.clip(X, 0.0, 1.0)
    blocks = []
    for i, g in enumerate(config.grids):
        mu = g.activations(X[:, i])
        pw = _powers(X[:, i], config.p)
        blocks.append((mu[:, :, None] * pw[:, None, :]).reshape(X.shape[0], -1))
    return np.hstack(blocks)


def fuzzify(config: ModelConfig, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (config.n,):
        raise ShapeError(f"expected an input vector of length {config.n}, got shape {x.shape}")
    return fuzzify_many(config, x[None, :])[0]


@dataclass
class EnfnModel:
    """An ENFN: configuration plus the flattened weight vector.

    Weights default to zeros. The learning module mutates ``weights`` in
    place; everything here treats the model as read-only.
    """

    config: ModelConfig
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        count = self.config.weight_count()
        if self.weights is None:
            self.weights = np.zeros(count)
        else:
            self.weights = np.array(self.weights, dtype=float)
        if self.weights.shape != (count,):
            raise ShapeError(f"expected {count} weights, got shape {self.weights.shape}")
        if not np.all(np.isfinite(self.weights)):
            raise ConfigurationError("weights must be finite")

    def predict(self, x) -> float:
        return float(self.weights @ fuzzify(self.config, x))

    def predict_many(self, X) -> np.ndarray:
        return fuzzify_many(self.config, X) @ self.weights

    def rule_weights(self, i: int, l: int) -> np.ndarray:
        """Coefficients ``(w0, ..., wp)`` of the consequent of rule (i, l)."""
        cfg = self.config
        if not 0 <= i < cfg.n:
            raise ShapeError(f"input index {i} out of range for n={cfg.n}")
        if not 0 <= l < cfg.grids[i].size:
            raise ShapeError(f"membership index {l} out of range for input {i}")
        start = cfg.offset(i) + l * (cfg.p + 1)
        return self.weights[start:start + cfg.p + 1]

    def rule_consequent(self, i: int, l: int, x_i: float) -> float:
        """THEN-part polynomial of rule (i, l) evaluated at ``x_i``."""
        acc = 0.0
        for c in self.rule_weights(i, l)[::-1]:
            acc = acc * x_i + c
        return float(acc)

    def copy(self) -> "EnfnModel":
        return EnfnModel(self.config, self.weights.copy())

    def to_record(self) -> dict:
        return model_to_record(self)

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def from_record(cls, record: dict) -> "EnfnModel":
        return model_from_record(record)

    @classmethod
    def from_json(cls, text: str) -> "EnfnModel":
        return model_from_record(json.loads(text))


def _grid_record(g: MembershipGrid) -> dict:
    return {"kind": g.kind.value, "q": g.degree, "centers": list(g.centers)}


def model_to_record(model: EnfnModel) -> dict:
    cfg = model.config
    shared = cfg.grids[0]
    rec = {
        "n": cfg.n,
        "h": shared.h,
        "p": cfg.p,
        **_grid_record(shared),
        "weights": [float(w) for w in model.weights],
    }
    if not isinstance(cfg.grid, MembershipGrid):
        rec["grids"] = [_grid_record(g) for g in cfg.grids]
    return rec


def model_from_record(rec: dict) -> EnfnModel:
    def grid(r):
        return MembershipGrid(tuple(r["centers"]), kind=r["kind"], degree=r["q"])

    if "grids" in rec:
        g = tuple(grid(r) for r in rec["grids"])
    else:
        g = grid(rec)
    if len(rec["centers"]) != rec["h"]:
        raise ConfigurationError("record h does not match its centers")
    return EnfnModel(ModelConfig(n=rec["n"], p=rec["p"], grid=g), rec["weights"])
