"""
Online weight adaptation for the ENFN.

Two rules are available:

* fixed-rate gradient descent on the instantaneous squared error,
  ``w += eta * e * phi``;
* the adaptive tracking/filtering rule
  ``r = alpha * r + |phi|^2``, ``w += e * phi / max(r, eps)``.
  ``alpha = 0`` is a Kaczmarz projection, ``alpha = 1`` a stochastic
  approximation with monotonically growing denominator.

Both rules predict with the pre-update weights.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, ShapeError
from .synapse import EnfnModel, ModelConfig, fuzzify, fuzzify_many

DEFAULT_EPSILON = 1e-9


class Rule(str, Enum):
    ADAPTIVE = "adaptive"
    GRADIENT = "gradient"


@dataclass
class LearnerState:
    rule: Rule
    alpha: float | None = None
    eta: float | None = None
    r: float = DEFAULT_EPSILON
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        self.rule = Rule(self.rule)
        if not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        if self.r < 0:
            raise ConfigurationError("r must be non-negative")
        if self.rule is Rule.ADAPTIVE:
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        elif self.eta is None or not self.eta > 0:
            raise ConfigurationError(f"learning rate must be positive, got {self.eta}")

    @classmethod
    def adaptive(cls, alpha=0.9, epsilon=DEFAULT_EPSILON):
        # r(0) = epsilon: the first step is close to a Kaczmarz projection
        return cls(Rule.ADAPTIVE, alpha=alpha, r=epsilon, epsilon=epsilon)

    @classmethod
    def gradient(cls, eta):
        return cls(Rule.GRADIENT, eta=eta)

    def to_record(self) -> dict:
        rec = {"rule": self.rule.value, "r": self.r, "epsilon": self.epsilon}
        if self.rule is Rule.ADAPTIVE:
            rec["alpha"] = self.alpha
        else:
            rec["eta"] = self.eta
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "LearnerState":
        return cls(rec["rule"], alpha=rec.get("alpha"), eta=rec.get("eta"),
                   r=rec["r"], epsilon=rec["epsilon"])


@dataclass(frozen=True)
class StepOutcome:
    prediction: float
    error: float
    r_after: float


def _step_regressor(model, state, phi, y):
    w = model.weights
    prediction = float(w @ phi)
    error = y - prediction
    if state.rule is Rule.ADAPTIVE:
        state.r = state.alpha * state.r + float(phi @ phi)
        gain = error / max(state.r, state.epsilon)
    else:
        gain = state.eta * error
    w += gain * phi
    return StepOutcome(prediction, error, state.r)


def _check_finite(x, y):
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise ValueError("non-finite input or target")


def step(model: EnfnModel, state: LearnerState, x, y: float) -> StepOutcome:
    """One online update; the model's weights are modified in place."""
    _check_finite(x, y)
    phi = fuzzify(model.config, x)
    return _step_regressor(model, state, phi, float(y))


class OnlineRun:
    """Per-step predictions, errors and denominators of an online pass."""

    def __init__(self, prediction, error, r_after):
        self.prediction = np.asarray(prediction, dtype=float)
        self.error = np.asarray(error, dtype=float)
        self.r_after = np.asarray(r_after, dtype=float)

    def __len__(self):
        return self.prediction.size

    def __getitem__(self, k):
        return StepOutcome(float(self.prediction[k]), float(self.error[k]), float(self.r_after[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))


def run_online(model: EnfnModel, state: LearnerState, X, y, freeze_after=None) -> OnlineRun:
    """Run the learner over a stream of samples.

    Samples with index ``k < freeze_after`` adapt the weights (and ``r``);
    the rest are only predicted. ``freeze_after=None`` adapts on every sample.
    The stream is validated up front, so a bad sample leaves the model and
    state untouched.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ShapeError(f"inputs {X.shape} and targets {y.shape} do not line up")
    N = y.size
    if freeze_after is None:
        freeze_after = N
    if not 0 <= freeze_after <= N:
        raise ValueError(f"freeze_after={freeze_after} outside [0, {N}]")
    if N == 0:
        return OnlineRun([], [], [])
    _check_finite(X, y)

    Phi = fuzzify_many(model.config, X)
    pred = np.empty(N)
    err = np.empty(N)
    rs = np.empty(N)
    for k in range(freeze_after):
        out = _step_regressor(model, state, Phi[k], y[k])
        pred[k], err[k], rs[k] = out.prediction, out.error, out.r_after
    if freeze_after < N:
        pred[freeze_after:] = Phi[freeze_after:] @ model.weights
        err[freeze_after:] = y[freeze_after:] - pred[freeze_after:]
        rs[freeze_after:] = state.r
    return OnlineRun(pred, err, rs)


def batch_least_squares(config: ModelConfig, X, y) -> EnfnModel:
    """Minimum-norm least-squares weights over the whole dataset."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ValueError("empty dataset")
    Phi = fuzzify_many(config, X)
    if Phi.shape[0] != y.size:
        raise ShapeError("inputs and targets differ in length")
    w, *_ = np.linalg.lstsq(Phi, y, rcond=None)
    return EnfnModel(config, w)


def checkpoint(model: EnfnModel, state: LearnerState) -> str:
    rec = {"model": model.to_record(), "learner": state.to_record()}
    return json.dumps(rec, sort_keys=True)


def restore(text: str) -> tuple:
    rec = json.loads(text)
    return EnfnModel.from_record(rec["model"]), LearnerState.from_record(rec["learner"])
