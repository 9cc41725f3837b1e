"""Error measures for the test segment of an experiment."""
from dataclasses import dataclass

import numpy as np

SMAPE_GUARD = 1e-12


def _pair(targets, predictions):
    t = np.asarray(targets, dtype=float)
    p = np.asarray(predictions, dtype=float)
    if t.shape != p.shape or t.ndim != 1 or t.size == 0:
        raise ValueError("targets and predictions must be equal-length non-empty 1-D arrays")
    return t, p


def mse(targets, predictions) -> float:
    t, p = _pair(targets, predictions)
    return float(np.mean((t - p) ** 2))


def rmse(targets, predictions) -> float:
    return float(np.sqrt(mse(targets, predictions)))


def smape(targets, predictions) -> float:
    """Symmetric MAPE in percent, ``100/N * sum |y - yh| / ((|y| + |yh|) / 2)``.

    Pairs with ``|y| + |yh| < 1e-12`` contribute zero. The result lies in
    [0, 200].
    """
    t, p = _pair(targets, predictions)
    denom = np.abs(t) + np.abs(p)
    ok = denom >= SMAPE_GUARD
    terms = np.zeros_like(t)
    terms[ok] = 2.0 * np.abs(t[ok] - p[ok]) / denom[ok]
    return float(100.0 * terms.mean())


@dataclass(frozen=True)
class MetricRow:
    p: int
    rmse: float
    mse: float
    smape: float

    @classmethod
    def from_residuals(cls, p, targets, predictions):
        m = mse(targets, predictions)
        return cls(p=p, rmse=float(np.sqrt(m)), mse=m, smape=smape(targets, predictions))
