"""
Benchmark signal generators and regressor windowing.

Generators are deterministic: the Mackey-Glass delay equation and four
discrete-time plants from the Narendra-Parthasarathy identification family.
``windowize`` turns a series into scaled (x, y) pairs for one-step-ahead
prediction.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

DENOMINATOR_GUARD = 1e-6


# --------------------------------------------------------------------------
# Mackey-Glass
# --------------------------------------------------------------------------

def _mg_rhs(y, y_delayed):
    return 0.2 * y_delayed / (1.0 + y_delayed ** 10) - 0.1 * y


def gen_mackey_glass(tau=17.0, dt=0.1, n_points=12000, *, history=1.2, transient=None):
    """Sample the Mackey-Glass delay equation.

    ``y'(t) = 0.2 y(t - tau) / (1 + y(t - tau)**10) - 0.1 y(t)``, integrated
    with fixed-step RK4. Delayed values between grid points are linearly
    interpolated from the computed history; ``y(t) = history`` for ``t <= 0``.

    Parameters
    ----------
    tau : float
        Delay. 17 gives the usual chaotic regime.
    dt : float
        Integration step, also the sampling interval of the output.
    n_points : int
        Number of samples returned.
    history : float
        Constant pre-history.
    transient : float, optional
        Time discarded before the first emitted sample. Defaults to
        ``100 * tau``.

    Returns
    -------
    numpy.ndarray
        ``y(T0 + i * dt)`` for ``i = 0 .. n_points - 1``.
    """
    if not tau > 0 or not dt > 0:
        raise ConfigurationError("tau and dt must be positive")
    if tau < dt:
        raise ConfigurationError("tau must be at least one integration step")
    if n_points < 1:
        raise ConfigurationError("n_points must be >= 1")
    if transient is None:
        transient = 100.0 * tau
    skip = int(round(transient / dt))
    total = skip + n_points

    delay = tau / dt
    if abs(delay - round(delay)) < 1e-9:
        delay = float(round(delay))

    ys = np.empty(total)
    ys[0] = history

    def delayed(pos):
        # pos is a (fractional) grid index
        if pos <= 0:
            return history
        i = int(math.floor(pos))
        frac = pos - i
        if frac == 0.0:
            return ys[i]
        return ys[i] * (1.0 - frac) + ys[i + 1] * frac

    for m in range(total - 1):
        y = ys[m]
        d0 = delayed(m - delay)
        dh = delayed(m + 0.5 - delay)
        d1 = delayed(m + 1 - delay)
        k1 = _mg_rhs(y, d0)
        k2 = _mg_rhs(y + 0.5 * dt * k1, dh)
        k3 = _mg_rhs(y + 0.5 * dt * k2, dh)
        k4 = _mg_rhs(y + dt * k3, d1)
        ys[m + 1] = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return ys[skip:].copy()


# --------------------------------------------------------------------------
# Narendra plants
# --------------------------------------------------------------------------

def narendra1_forcing(k):
    if k <= 500:
        return math.sin(math.pi * k / 250) ** 3
    return 0.8 * math.sin(math.pi * k / 250) + 0.2 * math.sin(math.pi * k / 25)


def gen_narendra1(n_points=2000, y0=0.0):
    """``y(k+1) = y(k) / (1 + y(k)^2) + f(k)``.

    ``f`` is a cubed sinusoid up to k = 500 and a two-tone mix afterwards.
    """
    if n_points < 1:
        raise ConfigurationError("n_points must be >= 1")
    y = np.empty(n_points)
    y[0] = y0
    for k in range(n_points - 1):
        y[k + 1] = y[k] / (1.0 + y[k] ** 2) + narendra1_forcing(k)
    return y


def narendra2_input(k):
    if k < 250:
        return math.sin(math.pi * k / 25)
    if k <= 500:
        return 1.0
    if k <= 750:
        return -1.0
    return (0.4 * math.sin(math.pi * k / 25) + 0.1 * math.sin(math.pi * k / 32)
            + 0.6 * math.sin(math.pi * k / 10))


def narendra2_map(x1, x2, x3, x4, x5):
    return (x1 * x2 * x4 * x5 * (x3 - 1.0) + x4) / (1.0 + x3 ** 2 + x2 ** 2)


def gen_narendra2(n_points=1500, u=None):
    """Third-order plant ``y(k+3) = F(y(k+2), y(k+1), y(k), u(k+3), u(k+2))``.

    Returns ``(u, y)``. ``u`` defaults to the piecewise test input
    (sinusoid, +1 block, -1 block, three-tone mix); pass an array to drive
    the plant with something else.
    """
    if n_points < 4:
        raise ConfigurationError("n_points must be >= 4")
    if u is None:
        u = np.array([narendra2_input(k) for k in range(n_points)])
    else:
        u = np.asarray(u, dtype=float)
        if u.shape != (n_points,):
            raise ConfigurationError("input series must have n_points samples")
    y = np.zeros(n_points)
    for k in range(n_points - 3):
        y[k + 3] = narendra2_map(y[k + 2], y[k + 1], y[k], u[k + 3], u[k + 2])
    return u, y


def narendra3_forcing(k):
    if k < 2000:
        return (math.cos(2 * math.pi * k / 25) + math.cos(2 * math.pi * k / 2)) ** 3
    return (math.sin(2 * math.pi * k / 250) + math.sin(2 * math.pi * k / 10)) ** 3


def narendra4_forcing(k):
    return math.sin(2 * math.pi * k / 25) + math.sin(2 * math.pi * k / 10)


def _perturbed_plant(n_points, forcing, y0, additive):
    if n_points < 1:
        raise ConfigurationError("n_points must be >= 1")
    y = np.empty(n_points)
    y[0] = y0
    hits = 0
    for k in range(n_points - 1):
        if additive:
            y[k + 1] = y[k] / (1.0 + y[k] ** 2) + forcing(k)
            continue
        den = 1.0 + y[k] ** 2 + forcing(k)
        if abs(den) < DENOMINATOR_GUARD:
            den = math.copysign(DENOMINATOR_GUARD, den)
            hits += 1
        y[k + 1] = y[k] / den
    return y, hits


def gen_narendra3(n_points=4000, y0=0.1, additive_variant=False, return_guard_hits=False):
    """``y(k+1) = y(k) / (1 + y(k)^2 + f(k))`` with a cubed two-tone ``f``.

    With ``additive_variant`` the forcing is added instead:
    ``y(k+1) = y(k) / (1 + y(k)^2) + f(k)``. Denominators smaller than
    1e-6 in magnitude are clamped; ``return_guard_hits`` also returns how
    often that happened.
    """
    y, hits = _perturbed_plant(n_points, narendra3_forcing, y0, additive_variant)
    return (y, hits) if return_guard_hits else y


def gen_narendra4(n_points=500, y0=0.1, additive_variant=False, return_guard_hits=False):
    """``y(k+1) = y(k) / (1 + y(k)^2 + sin(2 pi k/25) + sin(2 pi k/10))``."""
    y, hits = _perturbed_plant(n_points, narendra4_forcing, y0, additive_variant)
    return (y, hits) if return_guard_hits else y


# --------------------------------------------------------------------------
# Declarative signal description
# --------------------------------------------------------------------------

SIGNAL_KINDS = ("mackey-glass", "narendra1", "narendra2", "narendra3", "narendra4")


@dataclass(frozen=True)
class SignalSpec:
    kind: str
    n_points: int
    tau: float = 17.0
    dt: float = 0.1
    y0: float | None = None
    additive_variant: bool = False

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ConfigurationError(f"unknown signal kind {self.kind!r}")
        if int(self.n_points) != self.n_points or self.n_points < 1:
            raise ConfigurationError("n_points must be a positive integer")

    def generate(self):
        """Return ``(series, exogenous)``; ``exogenous`` is None except for narendra2."""
        kw = {} if self.y0 is None else {"y0": self.y0}
        if self.kind == "mackey-glass":
            return gen_mackey_glass(self.tau, self.dt, self.n_points), None
        if self.kind == "narendra1":
            return gen_narendra1(self.n_points, **kw), None
        if self.kind == "narendra2":
            u, y = gen_narendra2(self.n_points)
            return y, u
        gen = gen_narendra3 if self.kind == "narendra3" else gen_narendra4
        return gen(self.n_points, additive_variant=self.additive_variant, **kw), None


# --------------------------------------------------------------------------
# Windowing
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowSpec:
    """Which past values form the regressor.

    ``lags`` are offsets into the past of the main series (0 = current
    value). ``exo_lags`` do the same for the exogenous series and may go
    down to ``-horizon`` (a known future input). ``None`` reuses ``lags``.
    """

    lags: tuple = (3, 2, 1, 0)
    horizon: int = 1
    exo_lags: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "lags", tuple(int(v) for v in self.lags))
        if self.exo_lags is not None:
            object.__setattr__(self, "exo_lags", tuple(int(v) for v in self.exo_lags))
        if self.horizon < 1:
            raise ConfigurationError("horizon must be >= 1")
        if not self.lags or min(self.lags) < 0:
            raise ConfigurationError("lags must be non-empty and non-negative")
        for name, lags in (("lags", self.lags), ("exo_lags", self.exo_lags)):
            if lags is None:
                continue
            if any(a <= b for a, b in zip(lags, lags[1:])):
                raise ConfigurationError(f"{name} must be distinct and sorted descending")
        if self.exo_lags is not None and min(self.exo_lags) < -self.horizon:
            raise ConfigurationError("exogenous lead cannot exceed the horizon")

    def max_lag(self, exogenous=False) -> int:
        lags = list(self.lags)
        if exogenous:
            lags += list(self.exo_lags if self.exo_lags is not None else self.lags)
        return max(lags)


@dataclass
class Dataset:
    """Windowed samples. ``X`` is scaled; ``X_raw`` is not.

    ``target_index[j]`` is the position in the source series of ``y[j]``.
    """

    X: np.ndarray
    y: np.ndarray
    target_index: np.ndarray
    X_raw: np.ndarray
    x_min: np.ndarray = field(repr=False)
    x_max: np.ndarray = field(repr=False)

    def __len__(self):
        return self.y.size


def minmax_scale(X, x_min, x_max):
    span = x_max - x_min
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (X - x_min) / safe, 0.5)


def windowize(series, exogenous=None, spec=WindowSpec(), train_len=None) -> Dataset:
    """Build one-step-ahead (x, y) pairs and min-max scale the inputs.

    Row ``j`` is anchored at time ``k = j + max_lag``: inputs
    ``series[k - lag]`` for each lag, then ``exogenous[k - lag]`` for each
    exogenous lag; target ``series[k + horizon]``.

    Scaling statistics come from the first ``train_len`` rows only (all rows
    when None). A column with zero range on that prefix maps to 0.5.
    """
    s = np.asarray(series, dtype=float)
    has_exo = exogenous is not None
    m = spec.max_lag(has_exo)
    n_pairs = s.size - m - spec.horizon
    if n_pairs < 1:
        raise ConfigurationError(
            f"series of length {s.size} too short for max lag {m} and horizon {spec.horizon}"
        )
    anchors = np.arange(m, m + n_pairs)
    cols = [s[anchors - lag] for lag in spec.lags]
    if has_exo:
        u = np.asarray(exogenous, dtype=float)
        if u.shape != s.shape:
            raise ConfigurationError("exogenous series must match the main series length")
        exo_lags = spec.exo_lags if spec.exo_lags is not None else spec.lags
        cols += [u[anchors - lag] for lag in exo_lags]
    X_raw = np.column_stack(cols)
    target_index = anchors + spec.horizon
    y = s[target_index]

    if train_len is None:
        train_len = n_pairs
    if not 1 <= train_len <= n_pairs:
        raise ConfigurationError(f"train_len={train_len} outside [1, {n_pairs}]")
    x_min = X_raw[:train_len].min(axis=0)
    x_max = X_raw[:train_len].max(axis=0)
    return Dataset(minmax_scale(X_raw, x_min, x_max), y, target_index, X_raw, x_min, x_max)


# --------------------------------------------------------------------------
# CSV export
# --------------------------------------------------------------------------

def write_series_csv(path, series, exogenous=None):
    """Write ``k,value[,u]`` rows with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "value"] + (["u"] if exogenous is not None else []))
        for k, v in enumerate(series):
            row = [k, format(float(v), ".17g")]
            if exogenous is not None:
                row.append(format(float(exogenous[k]), ".17g"))
            w.writerow(row)


def read_series_csv(path):
    """Inverse of :func:`write_series_csv`; returns ``(series, exogenous or None)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    values = np.array([float(r[1]) for r in body])
    if "u" in header:
        return values, np.array([float(r[2]) for r in body])
    return values, None
