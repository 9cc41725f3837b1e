"""
Prediction experiments: online training on a prefix, frozen-weight testing on
the following segment, one fresh model per inference order in the sweep.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import ConfigurationError
from .learning import DEFAULT_EPSILON, LearnerState, run_online
from .membership import Kind, make_uniform_centers
from .metrics import MetricRow
from .signals import SignalSpec, WindowSpec, windowize
from .synapse import EnfnModel, ModelConfig


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    ``train_len`` and ``test_len`` count positions in the generated series:
    samples whose target lies before ``train_len`` train the model, the next
    ``test_len`` targets are predicted with frozen weights.
    """

    signal: SignalSpec
    train_len: int
    test_len: int
    window: WindowSpec = WindowSpec()
    h: int = 3
    p_sweep: tuple = (0, 1, 2, 3, 5)
    alpha: float = 0.9
    membership: str = "triangular"
    q: int = 2
    epsilon: float = DEFAULT_EPSILON
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "p_sweep", tuple(int(p) for p in self.p_sweep))
        if any(p < 0 for p in self.p_sweep):
            raise ConfigurationError("inference orders must be >= 0")
        if len(set(self.p_sweep)) != len(self.p_sweep):
            raise ConfigurationError("duplicate entries in the p sweep")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.test_len < 1:
            raise ConfigurationError("test_len must be >= 1")
        if self.train_len < 1:
            raise ConfigurationError("train_len must be >= 1")
        if self.train_len + self.test_len > self.signal.n_points:
            raise ConfigurationError(
                f"train_len + test_len = {self.train_len + self.test_len} exceeds "
                f"the {self.signal.n_points}-point series"
            )
        # validates h / membership / q
        self.grid()

    def grid(self):
        return make_uniform_centers(self.h, kind=Kind(self.membership), degree=self.q)

    def model_config(self, n, p):
        return ModelConfig(n=n, p=p, grid=self.grid())


PRESETS = {
    "mackey-glass": ExperimentConfig(
        SignalSpec("mackey-glass", 12000), train_len=7000, test_len=5000, name="mackey-glass"),
    "narendra1": ExperimentConfig(
        SignalSpec("narendra1", 2000), train_len=500, test_len=1500, name="narendra1"),
    "narendra2": ExperimentConfig(
        SignalSpec("narendra2", 1500), train_len=750, test_len=750,
        window=WindowSpec(lags=(2, 1, 0), exo_lags=(0, -1)), name="narendra2"),
    # the printed (in-denominator) form decays to exactly zero within ~1100 steps
    "narendra3": ExperimentConfig(
        SignalSpec("narendra3", 4000, additive_variant=True), train_len=2000, test_len=2000,
        name="narendra3"),
    "narendra4": ExperimentConfig(
        SignalSpec("narendra4", 500), train_len=250, test_len=250, name="narendra4"),
}


@dataclass
class PreparedData:
    dataset: object
    n_train: int
    n_test: int

    @property
    def train(self):
        d = self.dataset
        return d.X[:self.n_train], d.y[:self.n_train]

    @property
    def test(self):
        d = self.dataset
        sl = slice(self.n_train, self.n_train + self.n_test)
        return d.X[sl], d.y[sl]


def prepare_data(config: ExperimentConfig) -> PreparedData:
    """Generate the signal, window it and locate the train/test split."""
    series, exo = config.signal.generate()
    w = config.window
    first_target = w.max_lag(exo is not None) + w.horizon
    n_train = config.train_len - first_target
    if n_train < 1:
        raise ConfigurationError(
            f"train_len={config.train_len} leaves no training samples "
            f"(first target index is {first_target})"
        )
    ds = windowize(series, exo, w, train_len=n_train)
    if n_train + config.test_len > len(ds):
        raise ConfigurationError("series too short for the requested test segment")
    return PreparedData(ds, n_train, config.test_len)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    best_p: int | None
    trace: np.ndarray  # columns k, target, prediction, error
    duration: float = field(default=0.0, compare=False)
    models: dict = field(default_factory=dict, repr=False, compare=False)


def run_single(config: ExperimentConfig, p: int, data: PreparedData | None = None):
    """Train and test one model of order ``p``. Returns ``(row, model, run)``."""
    if data is None:
        data = prepare_data(config)
    ds = data.dataset
    end = data.n_train + data.n_test
    model = EnfnModel(config.model_config(ds.X.shape[1], p))
    state = LearnerState.adaptive(config.alpha, epsilon=config.epsilon)
    run = run_online(model, state, ds.X[:end], ds.y[:end], freeze_after=data.n_train)
    targets = ds.y[data.n_train:end]
    preds = run.prediction[data.n_train:]
    return MetricRow.from_residuals(p, targets, preds), model, run


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    t0 = time.perf_counter()
    data = prepare_data(config)
    rows, runs, models = [], {}, {}
    for p in config.p_sweep:
        row, model, run = run_single(config, p, data)
        rows.append(row)
        runs[p] = run
        models[p] = model

    best_p = None
    trace = np.empty((0, 4))
    if rows:
        best_p = min(rows, key=lambda r: (r.smape, r.p)).p
        end = data.n_train + data.n_test
        run = runs[best_p]
        trace = np.column_stack([
            data.dataset.target_index[data.n_train:end],
            data.dataset.y[data.n_train:end],
            run.prediction[data.n_train:],
            run.error[data.n_train:],
        ])
    return ExperimentReport(config, rows, best_p, trace, time.perf_counter() - t0, models)


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

TABLE_COLUMNS = ("p", "RMSE_test", "MSE_test", "SMAPE_test")


def emit_table(report: ExperimentReport):
    """Return ``(text, csv)`` renderings of the metric rows (7 decimals)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    lines = [f"{'':6}{'RMSEtest':>14}{'MSEtest':>14}{'SMAPEtest':>14}"]
    for r in report.rows:
        vals = [f"{r.rmse:.7f}", f"{r.mse:.7f}", f"{r.smape:.7f}"]
        w.writerow([r.p] + vals)
        lines.append(f"{'p=' + str(r.p):6}" + "".join(f"{v:>14}" for v in vals))
    return "\n".join(lines) + "\n", buf.getvalue()


def parse_table_csv(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != TABLE_COLUMNS:
        raise ValueError("not a metric table")
    return [MetricRow(int(r[0]), float(r[1]), float(r[2]), float(r[3])) for r in rows[1:]]


def emit_trace(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "target", "prediction", "error"])
    for k, t, p, e in report.trace:
        w.writerow([int(k), format(t, ".17g"), format(p, ".17g"), format(e, ".17g")])
    return buf.getvalue()


# --------------------------------------------------------------------------
# Flat key=value config files
# --------------------------------------------------------------------------

def _ints(text):
    text = text.strip()
    return tuple(int(v) for v in text.replace(",", " ").split()) if text else ()


def _bool(text):
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


_SIGNAL_KEYS = {"signal": ("kind", str), "n_points": ("n_points", int), "tau": ("tau", float),
                "dt": ("dt", float), "y0": ("y0", float),
                "additive_variant": ("additive_variant", _bool)}
_WINDOW_KEYS = {"lags": ("lags", _ints), "exo_lags": ("exo_lags", _ints),
                "horizon": ("horizon", int)}
_TOP_KEYS = {"train_len": int, "test_len": int, "h": int, "p_sweep": _ints, "alpha": float,
             "membership": str, "q": int, "epsilon": float, "name": str}


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_config(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Apply string overrides (from a file or CLI flags) on top of a config.

    A ``preset`` key selects the base; without it ``base`` or, failing that,
    a complete description (``signal``, ``n_points``, ``train_len``,
    ``test_len``) is required.
    """
    values = dict(values)
    preset = values.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(f"unknown preset {preset!r}")
        base = PRESETS[preset]
    unknown = set(values) - set(_SIGNAL_KEYS) - set(_WINDOW_KEYS) - set(_TOP_KEYS) - {"out"}
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")

    try:
        sig_kw = {f: conv(values[k]) for k, (f, conv) in _SIGNAL_KEYS.items() if k in values}
        win_kw = {f: conv(values[k]) for k, (f, conv) in _WINDOW_KEYS.items() if k in values}
        top_kw = {k: conv(values[k]) for k, conv in _TOP_KEYS.items() if k in values}
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    if "exo_lags" in win_kw and not win_kw["exo_lags"]:
        win_kw["exo_lags"] = None

    if base is None:
        missing = {"signal", "n_points", "train_len", "test_len"} - set(values)
        if missing:
            raise ConfigurationError(f"missing config keys: {', '.join(sorted(missing))}")
        signal = SignalSpec(**sig_kw)
        return ExperimentConfig(signal=signal, window=WindowSpec(**win_kw), **top_kw)

    signal = replace(base.signal, **sig_kw) if sig_kw else base.signal
    window = replace(base.window, **win_kw) if win_kw else base.window
    return replace(base, signal=signal, window=window, **top_kw)


def _fmt(v):
    if isinstance(v, tuple):
        return " ".join(str(x) for x in v)
    if v is None:
        return ""
    return str(v)


def config_echo(config: ExperimentConfig) -> str:
    """Flat key=value dump; feeding it back to :func:`build_config` round-trips."""
    s, w = config.signal, config.window
    lines = [f"signal = {s.kind}", f"n_points = {s.n_points}", f"tau = {s.tau!r}",
             f"dt = {s.dt!r}", f"additive_variant = {s.additive_variant}",
             f"lags = {_fmt(w.lags)}", f"exo_lags = {_fmt(w.exo_lags)}",
             f"horizon = {w.horizon}"]
    if s.y0 is not None:
        lines.append(f"y0 = {s.y0!r}")
    for f in fields(ExperimentConfig):
        if f.name in ("signal", "window"):
            continue
        v = getattr(config, f.name)
        lines.append(f"{f.name} = {v!r}" if isinstance(v, float) else f"{f.name} = {_fmt(v)}")
    return "\n".join(lines) + "\n"
