import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from enfn import ConfigurationError, checkpoint
from enfn.cli import main
from enfn.harness import (PRESETS, ExperimentConfig, build_config, config_echo, emit_table,
                          emit_trace, parse_config_text, parse_table_csv, prepare_data,
                          run_experiment, run_single)
from enfn.learning import LearnerState, run_online
from enfn.signals import SignalSpec, read_series_csv
from enfn.synapse import EnfnModel


@pytest.fixture(scope="module")
def n4_report():
    return run_experiment(PRESETS["narendra4"])


def small_config(**kw):
    base = ExperimentConfig(SignalSpec("narendra1", 300), train_len=150, test_len=100,
                            p_sweep=(0, 2))
    return replace(base, **kw)


def test_presets_match_benchmark_setup():
    lengths = {"mackey-glass": (12000, 7000, 5000), "narendra1": (2000, 500, 1500),
               "narendra2": (1500, 750, 750), "narendra3": (4000, 2000, 2000),
               "narendra4": (500, 250, 250)}
    for name, (n, tr, te) in lengths.items():
        cfg = PRESETS[name]
        assert (cfg.signal.n_points, cfg.train_len, cfg.test_len) == (n, tr, te)
        assert cfg.h == 3 and cfg.alpha == 0.9 and cfg.p_sweep == (0, 1, 2, 3, 5)


def test_split_counts_targets():
    data = prepare_data(PRESETS["mackey-glass"])
    idx = data.dataset.target_index
    assert idx[data.n_train - 1] == 6999 and idx[data.n_train] == 7000
    assert data.n_test == 5000 and idx[data.n_train + data.n_test - 1] == 11999


def test_report_shape(n4_report):
    r = n4_report
    assert [row.p for row in r.rows] == [0, 1, 2, 3, 5]
    assert r.trace.shape == (250, 4)
    assert r.best_p == min(r.rows, key=lambda row: row.smape).p
    for row in r.rows:
        assert abs(row.rmse ** 2 - row.mse) < 1e-12


def test_invalid_configs():
    with pytest.raises(ConfigurationError):
        small_config(test_len=0)
    with pytest.raises(ConfigurationError):
        small_config(train_len=250, test_len=100)
    with pytest.raises(ConfigurationError):
        run_experiment(small_config(train_len=3))
    with pytest.raises(ConfigurationError):
        small_config(alpha=1.2)
    with pytest.raises(ConfigurationError):
        small_config(membership="bspline", q=5)


def test_determinism():
    a, b = run_experiment(small_config()), run_experiment(small_config())
    assert emit_table(a) == emit_table(b)
    assert emit_trace(a) == emit_trace(b)


def test_sweep_independence():
    cfg = small_config(p_sweep=(0, 1, 2, 3))
    full = run_experiment(cfg)
    for row in full.rows:
        alone = run_experiment(replace(cfg, p_sweep=(row.p,)))
        assert alone.rows == [row]


def test_frozen_suffix_purity():
    cfg = PRESETS["narendra4"]
    data = prepare_data(cfg)
    ds = data.dataset
    model = EnfnModel(cfg.model_config(ds.X.shape[1], 2))
    state = LearnerState.adaptive(cfg.alpha)
    run_online(model, state, *data.train)
    before = checkpoint(model, state)
    run_online(model, state, *data.test, freeze_after=0)
    assert checkpoint(model, state) == before
    row, _, _ = run_single(cfg, 2, data)
    assert row.mse == pytest.approx(np.mean((data.test[1] - model.predict_many(data.test[0])) ** 2),
                                    rel=0, abs=0)


def test_emit_table(n4_report):
    text, csv_text = emit_table(n4_report)
    lines = csv_text.splitlines()
    assert lines[0] == "p,RMSE_test,MSE_test,SMAPE_test"
    assert len(lines) == 6 and len(text.splitlines()) == 6
    assert all(len(field.split(".")[1]) == 7 for field in lines[1].split(",")[1:])
    parsed = parse_table_csv(csv_text)
    for got, row in zip(parsed, n4_report.rows):
        assert got.p == row.p
        assert got.rmse == float(f"{row.rmse:.7f}")
        assert got.smape == float(f"{row.smape:.7f}")


def test_emit_table_edge_cases():
    empty = run_experiment(small_config(p_sweep=()))
    text, csv_text = emit_table(empty)
    assert csv_text.splitlines() == ["p,RMSE_test,MSE_test,SMAPE_test"]
    assert empty.best_p is None and emit_trace(empty).splitlines() == ["k,target,prediction,error"]
    one = run_experiment(small_config(p_sweep=(1,)))
    assert len(emit_table(one)[1].splitlines()) == 2


def test_emit_trace(n4_report):
    rows = [line.split(",") for line in emit_trace(n4_report).splitlines()]
    assert rows[0] == ["k", "target", "prediction", "error"]
    assert len(rows) - 1 == 250
    assert [int(r[0]) for r in rows[1:]] == list(range(250, 500))
    for _, t, p, e in rows[1:]:
        assert float(e) == float(t) - float(p)


def test_config_text_round_trip():
    cfg = replace(PRESETS["narendra2"], alpha=0.75, p_sweep=(0, 3), membership="bspline", q=3)
    again = build_config(parse_config_text(config_echo(cfg)))
    assert again == cfg


def test_config_file_parsing():
    text = """
    # narendra4, shorter sweep
    preset = narendra4
    p-sweep = 0 2
    alpha = 0.5
    """
    cfg = build_config(parse_config_text(text))
    assert cfg.p_sweep == (0, 2) and cfg.alpha == 0.5 and cfg.signal.kind == "narendra4"
    with pytest.raises(ConfigurationError):
        build_config({"preset": "nope"})
    with pytest.raises(ConfigurationError):
        build_config({"preset": "narendra4", "bogus": "1"})
    with pytest.raises(ConfigurationError):
        build_config({"signal": "narendra4"})
    with pytest.raises(ConfigurationError):
        parse_config_text("just words")


def test_bspline_membership_runs():
    r = run_experiment(small_config(membership="bspline", q=3))
    assert len(r.rows) == 2 and all(np.isfinite(row.mse) for row in r.rows)


# -- CLI ---------------------------------------------------------------------

def test_cli_run_writes_outputs(tmp_path, capsys):
    assert main(["run", "narendra4", "--p-sweep", "0", "2", "--out", str(tmp_path)]) == 0
    for name in ("table.csv", "table.txt", "trace.csv", "config.echo"):
        assert (tmp_path / name).is_file()
    assert len((tmp_path / "table.csv").read_text().splitlines()) == 3
    assert "p=2" in capsys.readouterr().out
    # config.echo is itself a valid config file
    out2 = tmp_path / "again"
    assert main(["run", str(tmp_path / "config.echo"), "--out", str(out2)]) == 0
    assert (out2 / "table.csv").read_bytes() == (tmp_path / "table.csv").read_bytes()


def test_cli_flags_override_file(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("preset = narendra4\nalpha = 0.5\np_sweep = 0 1\n")
    out = tmp_path / "o"
    assert main(["run", str(cfg), "--alpha", "0.8", "--h", "4", "--out", str(out)]) == 0
    echo = build_config(parse_config_text((out / "config.echo").read_text()))
    assert echo.alpha == 0.8 and echo.h == 4 and echo.p_sweep == (0, 1)


def test_cli_errors(tmp_path, capsys):
    assert main(["run", "no-such-thing"]) != 0
    assert main(["run", "narendra4", "--alpha", "3", "--out", str(tmp_path)]) != 0
    assert main(["run", "narendra4", "--membership", "bspline", "--q", "9",
                 "--out", str(tmp_path)]) != 0
    assert "error" in capsys.readouterr().err


def test_cli_gen_and_ls(tmp_path, capsys):
    path = tmp_path / "n2.csv"
    assert main(["gen", "narendra2", "--out", str(path)]) == 0
    y, u = read_series_csv(path)
    assert y.size == 1500 and u is not None
    assert main(["ls-presets"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in PRESETS)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "enfn", "ls-presets"], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and "mackey-glass" in proc.stdout
