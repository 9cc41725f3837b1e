import math

import numpy as np
import pytest

from enfn import ConfigurationError
from enfn.signals import (DENOMINATOR_GUARD, SignalSpec, WindowSpec, gen_mackey_glass,
                          gen_narendra1, gen_narendra2, gen_narendra3, gen_narendra4,
                          read_series_csv, windowize, write_series_csv)

# Duplicate implementations written straight from the plant equations.


def oracle_narendra1(n):
    y = [0.0]
    for k in range(n - 1):
        if k <= 500:
            f = math.sin(math.pi * k / 250) ** 3
        else:
            f = 0.8 * math.sin(math.pi * k / 250) + 0.2 * math.sin(math.pi * k / 25)
        y.append(y[k] / (1.0 + y[k] ** 2) + f)
    return np.array(y)


def oracle_narendra2(n):
    def u(k):
        if k < 250:
            return math.sin(math.pi * k / 25)
        elif 250 <= k <= 500:
            return 1.0
        elif 501 <= k <= 750:
            return -1.0
        return (0.4 * math.sin(math.pi * k / 25) + 0.1 * math.sin(math.pi * k / 32)
                + 0.6 * math.sin(math.pi * k / 10))

    us = [u(k) for k in range(n)]
    y = [0.0, 0.0, 0.0]
    for k in range(n - 3):
        x1, x2, x3, x4, x5 = y[k + 2], y[k + 1], y[k], us[k + 3], us[k + 2]
        y.append((x1 * x2 * x4 * x5 * (x3 - 1.0) + x4) / (1.0 + x3 ** 2 + x2 ** 2))
    return np.array(us), np.array(y)


def oracle_denominator_plant(n, f, y0=0.1):
    y = [y0]
    for k in range(n - 1):
        den = 1.0 + y[k] ** 2 + f(k)
        if abs(den) < 1e-6:
            den = math.copysign(1e-6, den)
        y.append(y[k] / den)
    return np.array(y)


def f3(k):
    if k < 2000:
        return (math.cos(2 * math.pi * k / 25) + math.cos(2 * math.pi * k / 2)) ** 3
    return (math.sin(2 * math.pi * k / 250) + math.sin(2 * math.pi * k / 10)) ** 3


def f4(k):
    return math.sin(2 * math.pi * k / 25) + math.sin(2 * math.pi * k / 10)


# -- Mackey-Glass -----------------------------------------------------------

def test_mackey_glass_equilibrium():
    y = gen_mackey_glass(17, 0.1, 101, history=1.0, transient=0)
    assert np.max(np.abs(y - 1.0)) < 1e-6


def test_mackey_glass_attractor_band():
    y = gen_mackey_glass(17, 0.1, 12000)
    assert y.size == 12000
    assert y.min() > 0 and y.max() < 1.6


def test_mackey_glass_step_convergence():
    # chaos amplifies step differences, so compare over ~6 delays from t = 0
    n = 1001
    coarse = gen_mackey_glass(17, 0.1, n, transient=0)
    fine = gen_mackey_glass(17, 0.05, 2 * n - 1, transient=0)[::2]
    assert np.max(np.abs(coarse - fine)) < 1e-4


def test_mackey_glass_validation():
    for tau, dt in [(0, 0.1), (17, 0), (-1, 0.1)]:
        with pytest.raises(ConfigurationError):
            gen_mackey_glass(tau, dt, 10)


# -- Narendra plants --------------------------------------------------------

def test_narendra1():
    y = gen_narendra1(2000)
    assert y[0] == 0.0 and y[1] == 0.0
    assert np.max(np.abs(y)) <= 1.5
    np.testing.assert_array_equal(y, oracle_narendra1(2000))


def test_narendra2():
    u, y = gen_narendra2(1500)
    ou, oy = oracle_narendra2(1500)
    np.testing.assert_array_equal(u, ou)
    np.testing.assert_array_equal(y, oy)
    _, zeros = gen_narendra2(50, u=np.zeros(50))
    assert not zeros.any()


def test_narendra2_constant_block():
    u, y = gen_narendra2(1500)
    for k in range(300, 497):
        x1, x2, x3 = y[k + 2], y[k + 1], y[k]
        assert y[k + 3] == pytest.approx((x1 * x2 * (x3 - 1) + 1) / (1 + x3 ** 2 + x2 ** 2),
                                         rel=1e-14, abs=1e-15)


def test_narendra3():
    y, hits = gen_narendra3(4000, return_guard_hits=True)
    np.testing.assert_array_equal(y, oracle_denominator_plant(4000, f3))
    assert hits == 0
    assert not gen_narendra3(100, y0=0.0).any()
    assert max(abs(f3(k)) for k in range(4000)) <= 8


def test_narendra3_additive_variant():
    y = gen_narendra3(4000, additive_variant=True)
    ref = [0.1]
    for k in range(3999):
        ref.append(ref[k] / (1.0 + ref[k] ** 2) + f3(k))
    np.testing.assert_array_equal(y, ref)
    assert np.abs(y[2000:]).max() > 1  # does not collapse like the in-denominator form


def test_narendra4():
    y, hits = gen_narendra4(500, return_guard_hits=True)
    np.testing.assert_array_equal(y, oracle_denominator_plant(500, f4))
    assert y[1] == 0.1 / (1 + 0.1 ** 2)
    # the guard is never needed over the 500-step run
    dens = [abs(1 + y[k] ** 2 + f4(k)) for k in range(499)]
    assert hits == 0 and min(dens) > DENOMINATOR_GUARD


def test_guard_path():
    from enfn.signals import _perturbed_plant
    # 1 + 1 - 2 = 0 on the first step only
    y, hits = _perturbed_plant(3, lambda k: -2.0, 1.0, False)
    assert hits == 1 and y[1] == 1.0 / DENOMINATOR_GUARD


@pytest.mark.parametrize("kind, n", [("mackey-glass", 300), ("narendra1", 2000),
                                     ("narendra2", 1500), ("narendra3", 4000),
                                     ("narendra4", 500)])
def test_generators_are_pure(kind, n):
    a, ua = SignalSpec(kind, n).generate()
    b, ub = SignalSpec(kind, n).generate()
    assert a.tobytes() == b.tobytes() and a.size == n
    assert (ua is None) == (kind != "narendra2")


# -- windowing --------------------------------------------------------------

def test_windowize_pairs():
    ds = windowize([1, 2, 3, 4, 5, 6], spec=WindowSpec(lags=(1, 0)))
    np.testing.assert_array_equal(ds.X_raw, [[1, 2], [2, 3], [3, 4], [4, 5]])
    np.testing.assert_array_equal(ds.y, [3, 4, 5, 6])
    np.testing.assert_array_equal(ds.target_index, [2, 3, 4, 5])


@pytest.mark.parametrize("lags, horizon", [((3, 2, 1, 0), 1), ((5, 0), 2), ((0,), 3)])
def test_windowize_count(lags, horizon):
    s = np.arange(40.0)
    ds = windowize(s, spec=WindowSpec(lags, horizon))
    assert len(ds) == 40 - max(lags) - horizon
    np.testing.assert_array_equal(ds.y, s[ds.target_index])


def test_windowize_constant_series():
    ds = windowize(np.full(10, 3.3))
    assert np.all(ds.X == 0.5)


def test_windowize_scaling_uses_training_prefix():
    s = np.sin(np.arange(200) / 7.0) * np.linspace(1, 3, 200)
    ds = windowize(s, train_len=50)
    train = ds.X[:50]
    np.testing.assert_allclose(train.min(axis=0), 0.0, atol=1e-15)
    np.testing.assert_allclose(train.max(axis=0), 1.0, atol=1e-15)
    assert ds.X[50:].max() > 1.0  # test values may leave [0, 1]
    np.testing.assert_array_equal(ds.x_min, ds.X_raw[:50].min(axis=0))


def test_windowize_exogenous_narendra2_layout():
    u, y = gen_narendra2(60)
    ds = windowize(y, u, WindowSpec(lags=(2, 1, 0), exo_lags=(0, -1)))
    k = 10  # row j predicts y(j + 3) from y(j..j+2), u(j+2), u(j+3)
    assert ds.target_index[k] == k + 3
    np.testing.assert_array_equal(ds.X_raw[k], [y[k], y[k + 1], y[k + 2], u[k + 2], u[k + 3]])
    assert len(ds) == 60 - 2 - 1


def test_window_validation():
    with pytest.raises(ConfigurationError):
        WindowSpec(lags=(0, 1))
    with pytest.raises(ConfigurationError):
        WindowSpec(horizon=0)
    with pytest.raises(ConfigurationError):
        WindowSpec(lags=(1, 0), exo_lags=(0, -2))
    with pytest.raises(ConfigurationError):
        windowize([1, 2, 3], spec=WindowSpec())


def test_csv_round_trip(tmp_path):
    u, y = gen_narendra2(200)
    path = tmp_path / "s.csv"
    write_series_csv(path, y, u)
    y2, u2 = read_series_csv(path)
    assert y2.tobytes() == y.tobytes() and u2.tobytes() == u.tobytes()
    assert path.read_text().splitlines()[0] == "k,value,u"
    mg = gen_mackey_glass(17, 0.1, 50)
    write_series_csv(path, mg)
    back, none = read_series_csv(path)
    assert none is None and back.tobytes() == mg.tobytes()
