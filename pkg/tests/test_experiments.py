import numpy as np
import pytest

from autossa import ParameterError, ssa_1d, tau
from autossa.experiments import (
    SignalModel,
    calibrate_threshold,
    compare_methods,
    fit_harmonic,
    identification_error,
    optimal_threshold,
    simulate,
    visual_identification,
    _Auto,
)


def test_simulate_noiseless():
    s, n, x = simulate(SignalModel(omega=0.25, N=8), seed=1)
    np.testing.assert_allclose(s, [0, -1, 0, 1, 0, -1, 0, 1], atol=1e-12)
    assert np.all(n == 0) and np.array_equal(x, s)


def test_simulate_deterministic_and_envelope():
    m = SignalModel(alpha=0.02, omega=1 / 7, sigma=0.5, N=50)
    a, b = simulate(m, 7), simulate(m, 7)
    for u, v in zip(a, b):
        assert np.array_equal(u, v)
    assert not np.array_equal(a[2], simulate(m, 8)[2])
    k = np.arange(1, 51)
    eps = np.random.default_rng(7).standard_normal(50)
    np.testing.assert_allclose(a[1], np.exp(0.02 * k) * 0.5 * eps)


def test_model_validation():
    for kw in [dict(a=0), dict(omega=0), dict(omega=0.6), dict(sigma=-1), dict(phi=7.0)]:
        with pytest.raises(ParameterError):
            SignalModel(**kw)
    m = SignalModel.scaled(1, 199)
    assert m.alpha == 1 / 199 and m.window(0.5) == 99


def test_identification_error_examples():
    x = np.arange(5.0)
    assert identification_error(x, x) == 0
    assert identification_error(x, x + 1) == pytest.approx(1)
    c = np.cos(2 * np.pi * np.arange(1, 21) / 5)
    assert identification_error(np.zeros(20), c) == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        identification_error(x, x[:3])


def test_visual_identification():
    _, _, x = simulate(SignalModel(omega=1 / 7, N=99))
    vis = visual_identification(x, 50)
    np.testing.assert_allclose(vis.series, x, atol=1e-10)
    assert not vis.flagged
    const = visual_identification(np.full(20, 3.0), 10)
    assert const.flagged and const.n_used == 1
    np.testing.assert_allclose(const.series, 3.0)


def test_visual_identification_small_noise():
    m = SignalModel(omega=1 / 7, sigma=0.2)
    s, _, x = simulate(m, 3)
    assert identification_error(s, visual_identification(x, 50).series) < 0.2**2


def test_optimal_threshold_noiseless():
    _, _, x = simulate(SignalModel(omega=1 / 7))
    # noiseless angle measure is ~0, so 0 fails (strict <) and 0.01 is the first exact grid point
    assert optimal_threshold(x, "angle", 50) == 0.01
    assert optimal_threshold(x, "angle", 50, grid=[0.0]) == 0.0
    auto = _Auto(x, 50, None, 1)
    assert auto.error("angle", 0.01) < 1e-20


def test_optimal_threshold_is_argmin():
    _, _, x = simulate(SignalModel(omega=1 / 7, sigma=0.2), 11)
    grid = np.round(np.arange(101) * 0.01, 2)
    for method in ("angle", "freq"):
        t = optimal_threshold(x, method, 50)
        auto = _Auto(x, 50, None, 1)
        errs = np.array([auto.error(method, g) for g in grid])
        assert auto.error(method, t) == errs.min()
        assert t == grid[np.flatnonzero(errs == errs.min())[0]]
    with pytest.raises(ParameterError):
        _Auto(x, 50, None, 1).indices("bogus", 0.1)


def test_fit_harmonic():
    k = np.arange(1, 41)
    amp, ph = fit_harmonic(2 * np.exp(0.01 * k) * np.cos(2 * np.pi * k / 7 + 0.4), 0.01, 1 / 7)
    assert amp == pytest.approx(2) and ph == pytest.approx(0.4)


def test_calibration_small():
    m = SignalModel(omega=0.2)
    res = calibrate_threshold(m, 50, sigmas=(0.0, 0.5), n_sim=20, seed=5)
    x = simulate(m)[2]
    dec = ssa_1d(x, 50)
    assert res.q95[0] == pytest.approx(tau(dec.U[:, 0], dec.U[:, 1]), abs=1e-20)
    assert res.q95[1] > res.q95[0]
    assert res.recommended_t0 == res.q95[1]
    assert res == calibrate_threshold(m, 50, sigmas=(0.0, 0.5), n_sim=20, seed=5)
    assert res.as_dict()["n_sim"] == 20
    with pytest.raises(ParameterError):
        calibrate_threshold(m, 50, sigmas=())


def test_calibration_parallel_matches_serial():
    m = SignalModel(omega=0.2)
    a = calibrate_threshold(m, 50, sigmas=(0.3, 0.6), n_sim=10, seed=9, threads=1)
    b = calibrate_threshold(m, 50, sigmas=(0.3, 0.6), n_sim=10, seed=9, threads=2)
    assert a == b


def test_compare_noiseless_all_zero():
    rep = compare_methods(SignalModel(omega=1 / 7), 50, n_rep=2, sigmas=(0.0,))
    row = rep.row(0.0)
    assert (row.mean_tau, row.mean_rho, row.median_tau, row.median_rho) == (0, 0, 0, 0)
    assert row.n_used == 2


def test_compare_deterministic():
    m = SignalModel(omega=1 / 7)
    a = compare_methods(m, 50, n_rep=3, seed=4, sigmas=(0.4,))
    b = compare_methods(m, 50, n_rep=3, seed=4, sigmas=(0.4,))
    assert a == b
    c = compare_methods(m, 50, n_rep=3, seed=4, sigmas=(0.4,), threads=2)
    assert a.rows == c.rows
    row = a.row(0.4)
    assert all(0 <= t <= 1 for t in row.t0_opt + row.rho0_opt)
    assert all(e >= 0 for e in row.e_tau + row.e_rho)
    with pytest.raises(KeyError):
        a.row(0.9)
    with pytest.raises(ParameterError):
        compare_methods(m, 50, n_rep=0)
