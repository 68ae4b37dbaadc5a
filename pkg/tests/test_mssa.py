import numpy as np
import pytest

from autossa import (
    AngleIdConfig,
    FreqIdConfig,
    TrendIdConfig,
    elementary_component,
    identify_periodic_angle,
    identify_periodic_angle_mssa_left,
    identify_periodic_angle_mssa_right,
    identify_periodic_freq,
    identify_periodic_freq_mssa_left,
    identify_periodic_freq_mssa_right,
    identify_trend,
    identify_trend_mssa_left,
    identify_trend_mssa_right,
    mssa,
    ssa_1d,
)
from autossa.identify import tau_norm
from autossa.spectral import max_two_bin_mass, periodogram_1d

N = np.arange(1, 100)


def eq22(a=1.0, b=2.0, omega=1 / 5):
    return [a * np.cos(2 * np.pi * omega * N + 0.3), b * np.cos(2 * np.pi * omega * N + 1.1)]


def _same(a, b):
    assert a.pairs == b.pairs
    assert a.singles == b.singles
    assert a.measures == b.measures
    assert a.flagged == b.flagged


@pytest.fixture
def single(rng):
    x = np.exp(0.01 * N) + np.cos(2 * np.pi * N / 7) + 0.3 * rng.standard_normal(99)
    return ssa_1d(x, 40), mssa([x], 40)


def test_s1_decomposition_matches(single):
    d1, dm = single
    np.testing.assert_allclose(d1.sigma, dm.sigma, rtol=1e-12)


def test_s1_reduction_left(single):
    d1, _ = single
    U = [d1.U[:, i] for i in range(10)]
    _same(identify_trend_mssa_left(U, TrendIdConfig()), identify_trend(U, TrendIdConfig()))
    _same(identify_periodic_freq_mssa_left(U, FreqIdConfig(1, 0.5)), identify_periodic_freq(U, FreqIdConfig(1, 0.5)))
    _same(identify_periodic_angle_mssa_left(U, AngleIdConfig(m=2)), identify_periodic_angle(U, AngleIdConfig(m=2)))


def test_s1_reduction_right(single):
    _, dm = single
    V = [dm.V[:, i] for i in range(10)]
    w = dm.trajectory.channel_widths
    _same(identify_trend_mssa_right(V, TrendIdConfig(), w), identify_trend(V, TrendIdConfig()))
    _same(identify_periodic_freq_mssa_right(V, FreqIdConfig(1, 0.5), w),
          identify_periodic_freq(V, FreqIdConfig(1, 0.5)))
    for cfg in (AngleIdConfig(m=2), AngleIdConfig(t0=0.05)):
        _same(identify_periodic_angle_mssa_right(V, cfg, w), identify_periodic_angle(V, cfg))


def test_s1_reduction_elementary_series(single):
    _, dm = single
    series = [elementary_component(dm, i) for i in range(6)]
    res = identify_trend_mssa_right(series, TrendIdConfig())
    _same(res, identify_trend([s[0] for s in series], TrendIdConfig()))


def test_trend_left_two_channels():
    dec = mssa([np.exp(0.01 * N), 2 * np.exp(0.01 * N)], 50)
    U = dec.left_vectors(range(dec.d))
    assert identify_trend_mssa_left(U, TrendIdConfig(0, 0.05, 0.9)).indices == [0]
    assert identify_trend_mssa_left(U, TrendIdConfig(0, 0.05, 0.0)).indices == list(range(dec.d))


def test_trend_right_one_channel():
    dec = mssa([np.cos(2 * np.pi * N / 5), np.exp(0.01 * N)], 50)
    parts = [dec.factor_parts(i) for i in range(dec.d)]
    res = identify_trend_mssa_right(parts, TrendIdConfig(0, 0.05, 0.9))
    # the leading triple is the trend; only its channel-2 part is smooth
    assert 0 in res
    per = res.details["per_channel"][0]
    assert per[0] < 0.9 <= per[1]
    # parts are compared after normalization, so a tiny smooth part also counts
    for i in res.indices:
        assert max(v for v in res.details["per_channel"][i] if v is not None) >= 0.9


def test_trend_right_harmonic_excluded():
    dec = mssa(eq22(), 50)
    V = dec.right_vectors(range(dec.d))
    assert identify_trend_mssa_right(V, TrendIdConfig(0, 0.05, 0.9), dec.trajectory.channel_widths).indices == []


def test_aggregation_bounds(rng):
    dec = mssa([rng.standard_normal(60), rng.standard_normal(45), rng.standard_normal(50)], 20)
    w = dec.trajectory.channel_widths
    V = dec.right_vectors(range(10))
    tr = identify_trend_mssa_right(V, TrendIdConfig(0, 0.15, 0.5), w)
    for i, vals in tr.details["per_channel"].items():
        assert all(tr.measures[i] >= v for v in vals)
    ang = identify_periodic_angle_mssa_right(V, AngleIdConfig(m=2), w)
    for j, vals in enumerate(ang.details["per_channel"]):
        assert all(ang.measures[(j, j + 1)] <= v for v in vals)
    fr = identify_periodic_freq_mssa_right(V, FreqIdConfig(2, 0.0), w)
    parts = [dec.factor_parts(i).parts for i in range(10)]
    for (i, j), rho in ((k, v) for k, v in fr.measures.items() if isinstance(k, tuple)):
        for p in range(3):
            avg = (periodogram_1d(parts[i][p]).normalized + periodogram_1d(parts[j][p]).normalized) / 2
            assert rho >= max_two_bin_mass(avg) - 1e-15


def test_eq22_left_and_right():
    dec = mssa(eq22(), 50)
    assert dec.d == 2
    U, V = dec.left_vectors([0, 1]), dec.right_vectors([0, 1])
    w = dec.trajectory.channel_widths
    assert identify_periodic_freq_mssa_left(U, FreqIdConfig(1, 0.9)).pairs == ((0, 1),)
    assert identify_periodic_freq_mssa_right(V, FreqIdConfig(1, 0.9), w).pairs == ((0, 1),)
    assert identify_periodic_angle_mssa_left(U, AngleIdConfig(m=1)).pairs == ((0, 1),)
    assert identify_periodic_angle_mssa_right(V, AngleIdConfig(m=1), w).pairs == ((0, 1),)
    assert identify_periodic_angle_mssa_left(U, AngleIdConfig(t0=0)).pairs == ()


def test_freq_noise_left_null():
    hits = 0
    for seed in range(100):
        U = list(np.random.default_rng(seed).standard_normal((8, 40)))
        hits += bool(identify_periodic_freq_mssa_left(U, FreqIdConfig(1, 0.9)).indices)
    assert hits <= 1


def test_freq_right_harmonic_one_channel(rng):
    dec = mssa([np.cos(2 * np.pi * N / 5), 0.1 * rng.standard_normal(99)], 50)
    V = dec.right_vectors(range(4))
    res = identify_periodic_freq_mssa_right(V, FreqIdConfig(1, 0.9), dec.trajectory.channel_widths)
    assert (0, 1) in res.pairs


def test_freq_right_nyquist_singleton():
    dec = mssa([(-1.0) ** N, 0.5 * (-1.0) ** N * np.exp(0.01 * N)], 50)
    V = dec.right_vectors(range(dec.d))
    res = identify_periodic_freq_mssa_right(V, FreqIdConfig(1, 0.9), dec.trajectory.channel_widths)
    assert 0 in res.singles


def test_angle_right_min_over_channels():
    # channel 1 is noise-like, channel 2 a clean harmonic
    noise = np.random.default_rng(3).standard_normal((4, 30))
    k = np.arange(30)
    harm = [np.cos(0.9 * k), np.sin(0.9 * k)]
    V = [np.concatenate([noise[0], harm[0]]), np.concatenate([noise[1], harm[1]]),
         np.concatenate([noise[2], noise[3]])]
    res = identify_periodic_angle_mssa_right(V, AngleIdConfig(m=1), [30, 30])
    assert res.pairs == ((0, 1),)
    assert res.measures[(0, 1)] == pytest.approx(tau_norm(*harm), abs=1e-15)


def test_angle_right_degenerate_channel():
    k = np.arange(20)
    V = [np.concatenate([np.zeros(20), np.cos(k)]), np.concatenate([np.zeros(20), np.sin(k)])]
    res = identify_periodic_angle_mssa_right(V, AngleIdConfig(m=1), [20, 20])
    assert res.pairs == ((0, 1),)
    assert res.details["per_channel"][0][0] == np.inf
    V0 = [np.zeros(40), np.zeros(40)]
    res = identify_periodic_angle_mssa_right(V0, AngleIdConfig(m=1), [20, 20])
    assert res.pairs == () and res.flagged == (0,)


def test_channel_permutation_invariance(rng):
    chans = [np.exp(0.01 * N) + rng.standard_normal(99), np.cos(2 * np.pi * N / 6) + rng.standard_normal(99)]
    d1, d2 = mssa(chans, 40), mssa(chans[::-1], 40)
    V1 = [d1.factor_parts(i) for i in range(8)]
    V2 = [d2.factor_parts(i) for i in range(8)]
    for f in (lambda V: identify_trend_mssa_right(V, TrendIdConfig(0, 0.05, 0.5)),
              lambda V: identify_periodic_freq_mssa_right(V, FreqIdConfig(1, 0.5)),
              lambda V: identify_periodic_angle_mssa_right(V, AngleIdConfig(m=2))):
        a, b = f(V1), f(V2)
        assert a.pairs == b.pairs and a.singles == b.singles
        for key in a.measures:
            assert a.measures[key] == pytest.approx(b.measures[key], abs=1e-8)
