import math

import pytest

import ouhf


def test_simulate_and_fit():
    t, x, latent = ouhf.simulate(n=5000, seed=3)
    assert len(t) == len(x) == len(latent)
    assert t[0] >= 0.0 and t[-1] <= 1.0
    f = ouhf.fit("mle-nr", t, x)
    assert f["method"] == "mle-nr"
    assert 2.0 < f["tau"] < 50.0
    assert abs(math.sqrt(f["sigma2"]) - 0.01) < 3e-3


def test_equidistant_moments_fit_is_deterministic():
    t, x, _ = ouhf.simulate(n=2340, grid="equidistant", seed=1)
    assert len(t) == 2341
    assert ouhf.fit("mom-nr", t, x) == ouhf.fit("mom-nr", t, x)


def test_cycle_and_optimum():
    mean, var = ouhf.cycle_moments(1.0, -1.0)
    assert mean == pytest.approx(5.99062932466, rel=1e-9)
    assert var > 0.0
    r = ouhf.optimize_signals(0.5)
    assert r["trade"]
    assert abs(r["a"] + r["b"]) < 1e-5
    zm, _ = ouhf.strategy_moments(r["a"], r["b"], 0.5)
    assert zm == pytest.approx(r["z_m"], rel=1e-9)


def test_policy_in_original_units():
    p = ouhf.OuParams(1.0, 10.0, 1e-4)
    o = ouhf.optimal_policy(p, 0.0015)
    assert o["a"] > 1.0 > o["b"]
    assert o["z_m"] == pytest.approx(math.sqrt(10.0 * 1e-4 / 2.0) * o["dimensionless"]["z_m"], rel=1e-12)


def test_errors_are_value_errors():
    with pytest.raises(ouhf.OuhfError):
        ouhf.fit("nope", [0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        ouhf.fit("mom", [0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError, match="degenerate-input"):
        ouhf.optimal_policy(ouhf.OuParams(1.0, 10.0, 0.0), 0.0015)
