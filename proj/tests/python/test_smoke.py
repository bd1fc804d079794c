import math

import numpy as np
import pytest

import mdslb


def params(n=1000, lam=0.9, L=2, k=1, T=5.0):
    p = mdslb.SystemParams()
    p.n = n
    p.lam = lam
    p.L = L
    p.k = k
    p.T = T
    return p


def test_validate_rejects_bad_params():
    p = params(k=3, L=2)
    with pytest.raises(ValueError):
        p.validate()


def test_build_id_is_nonempty():
    assert isinstance(mdslb.build_id(), str)
    assert mdslb.build_id()


def test_drift_at_empty_state():
    # from all-empty, mass moves 0 -> 1 at rate lambda and nothing else
    e0 = np.zeros(9)
    e0[0] = 1.0
    f = mdslb.drift_f(e0, 0.0, params())
    assert f[0] == pytest.approx(-0.9, abs=1e-12)
    assert f[1] == pytest.approx(0.9, abs=1e-12)
    assert np.max(np.abs(f[2:])) < 1e-12


def test_zeta_bar_empty_state():
    e0 = np.zeros(7)
    e0[0] = 1.0
    z = mdslb.zeta_bar(0, e0, 0.0, 5, 4)
    assert z == pytest.approx(4.0 / math.factorial(5), rel=1e-12)


def test_sqrt_squares_back_to_phi():
    rng = np.random.default_rng(7)
    probs = rng.uniform(0.05, 1.0, size=11)
    probs /= probs.sum()
    phi = mdslb.phi_matrix(probs, 0.0, params(L=3, k=2))
    a = mdslb.sqrt_psd(phi)
    assert np.allclose(a @ a, phi, atol=1e-9)
    assert np.allclose(a, a.T)


def test_ode_mass_conserved():
    tc = mdslb.TruncationConfig()
    tc.K = 15
    out = mdslb.solve_ode(params(L=3, k=2, T=4.0), tc)
    total = out["pi"][-1].sum() + out["leak"][-1]
    assert total == pytest.approx(1.0, abs=1e-9)
    assert out["times"][-1] == pytest.approx(4.0)


def test_ctmc_deterministic_and_conservative():
    p = params(n=300, T=2.0)
    a = mdslb.simulate_ctmc(p, seed=42)
    b = mdslb.simulate_ctmc(p, seed=42)
    c = mdslb.simulate_ctmc(p, seed=43)
    for ca, cb in zip(a["counts"], b["counts"]):
        assert (ca == cb).all()
    assert a["events"] == b["events"]
    assert any((ca.sum() == 300) for ca in a["counts"])
    assert all(ca.sum() == 300 for ca in a["counts"])
    assert a["events"] != c["events"] or any(
        (x != y).any() for x, y in zip(a["counts"], c["counts"])
    )


def test_sde_paths_are_centered():
    tc = mdslb.TruncationConfig()
    tc.K = 12
    out = mdslb.simulate_sde(params(n=2000, T=2.0), tc, seed=5)
    for x in out["x"]:
        assert abs(x.sum()) < 1e-9


def test_metrics_and_reconstruct():
    probs = np.zeros(9)
    probs[6] = 1.0
    empty, large, mean = mdslb.metrics(probs, 0.0, 100)
    assert (empty, large, mean) == (0.0, 100.0, 6.0)

    half = np.array([0.5, 0.5])
    x = np.array([1.0, -1.0])
    rec, tail = mdslb.reconstruct(half, 0.0, x, 100)
    assert rec == pytest.approx([0.6, 0.4])
    assert tail == pytest.approx(0.0)


def test_drift_g_zero_sum_on_interior_states():
    rng = np.random.default_rng(11)
    probs = np.zeros(11)
    probs[:7] = rng.uniform(0.05, 1.0, size=7)
    probs /= probs.sum()
    x = np.zeros(11)
    x[:7] = rng.uniform(-1.0, 1.0, size=7)
    x[:7] -= x[:7].mean()
    g = mdslb.drift_g(x, probs, 0.0, params(L=3, k=2))
    assert abs(g.sum()) < 1e-12
