import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from jointsparse.admm import SolverResult, Termination
from jointsparse.baselines import (BaselineConfig, admm_l21_solve, group_soft_threshold,
                                   sniht_solve, solve_baseline, somp_solve)
from jointsparse.core import l20_norm, rmse, row_norms
from jointsparse.exceptions import NumericError, ParameterError

from conftest import exact_instance
from test_admm import best_support_lstsq


def test_config_requires_parameters():
    with pytest.raises(ParameterError):
        BaselineConfig("somp")
    with pytest.raises(ParameterError):
        BaselineConfig("admm_l21", lam=0.0)
    with pytest.raises(ParameterError):
        BaselineConfig("sniht", sparsity_K=3, step_policy="constant")
    cfg = BaselineConfig("admm_l21")
    assert (cfg.lam, cfg.rho, cfg.max_iter) == (1e-6, 1e-5, 1000)


# SOMP

def test_somp_single_atom(rng):
    Phi = rng.standard_normal((10, 30))
    Phi /= np.linalg.norm(Phi, axis=0)
    row = rng.standard_normal((1, 4))
    Y = Phi[:, [17]] @ row
    res = somp_solve(Phi, Y, 1)
    assert res.info["support_order"] == [17]
    np.testing.assert_allclose(res.S_hat[17], row[0], rtol=0, atol=1e-12)
    assert l20_norm(res.S_hat) == 1


@pytest.mark.parametrize("seed", range(5))
def test_somp_against_exhaustive_search(seed):
    inst = exact_instance(8, 6, 2, 3, seed)
    oracle = best_support_lstsq(inst.Phi, inst.Y, 2)
    res = somp_solve(inst.Phi, inst.Y, 2)
    if rmse(res.S_hat, inst.S_true) < 1e-5:
        assert rmse(res.S_hat, oracle) <= 1e-10
    assert l20_norm(res.S_hat) == 2


def test_somp_support_growth_and_orthogonality():
    inst = exact_instance(200, 60, 15, 4, seed=5)
    res = somp_solve(inst.Phi, inst.Y, 15)
    order = res.info["support_order"]
    assert len(order) == len(set(order)) == 15
    assert res.iterations == 15
    A = inst.Phi[:, order]
    R = inst.Y - A @ res.S_hat[order]
    assert np.linalg.norm(A.T @ R) <= 1e-10


def test_somp_errors(rng):
    Phi = rng.standard_normal((4, 10))
    with pytest.raises(ParameterError):
        somp_solve(Phi, rng.standard_normal((4, 2)), 5)
    Phi = np.zeros((4, 10))
    Phi[0, :] = 1.0
    with pytest.raises(NumericError):
        somp_solve(Phi, np.ones((4, 2)), 2)


# SNIHT

def test_sniht_zero_measurements(rng):
    Phi = rng.standard_normal((10, 30))
    res = sniht_solve(Phi, np.zeros((10, 3)), 4)
    assert not np.any(res.S_hat)
    assert res.termination is Termination.CONVERGED


@pytest.mark.parametrize("seed", range(4))
def test_sniht_small_exact_instance(seed):
    inst = exact_instance(8, 6, 1, 2, seed)
    oracle = best_support_lstsq(inst.Phi, inst.Y, 1)
    res = sniht_solve(inst.Phi, inst.Y, 1)
    assert rmse(res.S_hat, inst.S_true) <= 1e-6
    assert rmse(res.S_hat, oracle) <= 1e-6


def test_sniht_feasible_and_monotone():
    inst = exact_instance(300, 100, 30, 5, seed=2)
    objective = []

    def cb(k, S):
        assert l20_norm(S) <= 30
        R = inst.Y - inst.Phi @ S
        objective.append(float(np.sum(R * R)))

    sniht_solve(inst.Phi, inst.Y, 30, max_iter=300, callback=cb)
    obj = np.asarray(objective)
    assert obj.size > 1
    assert np.all(obj[1:] <= obj[:-1] * (1 + 1e-12))


# ADMM with the l2,1 penalty

def test_group_soft_threshold_cases():
    V = np.array([[0.3, 0.4], [3.0, 4.0], [0.0, 0.0]])
    out = group_soft_threshold(V, 0.5)
    np.testing.assert_array_equal(out[0], [0.0, 0.0])
    np.testing.assert_allclose(out[1], 0.9 * V[1], rtol=1e-15)
    np.testing.assert_array_equal(out[2], [0.0, 0.0])
    np.testing.assert_array_equal(group_soft_threshold(V, 0.0), V)


@settings(max_examples=100, deadline=None)
@given(hnp.arrays(np.float64, (6, 3), elements=st.floats(-50, 50)), st.floats(0, 20))
def test_group_soft_threshold_identity(V, tau):
    out = group_soft_threshold(V, tau)
    for v, o in zip(V, out):
        n = np.linalg.norm(v)
        expected = max(0.0, 1 - tau / n) * v if n > 0 else v
        np.testing.assert_allclose(o, expected, rtol=1e-12, atol=1e-12)
    assert np.all(row_norms(out) <= row_norms(V) + 1e-12)


def test_admm_l21_shrinkage_every_iteration():
    inst = exact_instance(150, 60, 6, 4, seed=8)
    cfg = BaselineConfig("admm_l21", lam=1e-2, rho=1.0, max_iter=200)
    tau = cfg.lam / cfg.rho
    state = {"V": None}

    def cb(k, B, S, L):
        # B was produced from S_prev - L_prev / rho
        if state["V"] is not None:
            np.testing.assert_allclose(B, group_soft_threshold(state["V"], tau), atol=1e-15)
            assert np.all(row_norms(B) <= row_norms(state["V"]) + 1e-15)
        state["V"] = S - L / cfg.rho

    res = admm_l21_solve(inst.Phi, inst.Y, cfg, callback=cb)
    assert res.iterations > 1


def test_admm_l21_recovers_easy_instance():
    inst = exact_instance(200, 100, 5, 8, seed=1)
    res = admm_l21_solve(inst.Phi, inst.Y, BaselineConfig("admm_l21"))
    assert rmse(res.S_hat, inst.S_true) < 1e-5


def test_interface_uniformity():
    inst = exact_instance(60, 30, 4, 3, seed=4)
    for cfg in (BaselineConfig("somp", sparsity_K=4), BaselineConfig("sniht", sparsity_K=4),
                BaselineConfig("admm_l21", max_iter=50)):
        res = solve_baseline(inst.Phi, inst.Y, cfg)
        assert isinstance(res, SolverResult)
        assert res.S_hat.shape == (60, 3)
        assert res.residual_history.shape == (res.iterations, 3)
        assert res.wall_time_seconds >= 0 and res.kkt_stationarity >= 0
        assert isinstance(res.termination, Termination)
