import itertools

import numpy as np
import pytest

from jointsparse.admm import (Backend, SolverConfig, Termination, check_convergence,
                              factorize, kkt_stationarity, solve, update_B, update_L,
                              update_S)
from jointsparse.core import SUPPORT_TOL, frobenius_norm, l20_norm, rmse
from jointsparse.exceptions import DimensionError, DivergenceError, NumericError, ParameterError
from jointsparse.projection import project_row_sparse

from conftest import exact_instance


def best_support_lstsq(Phi, Y, k):
    """Exhaustive search over all k-row supports for the best least-squares fit."""
    best = None
    for c in itertools.combinations(range(Phi.shape[1]), k):
        A = Phi[:, c]
        C = np.linalg.lstsq(A, Y, rcond=None)[0]
        res = np.linalg.norm(Y - A @ C)
        if best is None or res < best[0]:
            best = (res, c, C)
    S = np.zeros((Phi.shape[1], Y.shape[1]))
    S[list(best[1])] = best[2]
    return S


def test_config_validation():
    with pytest.raises(ParameterError):
        SolverConfig(s=0)
    with pytest.raises(ParameterError):
        SolverConfig(s=1, rho=0.0)
    with pytest.raises(ParameterError):
        SolverConfig(s=1, max_iter=0)
    with pytest.raises(ParameterError):
        SolverConfig(s=1, eps_dual=0.0)
    assert SolverConfig(s=3, backend="smw").backend is Backend.SMW


# B-update

def test_update_B_identity_when_feasible(rng):
    S = np.zeros((6, 2))
    S[[1, 4]] = rng.standard_normal((2, 2))
    np.testing.assert_array_equal(update_B(S, np.zeros_like(S), 1.0, 2), S)


def test_update_B_keeps_largest_row_of_minus_L():
    L = np.zeros((4, 2))
    L[0] = [0.1, 0.2]
    L[2] = [1e6, -3e6]
    L[3] = [5.0, 5.0]
    B = update_B(np.zeros((4, 2)), L, 1.0, 1)
    expected = np.zeros((4, 2))
    expected[2] = -L[2]
    np.testing.assert_array_equal(B, expected)


def test_update_B_composes_projection(rng):
    S, L = rng.standard_normal((9, 3)), rng.standard_normal((9, 3))
    np.testing.assert_array_equal(update_B(S, L, 2.0, 3), project_row_sparse(S - L / 2.0, 3))
    with pytest.raises(DimensionError):
        update_B(S, L[:5], 2.0, 3)


# factorization and S-update

def test_factorize_zero_phi_is_identity(rng):
    f = factorize(np.zeros((3, 5)), 1.0, Backend.PLAIN)
    R = rng.standard_normal((5, 2))
    np.testing.assert_allclose(f.solve(R), R, rtol=0, atol=1e-15)


@pytest.mark.parametrize("backend", list(Backend))
def test_factorize_identity_phi_divides_by_three(backend, rng):
    f = factorize(np.eye(4), 1.0, backend)
    R = rng.standard_normal((4, 3))
    np.testing.assert_allclose(f.solve(R), R / 3.0, rtol=1e-14, atol=1e-15)


def test_backends_agree_on_random_rhs(rng):
    Phi = rng.standard_normal((20, 50))
    R = rng.standard_normal((50, 4))
    a = factorize(Phi, 1.3, Backend.PLAIN).solve(R)
    b = factorize(Phi, 1.3, Backend.SMW).solve(R)
    assert np.linalg.norm(a - b) <= 1e-10 * np.linalg.norm(a)


def test_factorize_rejects_non_finite():
    Phi = np.ones((2, 3))
    Phi[0, 0] = np.nan
    with pytest.raises(NumericError):
        factorize(Phi, 1.0)


def test_update_S_special_cases(rng):
    B = rng.standard_normal((5, 2))
    Z = np.zeros((5, 2))
    f0 = factorize(np.zeros((3, 5)), 1.0)
    np.testing.assert_allclose(update_S(f0, np.zeros((3, 5)), np.zeros((3, 2)), B, Z, 1.0),
                               B, atol=1e-15)
    Y = rng.standard_normal((5, 2))
    fI = factorize(np.eye(5), 1.0)
    np.testing.assert_allclose(update_S(fI, np.eye(5), Y, Z, Z, 1.0), 2.0 * Y / 3.0,
                               rtol=1e-14, atol=1e-15)
    with pytest.raises(DimensionError):
        update_S(fI, np.eye(5), Y[:4], Z, Z, 1.0)


@pytest.mark.parametrize("backend", list(Backend))
def test_update_S_solves_normal_equations(backend, rng):
    Phi = rng.standard_normal((30, 80))
    Y = rng.standard_normal((30, 4))
    B, L = rng.standard_normal((80, 4)), rng.standard_normal((80, 4))
    rho = 0.7
    S = update_S(factorize(Phi, rho, backend), Phi, Y, B, L, rho)
    rhs = 2 * Phi.T @ Y + rho * B + L
    resid = 2 * Phi.T @ (Phi @ S) + rho * S - rhs
    assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(rhs)


def test_update_S_backends_agree(table2_instance, rng):
    inst = table2_instance
    B, L = rng.standard_normal((500, 10)), rng.standard_normal((500, 10))
    a = update_S(factorize(inst.Phi, 1.0, "plain"), inst.Phi, inst.Y, B, L, 1.0)
    b = update_S(factorize(inst.Phi, 1.0, "smw"), inst.Phi, inst.Y, B, L, 1.0)
    assert rmse(a, b) <= 1e-10


# L-update and stopping rule

def test_update_L(rng):
    L, B, S = (rng.standard_normal((4, 3)) for _ in range(3))
    np.testing.assert_array_equal(update_L(L, S, S, 2.0), L)
    np.testing.assert_array_equal(update_L(np.zeros((4, 3)), B, S, 1.0), B - S)
    out = update_L(L, B, S, 2.0)
    for i, j in itertools.product(range(4), range(3)):
        assert out[i, j] == L[i, j] + 2.0 * (B[i, j] - S[i, j])


def test_check_convergence():
    cfg = SolverConfig(s=1)
    Z = np.zeros((3, 2))
    assert check_convergence(Z, Z, Z, Z, cfg) == (True, (0.0, 0.0, 0.0))
    L = np.zeros((3, 2))
    L[0, 0] = 1.0
    ok, triple = check_convergence(Z, Z, Z, L, cfg)
    assert not ok and triple == (0.0, 0.0, 1.0)
    small = np.zeros((3, 2))
    small[0, 0] = 1e-7
    ok, triple = check_convergence(Z, small, Z, small, cfg)
    assert ok
    ok, _ = check_convergence(small, Z, Z, Z, cfg)
    assert ok


def test_kkt_stationarity_cases(rng):
    inst = exact_instance(40, 20, 3, 2, seed=3)
    assert kkt_stationarity(inst.Phi, inst.Y, inst.S_true, np.zeros((40, 2))) <= 1e-10
    L = rng.standard_normal((40, 2))
    assert kkt_stationarity(np.zeros((20, 40)), inst.Y, inst.S_true, L) == \
        pytest.approx(frobenius_norm(L), rel=1e-15)


# full solver

def test_solve_table2_scale_with_criterion(table2_instance):
    inst = table2_instance
    res = solve(inst.Phi, inst.Y, SolverConfig(s=52, seed=1))
    assert res.termination is Termination.CONVERGED
    assert res.iterations < 1000
    assert rmse(res.S_hat, inst.S_true) < 1e-5
    assert res.kkt_stationarity <= 1e-5
    assert res.residual_history.shape == (res.iterations, 3)
    assert np.all(res.residual_history[-1] < 1e-6)
    assert l20_norm(res.S_hat) <= 52


def test_solve_zero_measurements():
    Phi = np.random.default_rng(0).standard_normal((30, 60))
    res = solve(Phi, np.zeros((30, 3)), SolverConfig(s=2))
    assert res.termination is Termination.CONVERGED
    assert np.max(np.abs(res.S_hat)) < 1e-6
    res = solve(Phi, np.zeros((30, 3)), SolverConfig(s=2, criterion_enabled=False))
    assert np.max(np.abs(res.S_hat)) < 1e-14
    assert np.all(res.residual_history[-1] < 1e-14)


@pytest.mark.parametrize("seed", range(4))
def test_small_instance_matches_exhaustive_search(seed):
    inst = exact_instance(8, 6, 1, 2, seed)
    oracle = best_support_lstsq(inst.Phi, inst.Y, 1)
    assert rmse(oracle, inst.S_true) <= 1e-12
    res = solve(inst.Phi, inst.Y, SolverConfig(s=1, seed=seed, criterion_enabled=False))
    assert rmse(res.S_hat, inst.S_true) <= 1e-8
    assert rmse(res.S_hat, oracle) <= 1e-8


def test_B_iterates_stay_feasible_and_S_update_is_exact():
    inst = exact_instance(120, 40, 8, 3, seed=11)
    cfg = SolverConfig(s=10, seed=2, max_iter=200)
    fact = factorize(inst.Phi, cfg.rho)
    state = {}

    def cb(k, B, S, L):
        assert l20_norm(B) <= cfg.s
        if "L" in state:
            rhs = 2 * inst.Phi.T @ inst.Y + cfg.rho * B + state["L"]
            grad = fact.matvec(S) - rhs
            assert np.linalg.norm(grad) <= 1e-8 * np.linalg.norm(rhs)
        state["L"] = L.copy()

    solve(inst.Phi, inst.Y, cfg, callback=cb)


def test_backends_produce_same_iterates(table2_instance):
    inst = table2_instance
    traces = {}
    for backend in Backend:
        seq = []
        cfg = SolverConfig(s=52, seed=4, max_iter=300, backend=backend)
        solve(inst.Phi, inst.Y, cfg, callback=lambda k, B, S, L: seq.append(S.copy()))
        traces[backend] = seq
    a, b = traces[Backend.PLAIN], traces[Backend.SMW]
    assert len(a) == len(b)
    assert max(rmse(x, y) for x, y in zip(a, b)) <= 1e-9


def test_solver_is_deterministic(table2_instance):
    inst = table2_instance
    a = solve(inst.Phi, inst.Y, SolverConfig(s=52, seed=9))
    b = solve(inst.Phi, inst.Y, SolverConfig(s=52, seed=9))
    np.testing.assert_array_equal(a.S_hat, b.S_hat)
    np.testing.assert_array_equal(a.residual_history, b.residual_history)


def test_solve_errors():
    Phi = np.random.default_rng(1).standard_normal((5, 10))
    with pytest.raises(DimensionError):
        solve(Phi, np.zeros((4, 2)), SolverConfig(s=2))
    with pytest.raises(ParameterError):
        solve(Phi, np.zeros((5, 2)), SolverConfig(s=11))
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(DivergenceError) as info:
            solve(Phi, np.full((5, 2), 1e308), SolverConfig(s=2))
    assert info.value.iteration == 1
