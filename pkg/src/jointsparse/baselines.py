"""Reference MMV solvers for comparison with the row-sparse ADMM.

Update rules
------------
SOMP (simultaneous orthogonal matching pursuit)
    Start with ``R = Y`` and an empty support. For ``K`` rounds: add the
    column ``i`` maximizing ``||(Phi^T R)_i||_2 / ||phi_i||_2`` among the
    unselected columns, refit ``C = argmin ||Y - Phi_T C||_F`` by least
    squares and set ``R = Y - Phi_T C``.

SNIHT (simultaneous normalized iterative hard thresholding)
    Start from ``S = 0`` with support ``T`` given by the `K` largest rows of
    ``Phi^T Y``. Each iteration takes ``G = Phi^T (Y - Phi S)``, the step
    ``mu = ||G_T||_F^2 / ||Phi_T G_T||_F^2`` and the candidate
    ``P_K(S + mu G)``. The step is halved until ``||Y - Phi S||_F^2`` does not
    increase.

ADMM with the l2,1 penalty
    The splitting of ``lam ||B||_{2,1} + ||Y - Phi S||_F^2`` with ``B = S``.
    The B-step is row-wise group soft thresholding at level ``lam / rho``;
    the S- and L-steps are those of :func:`jointsparse.admm.solve`.
"""

import enum
import time
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .admm import (Backend, SolverResult, Termination, _check_problem,
                   admm_iterations, kkt_stationarity)
from .core import frobenius_norm, row_norms
from .exceptions import DivergenceError, NumericError, ParameterError
from .projection import project_row_sparse, top_rows

__all__ = [
    "Algorithm",
    "BaselineConfig",
    "group_soft_threshold",
    "somp_solve",
    "sniht_solve",
    "admm_l21_solve",
    "solve_baseline",
]


class Algorithm(str, enum.Enum):
    SOMP = "somp"
    SNIHT = "sniht"
    ADMM_L21 = "admm_l21"


@dataclass
class BaselineConfig:
    algorithm: Algorithm
    sparsity_K: int = None
    lam: float = 1e-6
    rho: float = 1e-5
    max_iter: int = 1000
    step_policy: str = "normalized"
    tol: float = 1e-12
    seed: int = 0
    backend: Backend = Backend.PLAIN

    def __post_init__(self):
        self.algorithm = Algorithm(self.algorithm)
        self.backend = Backend(self.backend)
        if self.algorithm in (Algorithm.SOMP, Algorithm.SNIHT):
            if self.sparsity_K is None or self.sparsity_K < 1:
                raise ParameterError(
                    f"{self.algorithm.value} needs a positive sparsity_K")
        if self.algorithm is Algorithm.ADMM_L21:
            if not (self.lam > 0 and self.rho > 0):
                raise ParameterError("admm_l21 needs lam > 0 and rho > 0")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.step_policy != "normalized":
            raise ParameterError(f"unknown step policy {self.step_policy!r}")


def group_soft_threshold(V, tau):
    """Proximal map of ``tau * ||.||_{2,1}``.

    Each row ``v`` becomes ``max(0, 1 - tau / ||v||_2) * v``.
    """
    V = np.asarray(V, dtype=np.float64)
    norms = row_norms(V)
    scale = np.zeros_like(norms)
    nz = norms > tau
    scale[nz] = 1.0 - tau / norms[nz]
    return V * scale[:, None]


def somp_solve(Phi, Y, K):
    """Simultaneous orthogonal matching pursuit with exactly `K` atoms.

    Raises
    ------
    ParameterError
        If ``K > M``.
    NumericError
        If the selected columns are linearly dependent.
    """
    t0 = time.perf_counter()
    Phi, Y = _check_problem(Phi, Y)
    M, N = Phi.shape
    if not 1 <= K <= M:
        raise ParameterError(f"SOMP needs 1 <= K <= M={M}, got K={K}")
    col_norms = np.linalg.norm(Phi, axis=0)
    col_norms[col_norms == 0] = np.inf
    chosen = np.zeros(N, dtype=bool)
    support = []
    R = Y
    S = np.zeros((N, Y.shape[1]))
    history = []
    for _ in range(K):
        score = row_norms(Phi.T @ R) / col_norms
        score[chosen] = -np.inf
        i = int(np.argmax(score))
        chosen[i] = True
        support.append(i)
        A = Phi[:, support]
        coef, _, rank, _ = linalg.lstsq(A, Y, lapack_driver="gelsd")
        if rank < len(support):
            raise NumericError(f"selected columns {support} are rank deficient")
        S_new = np.zeros_like(S)
        S_new[support] = coef
        R = Y - A @ coef
        history.append((frobenius_norm(R), frobenius_norm(S_new - S), 0.0))
        S = S_new
    return SolverResult(
        S_hat=S,
        iterations=K,
        termination=Termination.CONVERGED,
        residual_history=np.asarray(history).reshape(-1, 3),
        kkt_stationarity=kkt_stationarity(Phi, Y, S, np.zeros_like(S)),
        wall_time_seconds=time.perf_counter() - t0,
        S_final=S,
        algorithm="somp",
        info={"support_order": support},
    )


def sniht_solve(Phi, Y, K, max_iter=1000, tol=1e-12, callback=None):
    """Simultaneous normalized iterative hard thresholding.

    Parameters
    ----------
    Phi : ndarray, shape (M, N)
    Y : ndarray, shape (M, J)
    K : int
        Row sparsity of every iterate.
    max_iter : int
    tol : float
        Stop once ``||S_new - S_old||_F <= tol * max(||S||_F, 1)`` or the
        residual vanishes.
    callback : callable, optional
        ``callback(k, S)`` after each accepted iterate.
    """
    t0 = time.perf_counter()
    Phi, Y = _check_problem(Phi, Y)
    M, N = Phi.shape
    if not 1 <= K <= N:
        raise ParameterError(f"SNIHT needs 1 <= K <= N={N}, got K={K}")
    S = np.zeros((N, Y.shape[1]))
    R = Y.copy()
    obj = float(np.sum(R * R))
    support = top_rows(row_norms(Phi.T @ Y), K)
    history = []
    termination = Termination.MAX_ITER
    y_scale = max(frobenius_norm(Y), np.finfo(float).tiny)
    for k in range(1, max_iter + 1):
        G = Phi.T @ R
        GT = G[support]
        num = float(np.sum(GT * GT))
        PG = Phi[:, support] @ GT
        den = float(np.sum(PG * PG))
        if num == 0.0 or den == 0.0:
            history.append((np.sqrt(obj), 0.0, 0.0))
            termination = Termination.CONVERGED
            break
        mu = num / den
        for _ in range(60):
            S_new, support_new = project_row_sparse(S + mu * G, K, return_support=True)
            R_new = Y - Phi @ S_new
            obj_new = float(np.sum(R_new * R_new))
            if not np.isfinite(obj_new):
                raise DivergenceError(k)
            if obj_new <= obj * (1.0 + 1e-12):
                break
            mu *= 0.5
        else:
            # no decrease available along this direction
            history.append((np.sqrt(obj), 0.0, 0.0))
            termination = Termination.CONVERGED
            break
        change = frobenius_norm(S_new - S)
        S, R, obj, support = S_new, R_new, obj_new, support_new
        history.append((np.sqrt(obj), change, 0.0))
        if callback is not None:
            callback(k, S)
        if np.sqrt(obj) <= 1e-15 * y_scale or change <= tol * max(frobenius_norm(S), 1.0):
            termination = Termination.CONVERGED
            break
    return SolverResult(
        S_hat=S,
        iterations=len(history),
        termination=termination,
        residual_history=np.asarray(history).reshape(-1, 3),
        kkt_stationarity=kkt_stationarity(Phi, Y, S, np.zeros_like(S)),
        wall_time_seconds=time.perf_counter() - t0,
        S_final=S,
        algorithm="sniht",
    )


def admm_l21_solve(Phi, Y, cfg, callback=None, criterion_enabled=True,
                   thresholds=(1e-6, 1e-6, 1e-6)):
    """ADMM on ``lam ||B||_{2,1} + ||Y - Phi S||_F^2`` subject to ``B = S``.

    Uses the same stopping triple as the row-sparse solver. Returns the
    final B iterate.
    """
    Phi, Y = _check_problem(Phi, Y)
    tau = cfg.lam / cfg.rho
    return admm_iterations(
        Phi, Y,
        b_step=lambda V: group_soft_threshold(V, tau),
        rho=cfg.rho,
        max_iter=cfg.max_iter,
        thresholds=thresholds,
        criterion_enabled=criterion_enabled,
        backend=cfg.backend,
        seed=cfg.seed,
        algorithm="admm_l21",
        callback=callback,
    )


def solve_baseline(Phi, Y, cfg):
    if cfg.algorithm is Algorithm.SOMP:
        return somp_solve(Phi, Y, cfg.sparsity_K)
    if cfg.algorithm is Algorithm.SNIHT:
        return sniht_solve(Phi, Y, cfg.sparsity_K, cfg.max_iter, cfg.tol)
    return admm_l21_solve(Phi, Y, cfg)
