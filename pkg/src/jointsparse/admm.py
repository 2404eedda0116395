"""ADMM for joint-sparse recovery under a hard row-sparsity constraint.

Solves::

    minimize ||Y - Phi S||_F^2   subject to  ||S||_{2,0} <= s

by splitting ``S = B`` with ``B`` restricted to the row-sparse set. One
iteration performs

    B <- P_s(S - L / rho)
    S <- (2 Phi^T Phi + rho I)^{-1} (2 Phi^T Y + rho B + L)
    L <- L + rho (B - S)

where ``P_s`` keeps the `s` rows of largest norm. The system matrix is
factorized once, either directly (``N x N`` Cholesky) or through the
Sherman-Morrison-Woodbury identity (``M x M`` Cholesky).
"""

import enum
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .core import as_matrix, frobenius_norm
from .exceptions import DimensionError, DivergenceError, NumericError, ParameterError
from .projection import project_row_sparse

__all__ = [
    "Backend",
    "Termination",
    "SolverConfig",
    "SolverResult",
    "FactorizedNormalMatrix",
    "factorize",
    "update_B",
    "update_S",
    "update_L",
    "check_convergence",
    "kkt_stationarity",
    "solve",
]


class Backend(str, enum.Enum):
    PLAIN = "plain"
    SMW = "smw"


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"


@dataclass
class SolverConfig:
    """Parameters of the row-sparse ADMM solver.

    Attributes
    ----------
    s : int
        Row budget of the constraint set.
    rho : float
        Penalty parameter.
    max_iter : int
        Iteration cap.
    eps_primal, eps_change, eps_dual : float
        Stopping thresholds for ``||B - S||_F``, ``||S_new - S_old||_F`` and
        ``||L||_F``. All three must hold simultaneously.
    backend : Backend
        Linear-solve strategy for the S-update.
    seed : int
        Seed of the standard normal initial ``S``.
    criterion_enabled : bool
        If false, always run `max_iter` iterations.
    """

    s: int
    rho: float = 1.0
    max_iter: int = 1000
    eps_primal: float = 1e-6
    eps_change: float = 1e-6
    eps_dual: float = 1e-6
    backend: Backend = Backend.PLAIN
    seed: int = 0
    criterion_enabled: bool = True

    def __post_init__(self):
        self.backend = Backend(self.backend)
        if self.s < 1:
            raise ParameterError(f"s must be >= 1, got {self.s}")
        if not self.rho > 0:
            raise ParameterError(f"rho must be positive, got {self.rho}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter}")
        for name in ("eps_primal", "eps_change", "eps_dual"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")

    @property
    def thresholds(self):
        return (self.eps_primal, self.eps_change, self.eps_dual)


@dataclass
class SolverResult:
    """Outcome of one solver call.

    `S_hat` is the returned estimate. For the ADMM solvers it is the final
    ``B`` iterate; `S_final` and `L_final` hold the other two blocks.
    `residual_history` has one row per iteration. For ADMM solvers the
    columns are ``(||B - S||_F, ||S_new - S_old||_F, ||L||_F)``; the greedy
    and thresholding baselines store ``(||Y - Phi S||_F, ||S_new - S_old||_F, 0)``.
    """

    S_hat: np.ndarray
    iterations: int
    termination: Termination
    residual_history: np.ndarray
    kkt_stationarity: float
    wall_time_seconds: float
    S_final: np.ndarray = None
    L_final: np.ndarray = None
    algorithm: str = ""
    info: dict = field(default_factory=dict)


class FactorizedNormalMatrix:
    """Reusable solver for ``(2 Phi^T Phi + rho I) X = R``.

    The plain backend holds a Cholesky factor of the ``N x N`` matrix. The
    SMW backend holds a Cholesky factor of ``I + 2 Phi Phi^T / rho`` and
    applies::

        (2 Phi^T Phi + rho I)^{-1} = I / rho
            - 2 Phi^T (I + 2 Phi Phi^T / rho)^{-1} Phi / rho^2
    """

    def __init__(self, Phi, rho, backend=Backend.PLAIN):
        self.backend = Backend(backend)
        if not rho > 0:
            raise ParameterError(f"rho must be positive, got {rho}")
        Phi = np.asarray(Phi, dtype=np.float64)
        self.Phi = Phi
        self.rho = float(rho)
        M, N = Phi.shape
        try:
            if self.backend is Backend.PLAIN:
                A = 2.0 * (Phi.T @ Phi)
                A[np.diag_indices(N)] += self.rho
            else:
                A = (2.0 / self.rho) * (Phi @ Phi.T)
                A[np.diag_indices(M)] += 1.0
            self._factor = linalg.cho_factor(A, lower=True, check_finite=True)
        except (ValueError, linalg.LinAlgError) as err:
            raise NumericError(f"cannot factorize normal matrix: {err}") from err

    @property
    def shape(self):
        n = self.Phi.shape[1]
        return (n, n)

    def solve(self, R):
        R = np.asarray(R, dtype=np.float64)
        if R.shape[0] != self.Phi.shape[1]:
            raise DimensionError(
                f"right-hand side has {R.shape[0]} rows, expected {self.Phi.shape[1]}")
        if self.backend is Backend.PLAIN:
            return linalg.cho_solve(self._factor, R, check_finite=False)
        rho = self.rho
        W = linalg.cho_solve(self._factor, self.Phi @ R, check_finite=False)
        return R / rho - (2.0 / rho**2) * (self.Phi.T @ W)

    def matvec(self, X):
        """Apply ``2 Phi^T Phi + rho I`` to `X` without forming it."""
        return 2.0 * (self.Phi.T @ (self.Phi @ X)) + self.rho * X


def factorize(Phi, rho, backend=Backend.PLAIN):
    return FactorizedNormalMatrix(Phi, rho, backend)


def _same_shape(*arrays):
    shape = arrays[0].shape
    for a in arrays[1:]:
        if a.shape != shape:
            raise DimensionError(f"shape mismatch: {shape} vs {a.shape}")


def update_B(S, L, rho, s):
    """Hard-thresholded B-step, ``P_s(S - L / rho)``."""
    S = np.asarray(S, dtype=np.float64)
    L = np.asarray(L, dtype=np.float64)
    _same_shape(S, L)
    return project_row_sparse(S - L / rho, s)


def update_S(fact, Phi, Y, B, L, rho):
    """Exact minimizer of the augmented Lagrangian in ``S``."""
    Phi = np.asarray(Phi, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    L = np.asarray(L, dtype=np.float64)
    _same_shape(B, L)
    M, N = Phi.shape
    if Y.shape[0] != M or B.shape != (N, Y.shape[1]):
        raise DimensionError(
            f"inconsistent shapes Phi{Phi.shape}, Y{Y.shape}, B{B.shape}")
    return fact.solve(2.0 * (Phi.T @ Y) + rho * B + L)


def update_L(L, B, S, rho):
    L = np.asarray(L, dtype=np.float64)
    _same_shape(L, np.asarray(B), np.asarray(S))
    return L + rho * (B - S)


def check_convergence(prev_S, B, S, L, cfg):
    """Evaluate the stopping triple and test it against `cfg` thresholds.

    Returns
    -------
    converged : bool
    triple : tuple of float
        ``(||B - S||_F, ||S - prev_S||_F, ||L||_F)``.
    """
    triple = (frobenius_norm(B - S), frobenius_norm(S - prev_S), frobenius_norm(L))
    converged = all(r < eps for r, eps in zip(triple, cfg.thresholds))
    return converged, triple


def kkt_stationarity(Phi, Y, S, L):
    """Norm of the S-stationarity residual ``2 Phi^T (Phi S - Y) - L``."""
    Phi = np.asarray(Phi, dtype=np.float64)
    return frobenius_norm(2.0 * (Phi.T @ (Phi @ S - Y)) - L)


def _check_problem(Phi, Y):
    Phi = as_matrix(Phi, "Phi")
    Y = as_matrix(Y, "Y")
    if Y.shape[0] != Phi.shape[0]:
        raise DimensionError(
            f"Y has {Y.shape[0]} rows but Phi has {Phi.shape[0]}")
    return Phi, Y


def admm_iterations(Phi, Y, b_step, rho, max_iter, thresholds, criterion_enabled,
                    backend=Backend.PLAIN, seed=0, algorithm="", callback=None):
    """Generic B/S/L loop shared by the l2,0 and l2,1 solvers.

    `b_step(V)` maps ``S - L / rho`` to the new B iterate. `callback`, if
    given, is called as ``callback(k, B, S, L)`` after every iteration.
    """
    t0 = time.perf_counter()
    N, J = Phi.shape[1], Y.shape[1]
    fact = factorize(Phi, rho, backend)
    rhs0 = 2.0 * (Phi.T @ Y)
    S = np.random.default_rng(seed).standard_normal((N, J))
    L = np.zeros((N, J))
    B = S
    history = []
    termination = Termination.MAX_ITER
    for k in range(1, max_iter + 1):
        B = b_step(S - L / rho)
        S_new = fact.solve(rhs0 + rho * B + L)
        L = L + rho * (B - S_new)
        triple = (frobenius_norm(B - S_new), frobenius_norm(S_new - S),
                  frobenius_norm(L))
        S = S_new
        if not (np.isfinite(triple[1]) and np.isfinite(triple[2])):
            raise DivergenceError(k)
        history.append(triple)
        if callback is not None:
            callback(k, B, S, L)
        if criterion_enabled and all(r < eps for r, eps in zip(triple, thresholds)):
            termination = Termination.CONVERGED
            break
    kkt = kkt_stationarity(Phi, Y, S, L)
    return SolverResult(
        S_hat=B,
        iterations=len(history),
        termination=termination,
        residual_history=np.asarray(history, dtype=np.float64).reshape(-1, 3),
        kkt_stationarity=kkt,
        wall_time_seconds=time.perf_counter() - t0,
        S_final=S,
        L_final=L,
        algorithm=algorithm,
    )


def solve(Phi, Y, cfg, callback=None):
    """Recover a row-sparse ``S`` from ``Y = Phi S``.

    Parameters
    ----------
    Phi : ndarray, shape (M, N)
    Y : ndarray, shape (M, J)
    cfg : SolverConfig
    callback : callable, optional
        Called as ``callback(k, B, S, L)`` after iteration `k`.

    Returns
    -------
    SolverResult
        ``S_hat`` is the final B iterate, which always has at most ``cfg.s``
        nonzero rows.

    Raises
    ------
    DimensionError
        If `Phi` and `Y` disagree in row count.
    ParameterError
        If ``cfg.s`` exceeds the number of columns of `Phi`.
    DivergenceError
        If an iterate becomes non-finite.
    """
    Phi, Y = _check_problem(Phi, Y)
    if cfg.s > Phi.shape[1]:
        raise ParameterError(f"s={cfg.s} exceeds N={Phi.shape[1]}")
    name = "admm_l20" if cfg.backend is Backend.PLAIN else "admm_l20_smw"
    return admm_iterations(
        Phi, Y,
        b_step=lambda V: project_row_sparse(V, cfg.s),
        rho=cfg.rho,
        max_iter=cfg.max_iter,
        thresholds=cfg.thresholds,
        criterion_enabled=cfg.criterion_enabled,
        backend=cfg.backend,
        seed=cfg.seed,
        algorithm=name,
        callback=callback,
    )
