"""Hard thresholding onto the row-sparse set and the sparsity budget.

The row-sparse set is ``{X : ||X||_{2,0} <= s}``. Its Euclidean projection
keeps the `s` rows of largest norm and zeroes the rest.
"""

from dataclasses import dataclass

import numpy as np

from .core import row_norms
from .exceptions import ParameterError

__all__ = [
    "top_rows",
    "project_row_sparse",
    "spark_estimate",
    "numeric_rank",
    "SparsityBudget",
    "sparsity_budget",
]


def top_rows(norms, s):
    """Indices of the `s` largest entries of `norms`, sorted ascending.

    Ties at the cut-off are resolved in favour of the smaller index.
    """
    norms = np.asarray(norms)
    n = norms.shape[0]
    if s >= n:
        return np.arange(n)
    cut = np.partition(norms, n - s)[n - s]
    above = np.flatnonzero(norms > cut)
    at_cut = np.flatnonzero(norms == cut)[: s - above.size]
    return np.sort(np.concatenate([above, at_cut]))


def project_row_sparse(X, s, return_support=False):
    """Project `X` onto the set of matrices with at most `s` nonzero rows.

    Parameters
    ----------
    X : ndarray, shape (N, J)
    s : int
        Row budget, ``1 <= s <= N``.
    return_support : bool, optional
        Also return the kept row indices.

    Returns
    -------
    P : ndarray, shape (N, J)
        Copy of `X` with every row outside the `s` largest-norm rows zeroed.
        If `X` already has at most `s` nonzero rows the copy equals `X`.
    support : ndarray of int, only if `return_support`
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= s <= n:
        raise ParameterError(f"sparsity budget s={s} outside [1, {n}]")
    keep = top_rows(row_norms(X), s)
    P = np.zeros_like(X)
    P[keep] = X[keep]
    if return_support:
        return P, keep
    return P


def spark_estimate(M):
    """Spark of an i.i.d. Gaussian ``M x N`` matrix with ``M < N``.

    Such a matrix has every set of `M` columns independent with probability
    one, so its spark is ``M + 1``.
    """
    if M < 1:
        raise ParameterError(f"M must be positive, got {M}")
    return int(M) + 1


def numeric_rank(Y, tol=1e-10):
    """Number of singular values of `Y` above ``tol * sigma_max``."""
    sv = np.linalg.svd(np.asarray(Y, dtype=np.float64), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


@dataclass(frozen=True)
class SparsityBudget:
    s: int
    spark_estimate: int
    rank_y: int


def sparsity_budget(M, Y, tol=1e-10):
    """Largest row budget that still guarantees a unique solution.

    ``s = floor((spark + rank(Y) - 2) / 2)``, clamped below at 1.
    """
    spark = spark_estimate(M)
    rank = numeric_rank(Y, tol)
    s = max(1, (spark + rank - 2) // 2)
    return SparsityBudget(s=s, spark_estimate=spark, rank_y=rank)
