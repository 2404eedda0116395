"""Row-wise norms, recovery metrics and the plain-text matrix format.

Every matrix handled by the package is a two-dimensional ``float64`` numpy
array; rows index the signal dimension and columns index sensors.
"""

import numpy as np

from .exceptions import DimensionError

__all__ = [
    "as_matrix",
    "row_norms",
    "row_support",
    "l20_norm",
    "l21_norm",
    "frobenius_norm",
    "rmse",
    "write_matrix",
    "read_matrix",
    "SUPPORT_TOL",
]

#: zero-row tolerance used when reading off the support of a recovered iterate
SUPPORT_TOL = 1e-10


def as_matrix(X, name="X"):
    """Return `X` as a finite 2-D float64 array, raising on bad input."""
    A = np.asarray(X, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must be non-empty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def row_norms(X):
    """Euclidean norm of every row of `X`."""
    return np.linalg.norm(np.asarray(X, dtype=np.float64), axis=1)


def row_support(X, tol=0.0):
    """Sorted indices of the rows of `X` whose norm exceeds `tol`."""
    return np.flatnonzero(row_norms(X) > tol)


def l20_norm(X, tol=0.0):
    """Number of rows of `X` with Euclidean norm strictly above `tol`.

    Use ``tol=0`` for exact synthetic data and :data:`SUPPORT_TOL` for
    solver output, which carries round-off in the off-support rows.
    """
    return int(np.count_nonzero(row_norms(X) > tol))


def l21_norm(X):
    """Sum of the row Euclidean norms of `X`."""
    return float(np.sum(row_norms(X)))


def frobenius_norm(X):
    return float(np.linalg.norm(np.asarray(X, dtype=np.float64)))


def rmse(S_hat, S):
    """Root-mean-square error ``||S_hat - S||_F / sqrt(N J)``."""
    S_hat = np.asarray(S_hat, dtype=np.float64)
    S = np.asarray(S, dtype=np.float64)
    if S_hat.shape != S.shape:
        raise DimensionError(f"shape mismatch: {S_hat.shape} vs {S.shape}")
    return float(np.linalg.norm(S_hat - S) / np.sqrt(S.size))


def write_matrix(path, X):
    """Write `X` as ``rows cols`` followed by one whitespace-separated row per line."""
    X = as_matrix(X)
    with open(path, "w") as fh:
        fh.write(f"{X.shape[0]} {X.shape[1]}\n")
        for row in X:
            fh.write(" ".join(repr(float(v)) for v in row))
            fh.write("\n")


def read_matrix(path):
    """Inverse of :func:`write_matrix`."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: header must be 'rows cols'")
        rows, cols = int(header[0]), int(header[1])
        data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if data.shape != (rows, cols):
        raise DimensionError(
            f"{path}: header says {rows}x{cols}, body has shape {data.shape}")
    return as_matrix(data)
