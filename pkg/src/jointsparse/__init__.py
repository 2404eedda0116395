"""Joint-sparse recovery for the multiple-measurement-vector problem.

The main solver is :func:`jointsparse.admm.solve`, an ADMM scheme that
enforces a hard bound on the number of nonzero rows. Baselines live in
:mod:`jointsparse.baselines`, synthetic data in :mod:`jointsparse.datagen`
and the benchmark harness in :mod:`jointsparse.bench`.
"""

from .admm import Backend, SolverConfig, SolverResult, Termination, solve
from .baselines import BaselineConfig, admm_l21_solve, sniht_solve, somp_solve
from .core import frobenius_norm, l20_norm, l21_norm, rmse, row_norms
from .datagen import InstanceSpec, ProblemInstance, generate
from .exceptions import (DimensionError, DivergenceError, NumericError,
                         ParameterError, SpecError)
from .projection import project_row_sparse, sparsity_budget

__version__ = "0.1.0"
