"""Experiment specifications, trial execution and aggregation.

Experiment JSON schema::

    {
      "name": "fig2",
      "grid": [{"N": 500, "M": 150, "K": [25, 50, 75], "J": 10}],
      "solvers": [{"solver": "admm_l20", "label": "l20", "params": {"s_offset": 2}}],
      "trials": 100,
      "base_seed": 0,
      "success_threshold": 1e-5
    }

Each grid entry is a template whose fields are integers or lists of
integers; a template expands to the Cartesian product of its fields, and
templates are concatenated in order. ``label`` defaults to ``solver``.

Per-trial seed: ``base_seed XOR d`` where ``d`` is the first 8 bytes
(little endian) of ``blake2b("N=<N>,M=<M>,K=<K>,J=<J>,t=<t>")``. The same seed
drives instance generation and the solver's random initialization, so every
solver sees a bit-identical instance at a given grid point and trial index.
"""

import hashlib
import itertools
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..admm import SolverConfig, solve
from ..core import rmse
from ..datagen import InstanceSpec, generate
from ..exceptions import SpecError
from .solvers import check_params, run_solver

log = logging.getLogger(__name__)

__all__ = [
    "SolverEntry",
    "ExperimentSpec",
    "TrialRecord",
    "AggregateRow",
    "trial_seed",
    "instance_id",
    "run_trial",
    "run_experiment",
    "aggregate",
    "residual_trace",
    "mean_residual_trace",
    "resolve_threads",
]

_AXES = ("N", "M", "K", "J")


@dataclass
class SolverEntry:
    solver: str
    label: str = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.label is None:
            self.label = self.solver
        check_params(self.solver, self.params)


@dataclass
class ExperimentSpec:
    name: str
    grid: list
    solvers: list
    trials: int = 100
    base_seed: int = 0
    success_threshold: float = 1e-5

    def __post_init__(self):
        if not isinstance(self.trials, int) or isinstance(self.trials, bool) or self.trials < 1:
            raise SpecError(f"trials: expected a positive integer, got {self.trials!r}")
        if not isinstance(self.base_seed, int) or not 0 <= self.base_seed < 2**64:
            raise SpecError(f"base_seed: expected an unsigned 64-bit integer, got {self.base_seed!r}")
        if not (isinstance(self.success_threshold, (int, float)) and self.success_threshold > 0):
            raise SpecError(f"success_threshold: expected a positive number, got {self.success_threshold!r}")
        if not self.grid:
            raise SpecError("grid: must contain at least one template")
        if not self.solvers:
            raise SpecError("solvers: must contain at least one solver")
        self.solvers = [s if isinstance(s, SolverEntry) else _parse_solver(s)
                        for s in self.solvers]
        labels = [s.label for s in self.solvers]
        if len(set(labels)) != len(labels):
            raise SpecError(f"solvers: duplicate labels {labels}")
        for i, tpl in enumerate(self.grid):
            _check_template(tpl, i)

    def points(self):
        """Grid points ``(N, M, K, J)`` in expansion order, without duplicates."""
        seen = {}
        for tpl in self.grid:
            axes = [tpl[a] if isinstance(tpl[a], list) else [tpl[a]] for a in _AXES]
            for p in itertools.product(*axes):
                seen.setdefault(tuple(int(v) for v in p), None)
        return list(seen)

    def to_dict(self):
        d = asdict(self)
        d["solvers"] = [asdict(s) for s in self.solvers]
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("experiment: top level must be a JSON object")
        known = {"name", "grid", "solvers", "trials", "base_seed", "success_threshold"}
        for key in d:
            if key not in known:
                raise SpecError(f"{key}: unknown field (expected one of {sorted(known)})")
        for key in ("name", "grid", "solvers"):
            if key not in d:
                raise SpecError(f"{key}: required field missing")
        if not isinstance(d["grid"], list):
            raise SpecError("grid: expected a list of templates")
        if not isinstance(d["solvers"], list):
            raise SpecError("solvers: expected a list")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            try:
                d = json.load(fh)
            except json.JSONDecodeError as err:
                raise SpecError(f"{path}: invalid JSON ({err})") from err
        return cls.from_dict(d)


def _parse_solver(d):
    if not isinstance(d, dict):
        raise SpecError(f"solvers: entries must be objects, got {d!r}")
    for key in d:
        if key not in ("solver", "label", "params"):
            raise SpecError(f"solvers.{key}: unknown field")
    if "solver" not in d:
        raise SpecError("solvers.solver: required field missing")
    params = d.get("params", {})
    if not isinstance(params, dict):
        raise SpecError("solvers.params: expected an object")
    return SolverEntry(solver=d["solver"], label=d.get("label"), params=dict(params))


def _check_template(tpl, i):
    if not isinstance(tpl, dict):
        raise SpecError(f"grid[{i}]: expected an object")
    for key in tpl:
        if key not in _AXES:
            raise SpecError(f"grid[{i}].{key}: unknown axis (expected N, M, K, J)")
    for axis in _AXES:
        if axis not in tpl:
            raise SpecError(f"grid[{i}].{axis}: required axis missing")
        vals = tpl[axis] if isinstance(tpl[axis], list) else [tpl[axis]]
        if not vals or not all(isinstance(v, int) and not isinstance(v, bool) and v > 0
                                for v in vals):
            raise SpecError(f"grid[{i}].{axis}: expected positive integers, got {tpl[axis]!r}")


@dataclass
class TrialRecord:
    instance_id: str
    solver: str
    N: int
    M: int
    K: int
    J: int
    seed: int
    rmse: float
    success: bool
    iterations: int
    wall_time_seconds: float
    termination: str

    @property
    def trial(self):
        return int(self.instance_id.split("-t")[1].split("-")[0])

    @property
    def point(self):
        return (self.N, self.M, self.K, self.J)


@dataclass
class AggregateRow:
    N: int
    M: int
    K: int
    J: int
    solver: str
    trials: int
    success_rate: float
    mean_rmse: float
    std_rmse: float
    mean_time: float
    std_time: float
    mean_iterations: float


def trial_seed(base_seed, point, t):
    N, M, K, J = point
    key = f"N={N},M={M},K={K},J={J},t={t}".encode()
    digest = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
    return base_seed ^ digest


def instance_id(point, t, seed):
    N, M, K, J = point
    return f"N{N}-M{M}-K{K}-J{J}-t{t}-{seed:016x}"


def run_trial(point, t, entry, base_seed, success_threshold):
    """Generate the instance for ``(point, t)`` and run one solver on it.

    Solver exceptions are caught and reported through the record's
    ``termination`` field with ``rmse = inf``.
    """
    seed = trial_seed(base_seed, point, t)
    N, M, K, J = point
    inst = generate(InstanceSpec(N=N, M=M, K=K, J=J, seed=seed))
    try:
        res = run_solver(entry.solver, inst, entry.params, seed)
        err = rmse(res.S_hat, inst.S_true)
        if not math.isfinite(err):
            err = math.inf
        term = res.termination.value
        iters, wall = res.iterations, res.wall_time_seconds
    except Exception as exc:  # a failing trial must not abort the sweep
        log.warning("trial %s/%s failed: %s", instance_id(point, t, seed), entry.label, exc)
        err, term, iters, wall = math.inf, f"error: {type(exc).__name__}: {exc}", 0, 0.0
    return TrialRecord(
        instance_id=instance_id(point, t, seed),
        solver=entry.label,
        N=N, M=M, K=K, J=J,
        seed=seed,
        rmse=float(err),
        success=bool(err < success_threshold),
        iterations=int(iters),
        wall_time_seconds=float(wall),
        termination=term,
    )


def _run_job(args):
    return run_trial(*args)


def resolve_threads(threads=None):
    if threads is None:
        threads = int(os.environ.get("JOINTSPARSE_THREADS", "1"))
    return max(1, int(threads))


def run_experiment(spec, threads=None):
    """Run every (grid point, solver, trial) of `spec`.

    Returns
    -------
    records : list of TrialRecord
        Sorted by grid point order, solver order and trial index.
    aggregates : list of AggregateRow
    """
    points = spec.points()
    jobs = [(p, t, entry, spec.base_seed, spec.success_threshold)
            for p in points for entry in spec.solvers for t in range(spec.trials)]
    threads = resolve_threads(threads)
    t0 = time.perf_counter()
    if threads == 1:
        records = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_run_job, jobs, chunksize=1))
    log.info("%s: %d trials in %.1f s", spec.name, len(records), time.perf_counter() - t0)
    p_index = {p: i for i, p in enumerate(points)}
    s_index = {e.label: i for i, e in enumerate(spec.solvers)}
    records.sort(key=lambda r: (p_index[r.point], s_index[r.solver], r.trial))
    return records, aggregate(records)


def aggregate(records):
    """Per (grid point, solver) summary, in first-appearance order.

    Standard deviations use the sample (``n - 1``) convention; a single
    trial gives ``0``.
    """
    groups = {}
    for r in records:
        groups.setdefault((r.point, r.solver), []).append(r)
    rows = []
    for (point, solver), recs in groups.items():
        errs = np.array([r.rmse for r in recs])
        times = np.array([r.wall_time_seconds for r in recs])
        ddof = 1 if len(recs) > 1 else 0
        rows.append(AggregateRow(
            *point,
            solver=solver,
            trials=len(recs),
            success_rate=sum(r.success for r in recs) / len(recs),
            mean_rmse=float(np.mean(errs)),
            std_rmse=float(np.std(errs, ddof=ddof)) if np.all(np.isfinite(errs)) else math.inf,
            mean_time=float(np.mean(times)),
            std_time=float(np.std(times, ddof=ddof)),
            mean_iterations=float(np.mean([r.iterations for r in recs])),
        ))
    return rows


def residual_trace(instance, cfg):
    """Per-iteration stopping triple of a run with the criterion disabled.

    Returns an array of shape ``(cfg.max_iter, 3)``.
    """
    cfg = SolverConfig(**{**asdict(cfg), "criterion_enabled": False})
    return solve(instance.Phi, instance.Y, cfg).residual_history


def mean_residual_trace(point, seeds, s=None, rho=1.0, max_iter=1000):
    """Average of :func:`residual_trace` over instances drawn with `seeds`."""
    N, M, K, J = point
    total = np.zeros((max_iter, 3))
    for seed in seeds:
        inst = generate(InstanceSpec(N=N, M=M, K=K, J=J, seed=seed))
        cfg = SolverConfig(s=s if s is not None else K + 2, rho=rho,
                           max_iter=max_iter, seed=seed)
        total += residual_trace(inst, cfg)
    return total / len(seeds)
