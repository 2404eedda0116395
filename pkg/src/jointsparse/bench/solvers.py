"""Registry mapping solver identifiers to callables on problem instances."""

from ..admm import Backend, SolverConfig, solve
from ..baselines import BaselineConfig, admm_l21_solve, sniht_solve, somp_solve
from ..projection import sparsity_budget
from ..exceptions import SpecError

__all__ = ["SOLVERS", "run_solver", "check_params"]

_L20_PARAMS = {"rho", "s", "s_policy", "s_offset", "max_iter", "eps_primal",
               "eps_change", "eps_dual", "criterion", "backend"}


def _budget(instance, params):
    if "s" in params:
        return int(params["s"])
    policy = params.get("s_policy", "offset")
    if policy == "offset":
        return min(instance.spec.K + int(params.get("s_offset", 2)), instance.spec.N)
    if policy == "theory":
        return sparsity_budget(instance.spec.M, instance.Y).s
    raise SpecError(f"s_policy: unknown policy {policy!r}")


def _admm_l20(instance, params, seed, backend=Backend.PLAIN):
    cfg = SolverConfig(
        s=_budget(instance, params),
        rho=float(params.get("rho", 1.0)),
        max_iter=int(params.get("max_iter", 1000)),
        eps_primal=float(params.get("eps_primal", 1e-6)),
        eps_change=float(params.get("eps_change", 1e-6)),
        eps_dual=float(params.get("eps_dual", 1e-6)),
        backend=params.get("backend", backend),
        seed=seed,
        criterion_enabled=bool(params.get("criterion", True)),
    )
    return solve(instance.Phi, instance.Y, cfg)


def _admm_l20_smw(instance, params, seed):
    return _admm_l20(instance, params, seed, backend=Backend.SMW)


def _admm_l21(instance, params, seed):
    cfg = BaselineConfig(
        algorithm="admm_l21",
        lam=float(params.get("lam", 1e-6)),
        rho=float(params.get("rho", 1e-5)),
        max_iter=int(params.get("max_iter", 1000)),
        seed=seed,
    )
    return admm_l21_solve(instance.Phi, instance.Y, cfg,
                          criterion_enabled=bool(params.get("criterion", True)))


def _somp(instance, params, seed):
    return somp_solve(instance.Phi, instance.Y, int(params.get("K", instance.spec.K)))


def _sniht(instance, params, seed):
    return sniht_solve(instance.Phi, instance.Y, int(params.get("K", instance.spec.K)),
                       max_iter=int(params.get("max_iter", 1000)))


# name -> (callable(instance, params, seed), accepted parameter names)
SOLVERS = {
    "admm_l20": (_admm_l20, _L20_PARAMS),
    "admm_l20_smw": (_admm_l20_smw, _L20_PARAMS - {"backend"}),
    "admm_l21": (_admm_l21, {"lam", "rho", "max_iter", "criterion"}),
    "somp": (_somp, {"K"}),
    "sniht": (_sniht, {"K", "max_iter"}),
}


def check_params(name, params):
    if name not in SOLVERS:
        raise SpecError(
            f"unknown solver {name!r}; available solvers: {', '.join(sorted(SOLVERS))}")
    allowed = SOLVERS[name][1]
    for key in params:
        if key not in allowed:
            raise SpecError(
                f"solvers.params.{key}: not a parameter of {name} "
                f"(accepted: {', '.join(sorted(allowed))})")


def run_solver(name, instance, params, seed):
    check_params(name, params)
    return SOLVERS[name][0](instance, params, seed)
