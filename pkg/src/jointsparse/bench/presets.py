"""Built-in experiments mirroring the published tables and figures.

Desk-scale presets shrink the two largest configurations (the SMW timing
run and the top of the dimension sweep) and the trial counts; pass
``full_scale=True`` for the original sizes and trial counts.
"""

from .experiment import ExperimentSpec

__all__ = ["PRESETS", "preset", "describe"]

_L20 = {"solver": "admm_l20", "label": "admm_l20", "params": {"s_offset": 2}}
_BASELINES = [
    {"solver": "admm_l21", "label": "admm_l21", "params": {}},
    {"solver": "somp", "label": "somp", "params": {}},
    {"solver": "sniht", "label": "sniht", "params": {}},
]

_DESCRIPTIONS = {
    "table2": "l2,0 ADMM without stopping criterion, 1000 iterations (N=500, M=150, K=50, J=10)",
    "table3": "l2,0 ADMM with and without the stopping criterion (N=500, M=150, K=50, J=10)",
    "table4": "plain vs SMW linear solves (N=2000, M=600, K=200, J=10; full: N=5000)",
    "fig2": "success rate vs row sparsity K = 25..150 (N=500, M=150, J=10)",
    "fig3": "success rate vs undersampling N/M = 1.6..8 (N=500, K=50, J=10)",
    "fig4": "success rate vs number of sensors J = 1..32 (N=500, M=150, K=50)",
    "fig5": "success rate vs dimension N with N/M=3, K/N=0.1, J=10",
}


def _table2(full):
    l20 = {**_L20, "params": {"s_offset": 2, "criterion": False}}
    return dict(grid=[{"N": 500, "M": 150, "K": 50, "J": 10}], solvers=[l20], trials=10)


def _table3(full):
    return dict(
        grid=[{"N": 500, "M": 150, "K": 50, "J": 10}],
        solvers=[
            {"solver": "admm_l20", "label": "admm_l20_nocrit",
             "params": {"s_offset": 2, "criterion": False}},
            {"solver": "admm_l20", "label": "admm_l20", "params": {"s_offset": 2}},
        ],
        trials=10,
    )


def _table4(full):
    point = {"N": 5000, "M": 1500, "K": 500, "J": 10} if full else \
        {"N": 2000, "M": 600, "K": 200, "J": 10}
    return dict(
        grid=[point],
        solvers=[_L20, {"solver": "admm_l20_smw", "label": "admm_l20_smw",
                        "params": {"s_offset": 2}}],
        trials=10 if full else 5,
    )


def _fig2(full):
    return dict(grid=[{"N": 500, "M": 150, "K": [25, 50, 75, 100, 125, 150], "J": 10}],
                solvers=[_L20, *_BASELINES], trials=100 if full else 20)


def _fig3(full):
    ratios = (1.6, 3.2, 4.8, 6.4, 8.0)
    return dict(grid=[{"N": 500, "M": [int(500 / r) for r in ratios], "K": 50, "J": 10}],
                solvers=[_L20, *_BASELINES], trials=100 if full else 20)


def _fig4(full):
    return dict(grid=[{"N": 500, "M": 150, "K": 50, "J": [1, 2, 4, 8, 16, 32]}],
                solvers=[_L20, *_BASELINES], trials=100 if full else 50)


def _fig5(full):
    sizes = (100, 500, 1000, 1500, 3000) if full else (100, 500, 1500)
    return dict(grid=[{"N": n, "M": n // 3, "K": n // 10, "J": 10} for n in sizes],
                solvers=[_L20, *_BASELINES], trials=100 if full else 10)


PRESETS = {
    "table2": _table2,
    "table3": _table3,
    "table4": _table4,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
}


def preset(name, full_scale=False, trials=None, base_seed=0):
    """Build the named preset as an :class:`ExperimentSpec`."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    kw = PRESETS[name](full_scale)
    if trials is not None:
        kw["trials"] = trials
    return ExperimentSpec(name=name, base_seed=base_seed, **kw)


def describe(name):
    return _DESCRIPTIONS[name]
