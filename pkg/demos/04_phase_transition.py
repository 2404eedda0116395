"""A small phase-transition sweep through the benchmark harness.

The experiment is described as plain data, the same shape the command
line accepts as a JSON file. Trial seeds are derived from the grid point
and the trial index, so every solver sees identical instances.
"""

import tempfile

from jointsparse.bench import ExperimentSpec, emit_report, run_experiment

spec = ExperimentSpec.from_dict({
    "name": "k_sweep",
    "grid": [{"N": 500, "M": 150, "K": [25, 50, 75, 100, 125], "J": 10}],
    "solvers": [
        {"solver": "admm_l20", "params": {"s_offset": 2}},
        {"solver": "somp"},
    ],
    "trials": 5,
    "base_seed": 0,
})

records, aggregates = run_experiment(spec, threads=2)
for a in aggregates:
    print(f"K={a.K:3d} {a.solver:>9}: success {a.success_rate:.2f}, "
          f"mean time {a.mean_time:.3f} s")

with tempfile.TemporaryDirectory() as out:
    for path in emit_report(records, aggregates, "csv", out, name=spec.name):
        print("wrote", path.name)
