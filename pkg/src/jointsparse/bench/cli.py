"""Command-line entry point: ``jointsparse {run,trace,generate,presets}``."""

import argparse
import csv
import logging
import sys
from pathlib import Path

from ..admm import SolverConfig
from ..datagen import InstanceSpec, dump_instance, generate
from ..exceptions import SpecError
from .experiment import ExperimentSpec, SolverEntry, residual_trace, run_experiment
from .presets import PRESETS, describe, preset
from .report import emit_report
from .solvers import SOLVERS

__all__ = ["main"]


def _load_spec(args):
    target = args.experiment
    if target in PRESETS and not Path(target).exists():
        spec = preset(target, full_scale=args.full_scale, trials=args.trials,
                      base_seed=args.seed or 0)
    else:
        spec = ExperimentSpec.from_json(target)
        if args.trials is not None:
            spec.trials = args.trials
        if args.seed is not None:
            spec.base_seed = args.seed
        spec.__post_init__()
    if args.solver:
        by_label = {e.label: e for e in spec.solvers}
        chosen = []
        for name in args.solver:
            if name in by_label:
                chosen.append(by_label[name])
            elif name in SOLVERS:
                chosen.append(SolverEntry(solver=name))
            else:
                raise SpecError(f"unknown solver {name!r}; available solvers: "
                                f"{', '.join(sorted(SOLVERS))}")
        spec.solvers = chosen
    return spec


def _cmd_run(args):
    spec = _load_spec(args)
    records, aggregates = run_experiment(spec, threads=args.threads)
    formats = ["csv", "json"] if args.format == "both" else [args.format]
    for fmt in formats:
        for path in emit_report(records, aggregates, fmt, args.out_dir,
                                name=spec.name, spec=spec):
            print(f"wrote {path}")
    for a in aggregates:
        print(f"N={a.N} M={a.M} K={a.K} J={a.J} {a.solver:>16}: "
              f"success={a.success_rate:.2f} mean_rmse={a.mean_rmse:.3e} "
              f"mean_time={a.mean_time:.4f}s mean_iter={a.mean_iterations:.1f}")
    return 0


def _cmd_trace(args):
    inst = generate(InstanceSpec(N=args.N, M=args.M, K=args.K, J=args.J, seed=args.seed))
    cfg = SolverConfig(s=args.s if args.s is not None else args.K + 2, rho=args.rho,
                       max_iter=args.iters, seed=args.seed, backend=args.backend)
    hist = residual_trace(inst, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"trace_N{args.N}_M{args.M}_K{args.K}_J{args.J}_seed{args.seed}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "primal", "change", "dual"])
        for k, row in enumerate(hist, start=1):
            w.writerow([k, *(repr(float(v)) for v in row)])
    print(f"wrote {path}")
    print(f"final residuals: {hist[-1, 0]:.3e} {hist[-1, 1]:.3e} {hist[-1, 2]:.3e}")
    return 0


def _cmd_generate(args):
    inst = generate(InstanceSpec(N=args.N, M=args.M, K=args.K, J=args.J, seed=args.seed))
    dump_instance(inst, args.out_dir)
    print(f"wrote instance to {args.out_dir}")
    return 0


def _cmd_presets(args):
    for name in PRESETS:
        print(f"{name:8s} {describe(name)}")
    return 0


def _instance_args(p):
    p.add_argument("--N", type=int, default=500)
    p.add_argument("--M", type=int, default=150)
    p.add_argument("--K", type=int, default=50)
    p.add_argument("--J", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")


def build_parser():
    parser = argparse.ArgumentParser(prog="jointsparse",
                                     description="MMV joint-sparse recovery benchmarks")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment file or a preset")
    p.add_argument("experiment", help="path to an experiment JSON file or a preset name")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--out-dir", default="results")
    p.add_argument("--format", choices=["csv", "json", "both"], default="csv")
    p.add_argument("--threads", type=int,
                   help="worker processes (default: $JOINTSPARSE_THREADS or 1)")
    p.add_argument("--solver", action="append",
                   help="restrict to this solver label or identifier (repeatable)")
    p.add_argument("--full-scale", action="store_true",
                   help="use the original problem sizes and trial counts")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("trace", help="write the per-iteration stopping triple")
    _instance_args(p)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--s", type=int)
    p.add_argument("--backend", choices=["plain", "smw"], default="plain")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("generate", help="dump a synthetic instance as text matrices")
    _instance_args(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("presets", help="list built-in experiments")
    p.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SpecError, ValueError, KeyError, OSError) as err:
        print(f"jointsparse: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
