"""CSV and JSON reports of experiment results.

CSV output is two files, ``<name>_trials.csv`` and ``<name>_aggregates.csv``.
JSON output is ``<name>.json`` holding ``spec``, ``records`` and
``aggregates``. Floats are written with ``repr`` precision so both formats
read back exactly.
"""

import csv
import json
from dataclasses import asdict, fields
from pathlib import Path

from .experiment import AggregateRow, TrialRecord

__all__ = [
    "TRIAL_COLUMNS",
    "AGGREGATE_COLUMNS",
    "emit_report",
    "read_trials_csv",
    "read_aggregates_csv",
    "read_json_report",
]

TRIAL_COLUMNS = ["instance_id", "solver", "N", "M", "K", "J", "seed", "rmse",
                 "success", "iterations", "time_s", "termination"]
AGGREGATE_COLUMNS = [f.name for f in fields(AggregateRow)]


def _trial_row(r):
    return [r.instance_id, r.solver, r.N, r.M, r.K, r.J, r.seed, repr(r.rmse),
            "true" if r.success else "false", r.iterations,
            repr(r.wall_time_seconds), r.termination]


def emit_report(records, aggregates, fmt, path, name="report", spec=None):
    """Write `records` and `aggregates` under directory `path`.

    Parameters
    ----------
    fmt : {"csv", "json"}
    path : str or Path
        Output directory, created if missing.
    name : str
        File stem.
    spec : ExperimentSpec, optional
        Echoed into the JSON report.

    Returns
    -------
    list of Path
        Files written.
    """
    if not records:
        raise ValueError("no records to report")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    fmt = fmt.lower()
    if fmt == "csv":
        trials_path = out / f"{name}_trials.csv"
        with open(trials_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRIAL_COLUMNS)
            w.writerows(_trial_row(r) for r in records)
        agg_path = out / f"{name}_aggregates.csv"
        with open(agg_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(AGGREGATE_COLUMNS)
            for a in aggregates:
                w.writerow([repr(v) if isinstance(v, float) else v
                            for v in (getattr(a, c) for c in AGGREGATE_COLUMNS)])
        return [trials_path, agg_path]
    if fmt == "json":
        doc = {
            "spec": spec.to_dict() if spec is not None else None,
            "records": [asdict(r) for r in records],
            "aggregates": [asdict(a) for a in aggregates],
        }
        json_path = out / f"{name}.json"
        json_path.write_text(json.dumps(doc, indent=1))
        return [json_path]
    raise ValueError(f"unknown report format {fmt!r}")


def read_trials_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != TRIAL_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [TrialRecord(
            instance_id=row["instance_id"],
            solver=row["solver"],
            N=int(row["N"]), M=int(row["M"]), K=int(row["K"]), J=int(row["J"]),
            seed=int(row["seed"]),
            rmse=float(row["rmse"]),
            success=row["success"] == "true",
            iterations=int(row["iterations"]),
            wall_time_seconds=float(row["time_s"]),
            termination=row["termination"],
        ) for row in reader]


def read_aggregates_csv(path):
    types = {f.name: f.type for f in fields(AggregateRow)}
    conv = {"int": int, "float": float, "str": str, int: int, float: float, str: str}
    with open(path, newline="") as fh:
        return [AggregateRow(**{k: conv[types[k]](v) for k, v in row.items()})
                for row in csv.DictReader(fh)]


def read_json_report(path):
    """Return ``(spec_dict, records, aggregates)`` from a JSON report."""
    doc = json.loads(Path(path).read_text())
    records = [TrialRecord(**r) for r in doc["records"]]
    aggregates = [AggregateRow(**a) for a in doc["aggregates"]]
    return doc["spec"], records, aggregates
