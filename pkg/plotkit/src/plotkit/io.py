"""Reader for the sweep CSV schema written by the simulation CLI."""

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError

COLUMNS = (
    "scenario",
    "system",
    "N",
    "alpha1",
    "alpha2",
    "L1_km",
    "L2_km",
    "metric",
    "mean",
    "sd",
    "n",
    "converged_fraction",
    "seed",
)


@dataclass(frozen=True)
class SweepRow:
    scenario: str
    system: str
    produced: int
    alpha1: float
    alpha2: float  # None for single-fiber rows
    l1_km: float
    l2_km: float  # None for single-fiber rows
    metric: str
    mean: float
    sd: float
    n: int
    converged_fraction: float
    seed: int

    @property
    def is_bipartite(self):
        return self.l2_km is not None


def _parse(record, line_no):
    try:
        return SweepRow(
            scenario=record["scenario"],
            system=record["system"],
            produced=int(record["N"]),
            alpha1=float(record["alpha1"]),
            alpha2=float(record["alpha2"]) if record["alpha2"] else None,
            l1_km=float(record["L1_km"]),
            l2_km=float(record["L2_km"]) if record["L2_km"] else None,
            metric=record["metric"],
            mean=float(record["mean"]),
            sd=float(record["sd"]),
            n=int(record["n"]),
            converged_fraction=float(record["converged_fraction"]),
            seed=int(record["seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"line {line_no}: bad row ({exc})") from exc


def read_sweep(path):
    """All rows of one sweep CSV, schema-checked. Order preserved."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        missing = [c for c in COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns {', '.join(missing)}")
        rows = [_parse(record, i) for i, record in enumerate(reader, start=2)]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def metrics_present(rows):
    return sorted({r.metric for r in rows})


def select_metric(rows, metric):
    picked = [r for r in rows if r.metric == metric]
    if not picked:
        raise SchemaError(
            f"metric {metric!r} not in file; present: {', '.join(metrics_present(rows))}"
        )
    return picked


def group_value(row, column):
    """The value of a schema column as it appears in the CSV, for grouping."""
    mapping = {
        "scenario": row.scenario,
        "system": row.system,
        "N": row.produced,
        "alpha1": row.alpha1,
        "alpha2": row.alpha2,
        "seed": row.seed,
    }
    if column not in mapping:
        raise SchemaError(f"cannot group by {column!r}; pick one of {', '.join(mapping)}")
    return mapping[column]
