"""Campaign execution: expanded runs, optional process parallelism, aggregation.

Each run is an isolated pure function of (scenario, overrides, seed), so the
campaign outputs are identical for any parallelism level. A failed run is
recorded and the rest of the campaign proceeds.

Output layout under the chosen directory:

    summary.csv                 one row per run (deterministic bytes)
    aggregate.csv               one row per sweep combination
    runs/<combo>/<rep>/flows.csv
    runs/<combo>/<rep>/pheromone_trace.csv
    runs/<combo>/<rep>/meta.json   seed, overrides, wall clock (not byte-stable)
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .metrics import MetricsSnapshot, flows_csv_bytes, fmt, trace_csv_bytes
from .scenario import RunSpec, ScenarioConfig, apply_overrides
from .sim.engine import run as run_scenario

SUMMARY_METRIC_COLUMNS = (
    "sent,delivered,dropped_loss,dropped_ttl,dropped_no_route,in_flight,"
    "delivery_ratio,mean_hops,mean_latency_ms,fant_tx,bant_tx,"
    "route_failure_tx,discoveries,overhead,status"
)


@dataclass
class RunRecord:
    spec: RunSpec
    snapshot: MetricsSnapshot | None
    error: str | None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class CampaignResult:
    records: list[RunRecord]
    out_dir: Path | None

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.records)


def _value_str(value: object) -> str:
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def _run_one(args: tuple[RunSpec, ScenarioConfig, str | None]) -> RunRecord:
    spec, base, out_dir = args
    try:
        scenario = apply_overrides(base, spec.overrides)
        result = run_scenario(scenario, seed=spec.seed)
        if out_dir is not None:
            run_dir = Path(out_dir) / "runs" / f"{spec.combo_index:03d}" / f"{spec.rep_index:02d}"
            run_dir.mkdir(parents=True, exist_ok=True)
            (run_dir / "flows.csv").write_bytes(flows_csv_bytes(result.snapshot))
            (run_dir / "pheromone_trace.csv").write_bytes(trace_csv_bytes(result.trace))
            _write_meta(run_dir, spec, result.snapshot.wall_clock_s, None)
        return RunRecord(spec, result.snapshot, None)
    except Exception as exc:  # a failed run must not abort the campaign
        if out_dir is not None:
            run_dir = Path(out_dir) / "runs" / f"{spec.combo_index:03d}" / f"{spec.rep_index:02d}"
            run_dir.mkdir(parents=True, exist_ok=True)
            _write_meta(run_dir, spec, None, f"{type(exc).__name__}: {exc}")
        return RunRecord(spec, None, f"{type(exc).__name__}: {exc}")


def _write_meta(run_dir: Path, spec: RunSpec, wall_clock_s: float | None, error: str | None) -> None:
    meta = {
        "run": spec.run_index,
        "combo": spec.combo_index,
        "rep": spec.rep_index,
        "seed": spec.seed,
        "overrides": {k: str(v) for k, v in spec.overrides.items()},
        "wall_clock_s": wall_clock_s,
        "error": error,
    }
    (run_dir / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def execute(
    base: ScenarioConfig,
    runs: list[RunSpec],
    out_dir: str | Path | None = None,
    parallelism: int = 1,
) -> CampaignResult:
    """Execute every run and write summary/aggregate CSVs.

    Outputs are a pure function of the run list: any parallelism level yields
    identical summary and aggregate bytes.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)
    args = [(spec, base, str(out_path) if out_path else None) for spec in runs]
    if parallelism == 1 or len(runs) <= 1:
        records = [_run_one(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_run_one, args))
    records.sort(key=lambda r: r.spec.run_index)
    if out_path is not None:
        axis_paths = list(runs[0].overrides) if runs else []
        (out_path / "summary.csv").write_bytes(summary_csv_bytes(records, axis_paths))
        (out_path / "aggregate.csv").write_bytes(aggregate_csv_bytes(records, axis_paths))
    return CampaignResult(records, out_path)


def summary_csv_bytes(records: list[RunRecord], axis_paths: list[str]) -> bytes:
    header = "run,combo,rep,seed"
    if axis_paths:
        header += "," + ",".join(axis_paths)
    header += "," + SUMMARY_METRIC_COLUMNS
    lines = [header]
    for rec in records:
        spec = rec.spec
        cells = [str(spec.run_index), str(spec.combo_index), str(spec.rep_index), str(spec.seed)]
        cells += [_value_str(spec.overrides[p]) for p in axis_paths]
        s = rec.snapshot
        if s is None:
            cells += [""] * 14 + ["failed"]
        else:
            cells += [
                str(s.sent),
                str(s.delivered),
                str(s.dropped_loss),
                str(s.dropped_ttl),
                str(s.dropped_no_route),
                str(s.in_flight),
                fmt(s.delivery_ratio),
                fmt(s.mean_hops),
                fmt(s.mean_latency_ms),
                str(s.fant_tx),
                str(s.bant_tx),
                str(s.route_failure_tx),
                str(s.discoveries),
                fmt(s.overhead),
                "ok",
            ]
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode()


def _mean_std(values: list[float]) -> tuple[float, float]:
    """Mean and sample standard deviation; a single value has deviation 0."""
    if not values:
        return (float("nan"), float("nan"))
    mean = sum(values) / len(values)
    if len(values) < 2 or math.isnan(mean):
        return (mean, 0.0 if not math.isnan(mean) else float("nan"))
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return (mean, math.sqrt(var))


def aggregate_csv_bytes(records: list[RunRecord], axis_paths: list[str]) -> bytes:
    header = "combo"
    if axis_paths:
        header += "," + ",".join(axis_paths)
    header += (
        ",runs_ok,runs_failed,delivery_ratio_mean,delivery_ratio_std,"
        "overhead_mean,overhead_std,mean_hops_mean,mean_hops_std"
    )
    lines = [header]
    combos: dict[int, list[RunRecord]] = {}
    for rec in records:
        combos.setdefault(rec.spec.combo_index, []).append(rec)
    for combo_index in sorted(combos):
        group = combos[combo_index]
        ok = [r for r in group if r.ok]
        cells = [str(combo_index)]
        cells += [_value_str(group[0].spec.overrides[p]) for p in axis_paths]
        cells += [str(len(ok)), str(len(group) - len(ok))]
        for metric in ("delivery_ratio", "overhead", "mean_hops"):
            mean, std = _mean_std([getattr(r.snapshot, metric) for r in ok])
            cells += [fmt(mean), fmt(std)]
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode()
