"""Campaign execution: isolation, aggregation, failure handling, layout."""

import math

import pytest

from antsim import execute, expand_sweep, parse_scenario, parse_sweep
from antsim.runner import _mean_std

LINE = """
[topology]
kind = line
nodes = 5

[flow]
source = 0
destination = 4
rate = 10 /s

[run]
duration = 2 s
seed = 1
repetitions = %d
"""


def campaign(tmp_path, name, reps=2, sweep_text="", parallelism=1):
    cfg = parse_scenario(LINE % reps)
    runs = expand_sweep(cfg, parse_sweep(sweep_text))
    out = tmp_path / name
    result = execute(cfg, runs, out_dir=out, parallelism=parallelism)
    return result, out


def test_parallelism_does_not_change_outputs(tmp_path):
    sweep = "[sweep]\npolicy.alpha = 1, 2\n"
    _, serial = campaign(tmp_path, "serial", sweep_text=sweep, parallelism=1)
    _, parallel = campaign(tmp_path, "parallel", sweep_text=sweep, parallelism=4)
    assert (serial / "summary.csv").read_bytes() == (parallel / "summary.csv").read_bytes()
    assert (serial / "aggregate.csv").read_bytes() == (parallel / "aggregate.csv").read_bytes()


def test_single_repetition_reports_zero_stddev(tmp_path):
    result, out = campaign(tmp_path, "single", reps=1)
    agg = (out / "aggregate.csv").read_text().splitlines()
    header = agg[0].split(",")
    row = agg[1].split(",")
    assert row[header.index("delivery_ratio_std")] == "0.000000"


def test_lossless_line_five_reps_mean_one_std_zero(tmp_path):
    result, out = campaign(tmp_path, "five", reps=5)
    assert all(r.ok for r in result.records)
    agg = (out / "aggregate.csv").read_text().splitlines()
    header = agg[0].split(",")
    row = agg[1].split(",")
    assert row[header.index("delivery_ratio_mean")] == "1.000000"
    assert row[header.index("delivery_ratio_std")] == "0.000000"


def test_failed_run_is_recorded_and_campaign_continues(tmp_path):
    # evap_q = 0 fails validation inside the run; the other combination
    # proceeds and the campaign reports partial success.
    sweep = "[sweep]\npolicy.evap_q = 0.9, 0.0\n"
    result, out = campaign(tmp_path, "faulty", sweep_text=sweep)
    oks = [r for r in result.records if r.ok]
    fails = [r for r in result.records if not r.ok]
    assert len(oks) == 2 and len(fails) == 2
    assert not result.all_ok
    assert all("evap_q" in r.error for r in fails)
    summary = (out / "summary.csv").read_text().splitlines()
    assert sum(line.endswith(",failed") for line in summary[1:]) == 2


def test_output_layout(tmp_path):
    _, out = campaign(tmp_path, "layout", reps=2, sweep_text="[sweep]\npolicy.alpha = 1, 2\n")
    assert (out / "summary.csv").exists()
    assert (out / "aggregate.csv").exists()
    for combo in ("000", "001"):
        for rep in ("00", "01"):
            run_dir = out / "runs" / combo / rep
            assert (run_dir / "flows.csv").exists()
            assert (run_dir / "pheromone_trace.csv").exists()
            assert (run_dir / "meta.json").exists()


def test_summary_carries_sweep_columns(tmp_path):
    _, out = campaign(tmp_path, "cols", sweep_text="[sweep]\npolicy.alpha = 1, 2\n")
    header = (out / "summary.csv").read_text().splitlines()[0]
    assert header.split(",")[4] == "policy.alpha"


def test_mean_std_edge_cases():
    assert _mean_std([1.0]) == (1.0, 0.0)
    mean, std = _mean_std([1.0, 2.0, 3.0])
    assert mean == pytest.approx(2.0)
    assert std == pytest.approx(1.0)
    mean, std = _mean_std([])
    assert math.isnan(mean) and math.isnan(std)


def test_rejects_bad_parallelism(tmp_path):
    cfg = parse_scenario(LINE % 1)
    with pytest.raises(ValueError):
        execute(cfg, [], out_dir=tmp_path / "x", parallelism=0)
