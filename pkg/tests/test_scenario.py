"""Scenario grammar, validation errors, and sweep expansion."""

import pytest

from antsim import (
    ConfigError,
    ScenarioConfig,
    UnknownParameterError,
    apply_overrides,
    expand_sweep,
    parse_scenario,
    parse_sweep,
)

MINIMAL = """
[topology]
kind = line
nodes = 5

[flow]
source = 0
destination = 4
"""


def test_minimal_file_fills_every_default():
    cfg = parse_scenario(MINIMAL)
    assert cfg.topology.kind == "line" and cfg.topology.nodes == 5
    assert len(cfg.flows) == 1
    flow = cfg.flows[0]
    assert (flow.source, flow.destination) == (0, 4)
    assert flow.rate == 1.0 and flow.payload_size == 512
    assert cfg.flow_end(flow) == cfg.duration == 10.0
    assert cfg.links.loss == 0.0 and cfg.links.latency == 0.001
    assert cfg.policy.evap_q == 0.9 and cfg.policy.initial_ttl == 30
    assert cfg.policy.alpha == 1.0 and cfg.policy.discovery_retries == 2
    assert cfg.mobility.kind == "static"
    assert cfg.seed == 1 and cfg.repetitions == 1


def test_unknown_key_names_line_and_key():
    bad = MINIMAL + "\n[policy]\nevap_Q = 0.5\n"
    with pytest.raises(ConfigError) as err:
        parse_scenario(bad)
    assert err.value.key == "evap_Q"
    assert err.value.line is not None
    assert "evap_Q" in str(err.value) and f"line {err.value.line}" in str(err.value)


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match="unknown section"):
        parse_scenario(MINIMAL + "\n[radio]\npower = 3\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_scenario(MINIMAL + "\n[run]\nseed = 1\nseed = 2\n")


def test_malformed_number_reports_line():
    with pytest.raises(ConfigError, match="number"):
        parse_scenario(MINIMAL + "\n[policy]\nalpha = fast\n")


def test_units_are_parsed():
    cfg = parse_scenario(
        MINIMAL
        + """
[links]
latency = 250 us

[run]
duration = 2500 ms
trace_interval = 500 ms
"""
    )
    assert cfg.links.latency == pytest.approx(0.00025)
    assert cfg.duration == pytest.approx(2.5)
    assert cfg.trace_interval == pytest.approx(0.5)


def test_edge_overrides_directed_and_undirected():
    cfg = parse_scenario(
        MINIMAL
        + """
[links]
edge 1>2 loss = 0.5
edge 0-1 latency = 2 ms
"""
    )
    assert cfg.links.edge_loss == {(1, 2): 0.5}
    assert cfg.links.edge_latency == {(0, 1): 0.002, (1, 0): 0.002}


def test_sever_lines_accumulate():
    cfg = parse_scenario(
        MINIMAL
        + """
[links]
sever = 1-2 @ 5 s
sever = 3>4 @ 7 s
"""
    )
    assert cfg.links.severances == [(1, 2, False, 5.0), (3, 4, True, 7.0)]


def test_flow_requires_source_and_destination():
    with pytest.raises(ConfigError, match="source and destination"):
        parse_scenario("[topology]\nkind = line\nnodes = 3\n\n[flow]\nrate = 1 /s\n")


def test_flow_end_beyond_duration_rejected():
    bad = MINIMAL.replace("destination = 4", "destination = 4\nend = 99 s")
    with pytest.raises(ConfigError, match="duration"):
        parse_scenario(bad)


def test_flow_address_must_exist():
    with pytest.raises(ConfigError, match="address 9"):
        parse_scenario(MINIMAL.replace("destination = 4", "destination = 9"))


def test_self_flow_rejected():
    with pytest.raises(ConfigError, match="source equals destination"):
        parse_scenario(MINIMAL.replace("destination = 4", "destination = 0"))


def test_waypoint_needs_geometric_topology():
    text = """
[topology]
kind = explicit
nodes = 3
edges = 0-1, 1-2

[mobility]
kind = random_waypoint

[flow]
source = 0
destination = 2
"""
    with pytest.raises(ConfigError, match="geometric"):
        parse_scenario(text)


def test_multiple_flows_parse_in_order():
    cfg = parse_scenario(
        MINIMAL
        + """
[flow]
source = 1
destination = 3
rate = 5 /s
payload = 256 B
start = 1 s
end = 4 s
"""
    )
    assert [(f.source, f.destination) for f in cfg.flows] == [(0, 4), (1, 3)]
    assert cfg.flows[1].rate == 5.0
    assert cfg.flows[1].payload_size == 256
    assert (cfg.flows[1].start, cfg.flows[1].end) == (1.0, 4.0)


def test_sweep_expansion_counts():
    cfg = parse_scenario(MINIMAL + "\n[run]\nrepetitions = 5\n")
    sweep = parse_sweep("[sweep]\npolicy.alpha = 0.5, 1, 2\n")
    runs = expand_sweep(cfg, sweep)
    assert len(runs) == 15
    assert [r.seed for r in runs] == [cfg.seed + i for i in range(15)]
    assert {r.combo_index for r in runs} == {0, 1, 2}
    alphas = [r.overrides["policy.alpha"] for r in runs]
    assert alphas == [0.5] * 5 + [1.0] * 5 + [2.0] * 5


def test_empty_sweep_is_base_config_repetitions():
    cfg = parse_scenario(MINIMAL + "\n[run]\nrepetitions = 3\n")
    runs = expand_sweep(cfg, parse_sweep(""))
    assert len(runs) == 3
    assert all(r.overrides == {} for r in runs)


def test_two_axes_cartesian_product():
    cfg = parse_scenario(MINIMAL + "\n[run]\nrepetitions = 2\n")
    sweep = parse_sweep("[sweep]\npolicy.alpha = 1, 2, 3\nlinks.loss = 0.0, 0.1\n")
    runs = expand_sweep(cfg, sweep)
    assert len(runs) == 12
    combos = [(r.overrides["policy.alpha"], r.overrides["links.loss"]) for r in runs[::2]]
    assert combos == [(1.0, 0.0), (1.0, 0.1), (2.0, 0.0), (2.0, 0.1), (3.0, 0.0), (3.0, 0.1)]


def test_sweep_expansion_is_reproducible():
    cfg = parse_scenario(MINIMAL)
    text = "[sweep]\npolicy.alpha = 1, 2\nrun.duration = 1 s, 2 s\n"
    assert expand_sweep(cfg, parse_sweep(text)) == expand_sweep(cfg, parse_sweep(text))


def test_unknown_sweep_path_rejected():
    with pytest.raises(UnknownParameterError):
        parse_sweep("[sweep]\npolicy.gamma = 1, 2\n")
    with pytest.raises(UnknownParameterError):
        parse_sweep("[sweep]\ntopology.edges = 1, 2\n")
    # Seeds and repetitions are fixed at expansion time, not sweepable.
    with pytest.raises(UnknownParameterError):
        parse_sweep("[sweep]\nrun.seed = 1, 2\n")
    with pytest.raises(UnknownParameterError):
        parse_sweep("[sweep]\nrun.repetitions = 1, 2\n")


def test_overrides_do_not_touch_the_base_config():
    cfg = parse_scenario(MINIMAL)
    out = apply_overrides(cfg, {"policy.alpha": 2.5, "links.loss": 0.2})
    assert out.policy.alpha == 2.5 and out.links.loss == 0.2
    assert cfg.policy.alpha == 1.0 and cfg.links.loss == 0.0


def test_validate_runs_before_any_event():
    cfg = ScenarioConfig()
    cfg.policy.evap_q = 0.0
    with pytest.raises(ConfigError):
        cfg.validate()
