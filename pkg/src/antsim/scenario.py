"""Scenario and sweep files: grammar, parsing, and sweep expansion.

Scenario files are section/key-value text with explicit units:

    [topology]
    kind = line
    nodes = 5

    [flow]
    source = 0
    destination = 4
    rate = 10 /s

Unknown sections or keys are errors that name the offending line. Sweep
files list parameter paths (``section.key``) with comma-separated values;
the cartesian product of all axes is expanded into a deterministic run list.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from typing import Callable

from .core.packets import Address
from .core.policy import EXPONENTIAL, LINEAR, PolicyConfig
from .sim.mobility import MobilitySpec, RANDOM_WAYPOINT, STATIC
from .sim.topology import (
    DIAMOND,
    EXPLICIT,
    GRID,
    LINE,
    RANDOM_GEOMETRIC,
    TopologySpec,
)


class ConfigError(Exception):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class UnknownParameterError(ConfigError):
    """A sweep path does not resolve to a scenario field."""


# -- configuration dataclasses ----------------------------------------------


@dataclass
class TrafficFlow:
    source: Address
    destination: Address
    rate: float = 1.0  # packets/s
    payload_size: int = 512  # bytes
    start: float = 0.0  # seconds
    end: float | None = None  # defaults to run duration


@dataclass
class LinkSpec:
    loss: float = 0.0  # global loss probability; delivery prob is 1 - loss
    latency: float = 0.001  # seconds per hop
    edge_loss: dict[tuple[Address, Address], float] = field(default_factory=dict)
    edge_latency: dict[tuple[Address, Address], float] = field(default_factory=dict)
    # (u, v, directed, time in seconds): remove the edge(s) mid-run.
    severances: list[tuple[Address, Address, bool, float]] = field(default_factory=list)

    def delivery_prob(self, u: Address, v: Address) -> float:
        return 1.0 - self.edge_loss.get((u, v), self.loss)

    def latency_us(self, u: Address, v: Address) -> int:
        return int(round(self.edge_latency.get((u, v), self.latency) * 1_000_000))


@dataclass
class ScenarioConfig:
    topology: TopologySpec = field(default_factory=TopologySpec)
    links: LinkSpec = field(default_factory=LinkSpec)
    mobility: MobilitySpec = field(default_factory=MobilitySpec)
    flows: list[TrafficFlow] = field(default_factory=list)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    duration: float = 10.0  # seconds
    seed: int = 1
    repetitions: int = 1
    trace_interval: float = 1.0  # seconds; 0 disables the pheromone trace

    def flow_end(self, flow: TrafficFlow) -> float:
        return self.duration if flow.end is None else flow.end

    def validate(self) -> None:
        """Reject malformed scenarios before any event executes."""
        try:
            self.policy.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.duration <= 0:
            raise ConfigError("duration must be positive")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.trace_interval < 0:
            raise ConfigError("trace_interval must be >= 0")
        if not 0.0 <= self.links.loss <= 1.0:
            raise ConfigError("loss must be within [0, 1]")
        if self.links.latency <= 0:
            raise ConfigError("latency must be positive")
        n = self.topology.node_count()
        if n < 2:
            raise ConfigError("topology needs at least 2 nodes")
        for (u, v), p in self.links.edge_loss.items():
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"edge {u}>{v} loss must be within [0, 1]")
            self._check_addr(u, n)
            self._check_addr(v, n)
        for (u, v), lat in self.links.edge_latency.items():
            if lat <= 0:
                raise ConfigError(f"edge {u}>{v} latency must be positive")
            self._check_addr(u, n)
            self._check_addr(v, n)
        for u, v, _, at in self.links.severances:
            self._check_addr(u, n)
            self._check_addr(v, n)
            if at < 0:
                raise ConfigError("sever time must be >= 0")
        for i, flow in enumerate(self.flows):
            self._check_addr(flow.source, n)
            self._check_addr(flow.destination, n)
            if flow.source == flow.destination:
                raise ConfigError(f"flow {i}: source equals destination")
            if flow.rate <= 0:
                raise ConfigError(f"flow {i}: rate must be positive")
            if flow.payload_size < 0:
                raise ConfigError(f"flow {i}: payload must be >= 0")
            end = self.flow_end(flow)
            if not 0.0 <= flow.start < end:
                raise ConfigError(f"flow {i}: start must be within [0, end)")
            if end > self.duration:
                raise ConfigError(f"flow {i}: end exceeds scenario duration")
        if self.mobility.kind == RANDOM_WAYPOINT:
            if self.topology.kind == EXPLICIT:
                raise ConfigError("random_waypoint mobility requires a geometric topology")
            if self.mobility.update_interval <= 0:
                raise ConfigError("mobility update interval must be positive")
            if not 0 < self.mobility.speed_min <= self.mobility.speed_max:
                raise ConfigError("mobility speeds must satisfy 0 < min <= max")
            if self.mobility.pause < 0:
                raise ConfigError("mobility pause must be >= 0")

    def _check_addr(self, addr: Address, n: int) -> None:
        if not 0 <= addr < n:
            raise ConfigError(f"address {addr} not in topology (0..{n - 1})")


# -- value parsers -----------------------------------------------------------


def _number(tok: str, line: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ConfigError(f"expected a number, got {tok!r}", line) from None


def parse_float(value: str, line: int) -> float:
    return _number(value.strip(), line)


def parse_int(value: str, line: int) -> int:
    tok = value.strip()
    try:
        return int(tok)
    except ValueError:
        raise ConfigError(f"expected an integer, got {tok!r}", line) from None


def parse_duration(value: str, line: int) -> float:
    """Duration in seconds; accepts s, ms, us suffixes (bare means seconds)."""
    parts = value.split()
    if len(parts) == 1:
        return _number(parts[0], line)
    if len(parts) == 2:
        num = _number(parts[0], line)
        scale = {"s": 1.0, "ms": 1e-3, "us": 1e-6}.get(parts[1])
        if scale is not None:
            return num * scale
    raise ConfigError(f"expected a duration like '10 s' or '1 ms', got {value!r}", line)


def parse_distance(value: str, line: int) -> float:
    parts = value.split()
    if len(parts) == 2 and parts[1] == "m":
        return _number(parts[0], line)
    if len(parts) == 1:
        return _number(parts[0], line)
    raise ConfigError(f"expected a distance like '100 m', got {value!r}", line)


def parse_rate(value: str, line: int) -> float:
    parts = value.split()
    if len(parts) == 2 and parts[1] in ("/s", "pps"):
        return _number(parts[0], line)
    if len(parts) == 1:
        return _number(parts[0], line)
    raise ConfigError(f"expected a rate like '10 /s', got {value!r}", line)


def parse_bytes(value: str, line: int) -> int:
    parts = value.split()
    if len(parts) == 2 and parts[1] == "B":
        return int(_number(parts[0], line))
    if len(parts) == 1:
        return int(_number(parts[0], line))
    raise ConfigError(f"expected a size like '512 B', got {value!r}", line)


def parse_area(value: str, line: int) -> tuple[float, float]:
    parts = value.split()
    if len(parts) in (3, 4) and parts[1] == "x":
        if len(parts) == 4 and parts[3] != "m":
            raise ConfigError(f"expected an area like '500 x 500 m', got {value!r}", line)
        return (_number(parts[0], line), _number(parts[2], line))
    raise ConfigError(f"expected an area like '500 x 500 m', got {value!r}", line)


def parse_speed_range(value: str, line: int) -> tuple[float, float]:
    parts = value.split()
    if len(parts) in (3, 4) and parts[1] == "..":
        if len(parts) == 4 and parts[3] != "m/s":
            raise ConfigError(f"expected a range like '1 .. 5 m/s', got {value!r}", line)
        return (_number(parts[0], line), _number(parts[2], line))
    raise ConfigError(f"expected a range like '1 .. 5 m/s', got {value!r}", line)


def parse_edge_ref(tok: str, line: int) -> tuple[Address, Address, bool]:
    """``u-v`` is both directions, ``u>v`` is directed."""
    tok = tok.strip()
    for sep, directed in ((">", True), ("-", False)):
        if sep in tok:
            left, _, right = tok.partition(sep)
            try:
                return (int(left), int(right), directed)
            except ValueError:
                break
    raise ConfigError(f"expected an edge like '0-1' or '0>1', got {tok!r}", line)


def parse_edge_list(value: str, line: int) -> list[tuple[Address, Address, bool]]:
    return [parse_edge_ref(tok, line) for tok in value.split(",") if tok.strip()]


def _choice(*options: str) -> Callable[[str, int], str]:
    def parse(value: str, line: int) -> str:
        tok = value.strip()
        if tok not in options:
            raise ConfigError(f"expected one of {', '.join(options)}, got {tok!r}", line)
        return tok

    return parse


# -- schema ------------------------------------------------------------------

# section -> key -> (value parser, setter on ScenarioConfig). The same table
# drives scenario parsing, sweep-path resolution, and sweep overrides.
SCHEMA: dict[str, dict[str, tuple[Callable, Callable]]] = {
    "topology": {
        "kind": (_choice(LINE, GRID, DIAMOND, RANDOM_GEOMETRIC, EXPLICIT),
                 lambda c, v: setattr(c.topology, "kind", v)),
        "nodes": (parse_int, lambda c, v: setattr(c.topology, "nodes", v)),
        "rows": (parse_int, lambda c, v: setattr(c.topology, "rows", v)),
        "cols": (parse_int, lambda c, v: setattr(c.topology, "cols", v)),
        "spacing": (parse_distance, lambda c, v: setattr(c.topology, "spacing", v)),
        "area": (parse_area, lambda c, v: setattr(c.topology, "area", v)),
        "comm_range": (parse_distance, lambda c, v: setattr(c.topology, "comm_range", v)),
        "edges": (parse_edge_list, lambda c, v: setattr(c.topology, "edges", v)),
    },
    "links": {
        "loss": (parse_float, lambda c, v: setattr(c.links, "loss", v)),
        "latency": (parse_duration, lambda c, v: setattr(c.links, "latency", v)),
    },
    "mobility": {
        "kind": (_choice(STATIC, RANDOM_WAYPOINT),
                 lambda c, v: setattr(c.mobility, "kind", v)),
        "speed": (parse_speed_range, lambda c, v: (
            setattr(c.mobility, "speed_min", v[0]),
            setattr(c.mobility, "speed_max", v[1]),
        )),
        "pause": (parse_duration, lambda c, v: setattr(c.mobility, "pause", v)),
        "update": (parse_duration, lambda c, v: setattr(c.mobility, "update_interval", v)),
    },
    "policy": {
        "evaporation": (_choice(EXPONENTIAL, LINEAR),
                        lambda c, v: setattr(c.policy, "evaporation", v)),
        "evap_q": (parse_float, lambda c, v: setattr(c.policy, "evap_q", v)),
        "evap_m": (parse_float, lambda c, v: setattr(c.policy, "evap_m", v)),
        "evap_interval": (parse_duration,
                          lambda c, v: setattr(c.policy, "evap_interval", v)),
        "removal_threshold": (parse_float,
                              lambda c, v: setattr(c.policy, "removal_threshold", v)),
        "reinforcement": (parse_float, lambda c, v: setattr(c.policy, "reinforcement", v)),
        "initial_pheromone": (parse_float,
                              lambda c, v: setattr(c.policy, "initial_pheromone", v)),
        "alpha": (parse_float, lambda c, v: setattr(c.policy, "alpha", v)),
        "ttl": (parse_int, lambda c, v: setattr(c.policy, "initial_ttl", v)),
        "discovery_retries": (parse_int,
                              lambda c, v: setattr(c.policy, "discovery_retries", v)),
        "dedup_capacity": (parse_int,
                           lambda c, v: setattr(c.policy, "dedup_capacity", v)),
        "pending_capacity": (parse_int,
                             lambda c, v: setattr(c.policy, "pending_capacity", v)),
    },
    "run": {
        "duration": (parse_duration, lambda c, v: setattr(c, "duration", v)),
        "seed": (parse_int, lambda c, v: setattr(c, "seed", v)),
        "repetitions": (parse_int, lambda c, v: setattr(c, "repetitions", v)),
        "trace_interval": (parse_duration, lambda c, v: setattr(c, "trace_interval", v)),
    },
}

_FLOW_KEYS: dict[str, tuple[Callable, str]] = {
    "source": (parse_int, "source"),
    "destination": (parse_int, "destination"),
    "rate": (parse_rate, "rate"),
    "payload": (parse_bytes, "payload_size"),
    "start": (parse_duration, "start"),
    "end": (parse_duration, "end"),
}

# topology.edges values contain commas (the sweep value separator); seed and
# repetitions are consumed during expansion, before overrides apply.
_UNSWEEPABLE = {"topology.edges", "run.seed", "run.repetitions"}


# -- scenario parsing ---------------------------------------------------------


def _split_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_scenario(text: str) -> ScenarioConfig:
    config = ScenarioConfig()
    section: str | None = None
    flow_fields: dict[str, object] | None = None
    flow_line = 0
    seen_keys: set[tuple[str, str]] = set()

    def finish_flow() -> None:
        nonlocal flow_fields
        if flow_fields is None:
            return
        if "source" not in flow_fields or "destination" not in flow_fields:
            raise ConfigError("flow needs source and destination", flow_line)
        config.flows.append(TrafficFlow(**flow_fields))  # type: ignore[arg-type]
        flow_fields = None

    for lineno, line in _split_lines(text):
        if line.startswith("[") and line.endswith("]"):
            finish_flow()
            name = line[1:-1].strip()
            if name == "flow":
                flow_fields = {}
                flow_line = lineno
                section = "flow"
            elif name in SCHEMA:
                section = name
            else:
                raise ConfigError(f"unknown section [{name}]", lineno, key=name)
            continue
        if section is None:
            raise ConfigError("key outside any section", lineno)
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        lhs, _, rhs = line.partition("=")
        key = lhs.strip()
        value = rhs.strip()
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno, key=key)

        if section == "flow":
            assert flow_fields is not None
            if key not in _FLOW_KEYS:
                raise ConfigError(f"unknown key {key!r} in [flow]", lineno, key=key)
            if _FLOW_KEYS[key][1] in flow_fields:
                raise ConfigError(f"duplicate key {key!r}", lineno, key=key)
            parser, attr = _FLOW_KEYS[key]
            flow_fields[attr] = parser(value, lineno)
            continue

        if section == "links" and key.startswith("edge "):
            _parse_edge_override(config, key, value, lineno)
            continue
        if section == "links" and key == "sever":
            _parse_sever(config, value, lineno)
            continue

        entry = SCHEMA[section].get(key)
        if entry is None:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno, key=key)
        if (section, key) in seen_keys:
            raise ConfigError(f"duplicate key {key!r}", lineno, key=key)
        seen_keys.add((section, key))
        parser, setter = entry
        setter(config, parser(value, lineno))

    finish_flow()
    config.validate()
    return config


def _parse_edge_override(config: ScenarioConfig, key: str, value: str, lineno: int) -> None:
    parts = key.split()
    if len(parts) != 3 or parts[2] not in ("loss", "latency"):
        raise ConfigError(
            f"expected 'edge <u-v|u>v> loss|latency', got {key!r}", lineno, key=key
        )
    u, v, directed = parse_edge_ref(parts[1], lineno)
    pairs = [(u, v)] if directed else [(u, v), (v, u)]
    if parts[2] == "loss":
        p = parse_float(value, lineno)
        for pair in pairs:
            config.links.edge_loss[pair] = p
    else:
        lat = parse_duration(value, lineno)
        for pair in pairs:
            config.links.edge_latency[pair] = lat


def _parse_sever(config: ScenarioConfig, value: str, lineno: int) -> None:
    edge_tok, sep, time_tok = value.partition("@")
    if not sep:
        raise ConfigError(f"expected 'sever = u-v @ 5 s', got {value!r}", lineno, key="sever")
    u, v, directed = parse_edge_ref(edge_tok, lineno)
    at = parse_duration(time_tok.strip(), lineno)
    config.links.severances.append((u, v, directed, at))


# -- sweeps -------------------------------------------------------------------


@dataclass
class SweepAxis:
    path: str  # "section.key"
    values: list[object]


@dataclass
class SweepSpec:
    axes: list[SweepAxis] = field(default_factory=list)


@dataclass
class RunSpec:
    run_index: int
    combo_index: int
    rep_index: int
    overrides: dict[str, object]
    seed: int


def _resolve_path(path: str, line: int | None = None) -> tuple[Callable, Callable]:
    section, _, key = path.partition(".")
    entry = SCHEMA.get(section, {}).get(key)
    if entry is None or path in _UNSWEEPABLE:
        raise UnknownParameterError(f"unknown parameter path {path!r}", line, key=path)
    return entry


def parse_sweep(text: str) -> SweepSpec:
    spec = SweepSpec()
    section = None
    seen: set[str] = set()
    for lineno, line in _split_lines(text):
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section != "sweep":
                raise ConfigError(f"unknown section [{section}]", lineno, key=section)
            continue
        if section != "sweep":
            raise ConfigError("key outside [sweep] section", lineno)
        if "=" not in line:
            raise ConfigError(f"expected 'path = v1, v2, ...', got {line!r}", lineno)
        lhs, _, rhs = line.partition("=")
        path = lhs.strip()
        parser, _ = _resolve_path(path, lineno)
        if path in seen:
            raise ConfigError(f"duplicate sweep axis {path!r}", lineno, key=path)
        seen.add(path)
        values = [parser(tok.strip(), lineno) for tok in rhs.split(",") if tok.strip()]
        if not values:
            raise ConfigError(f"sweep axis {path!r} has no values", lineno, key=path)
        spec.axes.append(SweepAxis(path, values))
    return spec


def apply_overrides(config: ScenarioConfig, overrides: dict[str, object]) -> ScenarioConfig:
    """Fresh config with sweep overrides applied; the input is untouched."""
    out = copy.deepcopy(config)
    for path, value in overrides.items():
        _, setter = _resolve_path(path)
        setter(out, value)
    return out


def expand_sweep(
    config: ScenarioConfig, sweep: SweepSpec, base_seed: int | None = None
) -> list[RunSpec]:
    """Cartesian product of sweep axes times repetitions.

    Combinations enumerate in declaration order (first axis most
    significant); seeds are base_seed + run_index.
    """
    if base_seed is None:
        base_seed = config.seed
    for axis in sweep.axes:
        _resolve_path(axis.path)
    runs: list[RunSpec] = []
    value_lists = [axis.values for axis in sweep.axes]
    paths = [axis.path for axis in sweep.axes]
    for combo_index, combo in enumerate(itertools.product(*value_lists)):
        overrides = dict(zip(paths, combo))
        for rep in range(config.repetitions):
            run_index = combo_index * config.repetitions + rep
            runs.append(RunSpec(run_index, combo_index, rep, overrides, base_seed + run_index))
    return runs
