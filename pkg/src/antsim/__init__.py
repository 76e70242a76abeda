"""Ant-colony routing core, deterministic wireless simulator, and sweep runner.

The routing core (``antsim.core``) is backend-agnostic: nodes consume frames
and return action lists. The bundled backend (``antsim.sim``) is a seeded
discrete-event simulator with lossy, possibly asymmetric links. Scenario and
sweep files drive campaigns through ``antsim.runner`` or the ``antsim`` CLI.
"""

from .core import (
    BROADCAST,
    Address,
    Broadcast,
    Deliver,
    Drop,
    DropReason,
    NoRouteError,
    Node,
    Packet,
    PacketKind,
    PheromoneEntry,
    PolicyConfig,
    RoutingTable,
    Unicast,
    forwarding_distribution,
    select_from,
    select_next_hop,
)
from .metrics import MetricsRecorder, MetricsSnapshot, flows_csv_bytes, trace_csv_bytes
from .runner import CampaignResult, RunRecord, execute
from .scenario import (
    ConfigError,
    LinkSpec,
    RunSpec,
    ScenarioConfig,
    SweepSpec,
    TrafficFlow,
    UnknownParameterError,
    apply_overrides,
    expand_sweep,
    parse_scenario,
    parse_sweep,
)
from .sim import (
    DisconnectedTopologyWarning,
    MobilitySpec,
    RunResult,
    Simulator,
    Topology,
    TopologySpec,
    build_topology,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "Address",
    "BROADCAST",
    "Broadcast",
    "CampaignResult",
    "ConfigError",
    "Deliver",
    "DisconnectedTopologyWarning",
    "Drop",
    "DropReason",
    "LinkSpec",
    "MetricsRecorder",
    "MetricsSnapshot",
    "MobilitySpec",
    "NoRouteError",
    "Node",
    "Packet",
    "PacketKind",
    "PheromoneEntry",
    "PolicyConfig",
    "RoutingTable",
    "RunRecord",
    "RunResult",
    "RunSpec",
    "ScenarioConfig",
    "Simulator",
    "SweepSpec",
    "Topology",
    "TopologySpec",
    "TrafficFlow",
    "Unicast",
    "UnknownParameterError",
    "apply_overrides",
    "build_topology",
    "execute",
    "expand_sweep",
    "flows_csv_bytes",
    "forwarding_distribution",
    "parse_scenario",
    "parse_sweep",
    "run",
    "select_from",
    "select_next_hop",
    "trace_csv_bytes",
]
