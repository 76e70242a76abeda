from .engine import Event, EventKind, RunResult, Simulator, run
from .mobility import MobilitySpec, RANDOM_WAYPOINT, RandomWaypointModel, STATIC
from .topology import (
    DIAMOND,
    DisconnectedTopologyWarning,
    EXPLICIT,
    GRID,
    LINE,
    RANDOM_GEOMETRIC,
    Topology,
    TopologySpec,
    build_topology,
    geometric_edges,
)

__all__ = [
    "DIAMOND",
    "DisconnectedTopologyWarning",
    "EXPLICIT",
    "Event",
    "EventKind",
    "GRID",
    "LINE",
    "MobilitySpec",
    "RANDOM_GEOMETRIC",
    "RANDOM_WAYPOINT",
    "RandomWaypointModel",
    "RunResult",
    "STATIC",
    "Simulator",
    "Topology",
    "TopologySpec",
    "build_topology",
    "geometric_edges",
    "run",
]
