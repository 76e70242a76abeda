from .actions import Action, Broadcast, Deliver, Drop, DropReason, Unicast
from .forwarding import (
    NoRouteError,
    forwarding_distribution,
    select_from,
    select_next_hop,
)
from .node import Node
from .packets import BROADCAST, Address, Packet, PacketKind
from .policy import EXPONENTIAL, LINEAR, PolicyConfig
from .table import PheromoneEntry, RoutingTable, decayed_value

__all__ = [
    "Action",
    "Address",
    "BROADCAST",
    "Broadcast",
    "Deliver",
    "Drop",
    "DropReason",
    "EXPONENTIAL",
    "LINEAR",
    "NoRouteError",
    "Node",
    "Packet",
    "PacketKind",
    "PheromoneEntry",
    "PolicyConfig",
    "RoutingTable",
    "Unicast",
    "decayed_value",
    "forwarding_distribution",
    "select_from",
    "select_next_hop",
]
