"""Actions returned by the routing core for a backend to carry out.

The core never touches a radio or an event queue; every operation returns a
list of these actions and the backend (here: the simulator) interprets them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .packets import Address, Packet


class DropReason(enum.Enum):
    DUPLICATE = "duplicate"
    TTL_EXPIRED = "ttl_expired"
    NO_ROUTE = "no_route"


@dataclass(frozen=True, slots=True)
class Broadcast:
    """Transmit to every current neighbor."""

    packet: Packet


@dataclass(frozen=True, slots=True)
class Unicast:
    """Transmit to one chosen neighbor."""

    packet: Packet
    next_hop: Address


@dataclass(frozen=True, slots=True)
class Deliver:
    """Packet reached its destination (DATA) or completed a discovery (BANT)."""

    packet: Packet


@dataclass(frozen=True, slots=True)
class Drop:
    """Packet discarded; dropping is a normal outcome, not a fault."""

    packet: Packet
    reason: DropReason


Action = Union[Broadcast, Unicast, Deliver, Drop]
