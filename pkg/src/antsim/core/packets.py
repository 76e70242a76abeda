"""Addresses and the packet types exchanged between nodes."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

# Node addresses are plain integers; equality and the usual integer order are
# the documented total order used for tie-breaking.
Address = int

# Reserved broadcast address. Never a valid routing-table next hop.
BROADCAST: Address = -1


class PacketKind(enum.Enum):
    FANT = "fant"
    BANT = "bant"
    DATA = "data"
    ROUTE_FAILURE = "route_failure"


@dataclass(frozen=True, slots=True)
class Packet:
    """One routed packet.

    ``hop_count`` counts transmissions already charged against the packet, so
    ``ttl + hop_count`` stays equal to the initial TTL across relays.
    """

    kind: PacketKind
    source: Address
    destination: Address
    seq: int
    ttl: int
    hop_count: int = 0
    payload_size: int = 0

    def relayed(self) -> Packet:
        """Copy of this packet charged for one more hop."""
        return replace(self, hop_count=self.hop_count + 1, ttl=self.ttl - 1)

    @property
    def generation(self) -> tuple[Address, int]:
        """(source, seq) pair identifying an ant generation."""
        return (self.source, self.seq)
