"""Per-node ant-routing state machine.

A node reacts to received frames and returns actions for the backend to
execute. It owns no clock and no random source: the current time and a
uniform-draw callable are passed into every operation, which makes behavior
replayable from identical inputs.
"""

from __future__ import annotations

from collections import OrderedDict, deque
from typing import Callable

from .actions import Action, Broadcast, Deliver, Drop, DropReason, Unicast
from .forwarding import NoRouteError, select_next_hop
from .packets import Address, Packet, PacketKind
from .policy import PolicyConfig
from .table import RoutingTable

DrawFn = Callable[[], float]


class Node:
    def __init__(self, addr: Address, cfg: PolicyConfig):
        self.addr = addr
        self.cfg = cfg
        self.table = RoutingTable(addr)
        # Duplicate suppression: bounded FIFO of seen ant generations.
        self._seen: OrderedDict[tuple[Address, int], None] = OrderedDict()
        self.seq_counter = 0
        # DATA waiting for a discovery to complete, per destination.
        self.pending: dict[Address, deque[Packet]] = {}
        # Discovery floods emitted since the last completed discovery.
        self.discovery_attempts: dict[Address, int] = {}
        # Destinations this node originates traffic for.
        self.origins: set[Address] = set()
        # Last neighbor that handed us DATA for a destination; used to push
        # route failures back toward the source.
        self.upstream: dict[Address, Address] = {}

    # -- bookkeeping ------------------------------------------------------

    def next_seq(self) -> int:
        seq = self.seq_counter
        self.seq_counter += 1
        return seq

    def _mark_seen(self, generation: tuple[Address, int]) -> None:
        self._seen[generation] = None
        while len(self._seen) > self.cfg.dedup_capacity:
            self._seen.popitem(last=False)

    def has_seen(self, generation: tuple[Address, int]) -> bool:
        return generation in self._seen

    def pending_count(self) -> int:
        return sum(len(q) for q in self.pending.values())

    # -- operations -------------------------------------------------------

    def initiate_route_discovery(self, dest: Address) -> Packet:
        """Build the next forward ant toward ``dest``; backend broadcasts it.

        Counts one discovery attempt and marks the ant's own generation as
        seen so echoes of it are dropped.
        """
        assert dest != self.addr
        fant = Packet(
            kind=PacketKind.FANT,
            source=self.addr,
            destination=dest,
            seq=self.next_seq(),
            ttl=self.cfg.initial_ttl,
        )
        self._mark_seen(fant.generation)
        self.discovery_attempts[dest] = self.discovery_attempts.get(dest, 0) + 1
        return fant

    def process_ant(
        self, pkt: Packet, prev_hop: Address, now: int, draw: DrawFn
    ) -> list[Action]:
        """Handle a received FANT or BANT."""
        assert pkt.kind in (PacketKind.FANT, PacketKind.BANT)
        if pkt.source == self.addr or self.has_seen(pkt.generation):
            return [Drop(pkt, DropReason.DUPLICATE)]
        self._mark_seen(pkt.generation)

        # Backward entry: the ant came from pkt.source, so prev_hop is a way
        # back. Shorter paths install stronger pheromone; a refresh keeps the
        # larger of the decayed existing value and the new one.
        self.table.evaporate_destination(pkt.source, now, self.cfg)
        value = self.cfg.initial_pheromone / max(1, pkt.hop_count + 1)
        self.table.install(pkt.source, prev_hop, value, now)

        if pkt.destination == self.addr:
            if pkt.kind == PacketKind.FANT:
                bant = Packet(
                    kind=PacketKind.BANT,
                    source=self.addr,
                    destination=pkt.source,
                    seq=self.next_seq(),
                    ttl=self.cfg.initial_ttl,
                )
                self._mark_seen(bant.generation)
                return [Broadcast(bant)]
            # A completed discovery: release any traffic that was waiting.
            actions: list[Action] = [Deliver(pkt)]
            self.discovery_attempts[pkt.source] = 0
            queued = self.pending.pop(pkt.source, None)
            if queued:
                for data in queued:
                    actions.extend(self.handle_data(data, None, now, draw))
            return actions

        if pkt.ttl - 1 > 0:
            return [Broadcast(pkt.relayed())]
        return [Drop(pkt, DropReason.TTL_EXPIRED)]

    def handle_data(
        self, pkt: Packet, prev_hop: Address | None, now: int, draw: DrawFn
    ) -> list[Action]:
        """Forward, deliver, queue, or drop a DATA packet."""
        assert pkt.kind == PacketKind.DATA
        if pkt.destination == self.addr:
            return [Deliver(pkt)]
        if prev_hop is None:
            if pkt.source == self.addr:
                self.origins.add(pkt.destination)
        else:
            self.upstream[pkt.destination] = prev_hop
        if pkt.ttl - 1 <= 0:
            return [Drop(pkt, DropReason.TTL_EXPIRED)]

        self.table.evaporate_destination(pkt.destination, now, self.cfg)
        try:
            hop = select_next_hop(self.table, pkt.destination, self.cfg.alpha, draw())
        except NoRouteError:
            return self._no_route(pkt, prev_hop)

        if prev_hop is not None:
            self.table.evaporate_destination(pkt.source, now, self.cfg)
            self.table.reinforce(pkt.source, prev_hop, self.cfg.reinforcement)
        self.table.reinforce(pkt.destination, hop, self.cfg.reinforcement)
        return [Unicast(pkt.relayed(), hop)]

    def _no_route(self, pkt: Packet, prev_hop: Address | None) -> list[Action]:
        dest = pkt.destination
        if pkt.source == self.addr:
            if self.discovery_attempts.get(dest, 0) <= self.cfg.discovery_retries:
                actions = self._queue_pending(pkt)
                actions.append(Broadcast(self.initiate_route_discovery(dest)))
                return actions
            return [Drop(pkt, DropReason.NO_ROUTE)]
        actions = []
        if prev_hop is not None:
            actions.append(Unicast(self.route_failure_packet(dest), prev_hop))
        actions.append(Drop(pkt, DropReason.NO_ROUTE))
        return actions

    def _queue_pending(self, pkt: Packet) -> list[Action]:
        queue = self.pending.setdefault(pkt.destination, deque())
        actions: list[Action] = []
        if len(queue) >= self.cfg.pending_capacity:
            actions.append(Drop(queue.popleft(), DropReason.NO_ROUTE))
        queue.append(pkt)
        return actions

    def route_failure_packet(self, unreachable: Address) -> Packet:
        """Failure notice carrying the unreachable destination."""
        return Packet(
            kind=PacketKind.ROUTE_FAILURE,
            source=self.addr,
            destination=unreachable,
            seq=self.next_seq(),
            ttl=self.cfg.initial_ttl,
        )

    def handle_route_failure(self, pkt: Packet, prev_hop: Address) -> list[Action]:
        """React to a failure notice from ``prev_hop``.

        Removes the broken entry; if alternatives remain the next data packet
        simply uses them. With none left, a traffic source retries discovery
        and a relay pushes the failure one hop further toward the source.
        """
        assert pkt.kind == PacketKind.ROUTE_FAILURE
        dest = pkt.destination
        self.table.remove(dest, prev_hop)
        if self.table.has_route(dest):
            return []
        if dest in self.origins:
            if self.discovery_attempts.get(dest, 0) <= self.cfg.discovery_retries:
                return [Broadcast(self.initiate_route_discovery(dest))]
            return []
        # One-shot upstream forwarding; popping the hop breaks any ping-pong
        # between two relays that briefly pointed at each other.
        up = self.upstream.pop(dest, None)
        if up is not None and up != prev_hop:
            return [Unicast(self.route_failure_packet(dest), up)]
        return []

    def on_frame(
        self, pkt: Packet, prev_hop: Address, now: int, draw: DrawFn
    ) -> list[Action]:
        """Dispatch a received frame to the matching handler."""
        if pkt.kind in (PacketKind.FANT, PacketKind.BANT):
            return self.process_ant(pkt, prev_hop, now, draw)
        if pkt.kind == PacketKind.DATA:
            return self.handle_data(pkt, prev_hop, now, draw)
        return self.handle_route_failure(pkt, prev_hop)

    def evaporate(self, now: int) -> None:
        self.table.evaporate(now, self.cfg)
