"""Deterministic discrete-event simulator driving the routing core.

Events execute in (time, insertion-sequence) order; time is integer
microseconds so event ordering never depends on floating point. One seeded
generator serves the whole run and draws are consumed in a documented order:
random-geometric placement first, then waypoint initialization, then draws in
event execution order (per transmission: one Bernoulli draw per outgoing
edge in ascending neighbor address for broadcasts, one draw for the intended
edge for unicasts; one draw per stochastic forwarding decision). Identical
(scenario, seed) pairs therefore produce identical results bit for bit.

The radio model is a unit-disk graph with independent per-directed-edge
Bernoulli delivery and fixed per-edge latency. There is no MAC contention:
concurrent transmissions never interfere. A unicast toward a neighbor whose
edge no longer exists (mobility or a severed link) is fed back to the sender
as a local route failure, standing in for link-layer feedback; ordinary
Bernoulli losses produce no feedback and are only counted.
"""

from __future__ import annotations

import enum
import heapq
import random
import time
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from ..core.actions import Broadcast, Deliver, Drop, Unicast
from ..core.node import Node
from ..core.packets import Address, Packet, PacketKind
from ..metrics import MetricsRecorder, MetricsSnapshot
from .mobility import RANDOM_WAYPOINT, RandomWaypointModel
from .topology import build_topology, geometric_edges

if TYPE_CHECKING:
    from ..scenario import ScenarioConfig

MICROS = 1_000_000


class EventKind(enum.Enum):
    FRAME_ARRIVAL = "frame_arrival"
    EVAP_TICK = "evap_tick"
    TRAFFIC_EMIT = "traffic_emit"
    MOBILITY_STEP = "mobility_step"
    TRACE_SAMPLE = "trace_sample"
    SIM_END = "sim_end"


@dataclass(slots=True)
class Event:
    time: int  # microseconds
    seq: int  # insertion tiebreaker
    kind: EventKind
    payload: tuple = ()


@dataclass
class RunResult:
    snapshot: MetricsSnapshot
    trace: list[tuple[int, Address, Address, Address, float]]
    recorder: MetricsRecorder


def _us(seconds: float) -> int:
    return int(round(seconds * MICROS))


class Simulator:
    def __init__(self, scenario: ScenarioConfig, seed: int | None = None):
        scenario.validate()
        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.rng = random.Random(self.seed)
        self.duration_us = _us(scenario.duration)
        self.now = 0

        topo = build_topology(scenario.topology, self.rng)
        self.positions = dict(topo.positions)
        self.comm_range = topo.comm_range
        self._geometric = topo.geometric
        self._static_edges = set(topo.edges)
        self._severed: set[tuple[Address, Address]] = set()

        self.mobility: RandomWaypointModel | None = None
        if scenario.mobility.kind == RANDOM_WAYPOINT:
            self.mobility = RandomWaypointModel(
                scenario.mobility, self.positions, topo.area_bounds(), self.rng
            )

        self._node_order = topo.nodes()
        self.nodes = {addr: Node(addr, scenario.policy) for addr in self._node_order}
        self.recorder = MetricsRecorder()
        for i, flow in enumerate(scenario.flows):
            self.recorder.add_flow(i, flow.source, flow.destination)

        # addr -> sorted [(neighbor, delivery prob, latency us)]
        self.neighbors: dict[Address, list[tuple[Address, float, int]]] = {}
        # addr -> {neighbor: (delivery prob, latency us)}
        self.links: dict[Address, dict[Address, tuple[float, int]]] = {}
        self._rebuild_links()

        self._heap: list[tuple[int, int, Event]] = []
        self._event_seq = 0
        self._schedule(self.duration_us, EventKind.SIM_END)
        self._evap_us = _us(scenario.policy.evap_interval)
        if self._evap_us <= self.duration_us:
            self._schedule(self._evap_us, EventKind.EVAP_TICK)
        self._trace_us = _us(scenario.trace_interval)
        if self._trace_us > 0:
            self._schedule(0, EventKind.TRACE_SAMPLE)
        for u, v, directed, at in scenario.links.severances:
            pairs = ((u, v),) if directed else ((u, v), (v, u))
            self._schedule(_us(at), EventKind.MOBILITY_STEP, ("sever", pairs))
        if self.mobility is not None:
            self._mobility_us = _us(scenario.mobility.update_interval)
            self._schedule(self._mobility_us, EventKind.MOBILITY_STEP, ("step",))
        for i, flow in enumerate(scenario.flows):
            self._schedule_emission(i, 0)

    # -- scheduling --------------------------------------------------------

    def _schedule(self, at: int, kind: EventKind, payload: tuple = ()) -> None:
        ev = Event(at, self._event_seq, kind, payload)
        self._event_seq += 1
        heapq.heappush(self._heap, (ev.time, ev.seq, ev))

    def _schedule_emission(self, flow_idx: int, k: int) -> None:
        flow = self.scenario.flows[flow_idx]
        at = _us(flow.start + k / flow.rate)
        if at < _us(self.scenario.flow_end(flow)):
            self._schedule(at, EventKind.TRAFFIC_EMIT, (flow_idx, k))

    # -- links -------------------------------------------------------------

    def _current_edges(self) -> set[tuple[Address, Address]]:
        if self._geometric:
            edges = geometric_edges(self.positions, self.comm_range)
        else:
            edges = set(self._static_edges)
        return edges - self._severed

    def _rebuild_links(self) -> None:
        spec = self.scenario.links
        self.links = {addr: {} for addr in self.positions}
        for u, v in self._current_edges():
            self.links[u][v] = (spec.delivery_prob(u, v), spec.latency_us(u, v))
        self.neighbors = {
            addr: [(v, p, lat) for v, (p, lat) in sorted(hops.items())]
            for addr, hops in self.links.items()
        }

    # -- transmission primitives --------------------------------------------

    def broadcast_frame(self, sender: Address, pkt: Packet) -> None:
        """One Bernoulli draw per outgoing edge, ascending neighbor address."""
        self.recorder.record_control_tx(pkt, sender)
        if pkt.kind == PacketKind.FANT and pkt.source == sender and pkt.hop_count == 0:
            self.recorder.record_discovery()
        for v, p, lat in self.neighbors[sender]:
            if self.rng.random() < p:
                self._schedule(self.now + lat, EventKind.FRAME_ARRIVAL, (v, pkt, sender))

    def unicast_frame(self, sender: Address, pkt: Packet, receiver: Address) -> None:
        """Transmit toward one neighbor; only the intended edge draws.

        Frames to a vanished neighbor never hit the air: DATA bounces back
        into the sender's routing core as a local route failure, control
        packets are discarded.
        """
        edge = self.links[sender].get(receiver)
        if edge is None:
            if pkt.kind == PacketKind.DATA:
                self._local_route_failure(sender, pkt, receiver)
            return
        p, lat = edge
        self.recorder.record_control_tx(pkt, sender)
        if self.rng.random() < p:
            self._schedule(self.now + lat, EventKind.FRAME_ARRIVAL, (receiver, pkt, sender))
        elif pkt.kind == PacketKind.DATA:
            self.recorder.record_loss(pkt)

    def _local_route_failure(self, sender: Address, pkt: Packet, dead_hop: Address) -> None:
        node = self.nodes[sender]
        notice = node.route_failure_packet(pkt.destination)
        actions = node.handle_route_failure(notice, prev_hop=dead_hop)
        # Requeue the packet as if it had never been relayed to the dead hop,
        # so hop accounting stays honest when an alternative exists.
        requeued = replace(pkt, hop_count=pkt.hop_count - 1, ttl=pkt.ttl + 1)
        actions += node.handle_data(requeued, None, self.now, self.rng.random)
        self._apply(sender, actions)

    # -- action interpretation ----------------------------------------------

    def _apply(self, origin: Address, actions) -> None:
        for act in actions:
            if isinstance(act, Broadcast):
                self.broadcast_frame(origin, act.packet)
            elif isinstance(act, Unicast):
                self.unicast_frame(origin, act.packet, act.next_hop)
            elif isinstance(act, Deliver):
                if act.packet.kind == PacketKind.DATA:
                    self.recorder.record_delivered(act.packet, self.now)
                else:
                    self.recorder.record_hop_count(act.packet)
            elif isinstance(act, Drop):
                self.recorder.record_drop(act.packet, act.reason)

    # -- event handlers -----------------------------------------------------

    def _on_frame_arrival(self, payload: tuple) -> None:
        receiver, pkt, sender = payload
        node = self.nodes[receiver]
        self._apply(receiver, node.on_frame(pkt, sender, self.now, self.rng.random))

    def _on_traffic_emit(self, payload: tuple) -> None:
        flow_idx, k = payload
        flow = self.scenario.flows[flow_idx]
        node = self.nodes[flow.source]
        pkt = Packet(
            kind=PacketKind.DATA,
            source=flow.source,
            destination=flow.destination,
            seq=node.next_seq(),
            ttl=self.scenario.policy.initial_ttl,
            payload_size=flow.payload_size,
        )
        self.recorder.record_sent(flow_idx, pkt, self.now)
        self._apply(flow.source, node.handle_data(pkt, None, self.now, self.rng.random))
        self._schedule_emission(flow_idx, k + 1)

    def _on_evap_tick(self) -> None:
        for addr in self._node_order:
            self.nodes[addr].evaporate(self.now)
        if self.now + self._evap_us <= self.duration_us:
            self._schedule(self.now + self._evap_us, EventKind.EVAP_TICK)

    def _on_trace_sample(self) -> None:
        for addr in self._node_order:
            for dest, hop, value in self.nodes[addr].table.rows():
                self.recorder.record_trace_row(self.now, addr, dest, hop, value)
        if self.now + self._trace_us <= self.duration_us:
            self._schedule(self.now + self._trace_us, EventKind.TRACE_SAMPLE)

    def _on_mobility_step(self, payload: tuple) -> None:
        if payload[0] == "sever":
            self._severed.update(payload[1])
        else:
            assert self.mobility is not None
            dt = self.scenario.mobility.update_interval
            self.mobility.advance(self.positions, dt, self.now / MICROS, self.rng)
            if self.now + self._mobility_us <= self.duration_us:
                self._schedule(self.now + self._mobility_us, EventKind.MOBILITY_STEP, ("step",))
        self._rebuild_links()

    # -- main loop -----------------------------------------------------------

    def run(self) -> RunResult:
        started = time.perf_counter()
        while self._heap:
            when, _, ev = heapq.heappop(self._heap)
            assert when >= self.now, "causality violated"
            self.now = when
            if ev.kind == EventKind.SIM_END:
                break
            if ev.kind == EventKind.FRAME_ARRIVAL:
                self._on_frame_arrival(ev.payload)
            elif ev.kind == EventKind.TRAFFIC_EMIT:
                self._on_traffic_emit(ev.payload)
            elif ev.kind == EventKind.EVAP_TICK:
                self._on_evap_tick()
            elif ev.kind == EventKind.TRACE_SAMPLE:
                self._on_trace_sample()
            elif ev.kind == EventKind.MOBILITY_STEP:
                self._on_mobility_step(ev.payload)
        self._sweep_in_flight()
        snapshot = self.recorder.snapshot(time.perf_counter() - started)
        return RunResult(snapshot, self.recorder.trace_rows, self.recorder)

    def _sweep_in_flight(self) -> None:
        """Count DATA still on the air or queued when the run ends."""
        for _, _, ev in self._heap:
            if ev.kind == EventKind.FRAME_ARRIVAL and ev.payload[1].kind == PacketKind.DATA:
                self.recorder.record_in_flight(ev.payload[1])
        for addr in self._node_order:
            for queue in self.nodes[addr].pending.values():
                for pkt in queue:
                    self.recorder.record_in_flight(pkt)


def run(scenario: ScenarioConfig, seed: int | None = None) -> RunResult:
    """Execute one scenario to completion."""
    return Simulator(scenario, seed).run()
