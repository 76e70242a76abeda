"""Run statistics and pheromone traces, exported as CSV.

Recording is pure observation: the recorder draws no randomness and routing
behavior is identical with recording on or off. CSV output uses a fixed
column order, 6-decimal formatting, and newline-terminated rows so
determinism checks can compare files byte for byte.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .core.actions import DropReason
from .core.packets import Address, Packet, PacketKind

FLOWS_HEADER = (
    "flow,source,destination,sent,delivered,dropped_loss,dropped_ttl,"
    "dropped_no_route,in_flight,delivery_ratio,mean_hops,mean_latency_ms"
)
TRACE_HEADER = "time_s,node,destination,next_hop,pheromone"


def fmt(x: float) -> str:
    return f"{x:.6f}"


@dataclass
class FlowStats:
    flow: int
    source: Address
    destination: Address
    sent: int = 0
    delivered: int = 0
    dropped_loss: int = 0
    dropped_ttl: int = 0
    dropped_no_route: int = 0
    in_flight: int = 0
    hop_counts: list[int] = field(default_factory=list)
    latencies_us: list[int] = field(default_factory=list)

    @property
    def delivery_ratio(self) -> float:
        return self.delivered / self.sent if self.sent else 0.0

    @property
    def mean_hops(self) -> float:
        return sum(self.hop_counts) / len(self.hop_counts) if self.hop_counts else 0.0

    @property
    def mean_latency_ms(self) -> float:
        if not self.latencies_us:
            return 0.0
        return sum(self.latencies_us) / len(self.latencies_us) / 1000.0

    def conserved(self) -> bool:
        return self.sent == (
            self.delivered
            + self.dropped_loss
            + self.dropped_ttl
            + self.dropped_no_route
            + self.in_flight
        )


@dataclass
class MetricsSnapshot:
    flows: list[FlowStats]
    fant_tx: int
    bant_tx: int
    route_failure_tx: int
    discoveries: int
    max_hop_count: int
    wall_clock_s: float

    def _total(self, attr: str) -> int:
        return sum(getattr(f, attr) for f in self.flows)

    @property
    def sent(self) -> int:
        return self._total("sent")

    @property
    def delivered(self) -> int:
        return self._total("delivered")

    @property
    def dropped_loss(self) -> int:
        return self._total("dropped_loss")

    @property
    def dropped_ttl(self) -> int:
        return self._total("dropped_ttl")

    @property
    def dropped_no_route(self) -> int:
        return self._total("dropped_no_route")

    @property
    def in_flight(self) -> int:
        return self._total("in_flight")

    @property
    def delivery_ratio(self) -> float:
        return self.delivered / self.sent if self.sent else 0.0

    @property
    def mean_hops(self) -> float:
        hops = [h for f in self.flows for h in f.hop_counts]
        return sum(hops) / len(hops) if hops else 0.0

    @property
    def mean_latency_ms(self) -> float:
        lat = [x for f in self.flows for x in f.latencies_us]
        return sum(lat) / len(lat) / 1000.0 if lat else 0.0

    @property
    def control_tx(self) -> int:
        return self.fant_tx + self.bant_tx + self.route_failure_tx

    @property
    def overhead(self) -> float:
        """Control transmissions per delivered DATA packet."""
        return self.control_tx / self.delivered if self.delivered else float("nan")

    def conserved(self) -> bool:
        return all(f.conserved() for f in self.flows)


class MetricsRecorder:
    """Collects counters and samples for one run."""

    def __init__(self) -> None:
        self.flows: list[FlowStats] = []
        self.fant_tx = 0
        self.bant_tx = 0
        self.route_failure_tx = 0
        self.discoveries = 0
        self.max_hop_count = 0
        # Per ant generation: transmissions per relaying node, for flood
        # termination checks. Desk-scale runs keep this small.
        self.ant_tx_by_node: Counter[tuple[tuple[Address, int], Address]] = Counter()
        # Per DATA packet bookkeeping keyed by (source, seq).
        self._flow_of_packet: dict[tuple[Address, int], int] = {}
        self.emit_times: dict[tuple[Address, int], int] = {}
        self.delivered_packets: set[tuple[Address, int]] = set()
        self.trace_rows: list[tuple[int, Address, Address, Address, float]] = []

    def add_flow(self, flow: int, source: Address, destination: Address) -> None:
        self.flows.append(FlowStats(flow, source, destination))

    def _stats_for(self, pkt: Packet) -> FlowStats | None:
        idx = self._flow_of_packet.get((pkt.source, pkt.seq))
        return self.flows[idx] if idx is not None else None

    # -- recording hooks (all pure observation) ---------------------------

    def record_sent(self, flow: int, pkt: Packet, now: int) -> None:
        key = (pkt.source, pkt.seq)
        self._flow_of_packet[key] = flow
        self.emit_times[key] = now
        self.flows[flow].sent += 1

    def record_delivered(self, pkt: Packet, now: int) -> None:
        self.record_hop_count(pkt)
        stats = self._stats_for(pkt)
        if stats is None:
            return
        stats.delivered += 1
        stats.hop_counts.append(pkt.hop_count)
        emitted = self.emit_times[(pkt.source, pkt.seq)]
        stats.latencies_us.append(now - emitted)
        self.delivered_packets.add((pkt.source, pkt.seq))

    def record_drop(self, pkt: Packet, reason: DropReason) -> None:
        self.record_hop_count(pkt)
        if pkt.kind != PacketKind.DATA:
            return
        stats = self._stats_for(pkt)
        if stats is None:
            return
        if reason == DropReason.TTL_EXPIRED:
            stats.dropped_ttl += 1
        else:
            stats.dropped_no_route += 1

    def record_loss(self, pkt: Packet) -> None:
        """A DATA frame lost on the air (failed delivery draw)."""
        stats = self._stats_for(pkt)
        if stats is not None:
            stats.dropped_loss += 1

    def record_in_flight(self, pkt: Packet) -> None:
        stats = self._stats_for(pkt)
        if stats is not None:
            stats.in_flight += 1

    def record_control_tx(self, pkt: Packet, sender: Address) -> None:
        if pkt.kind == PacketKind.FANT:
            self.fant_tx += 1
            self.ant_tx_by_node[(pkt.generation, sender)] += 1
        elif pkt.kind == PacketKind.BANT:
            self.bant_tx += 1
            self.ant_tx_by_node[(pkt.generation, sender)] += 1
        elif pkt.kind == PacketKind.ROUTE_FAILURE:
            self.route_failure_tx += 1

    def record_discovery(self) -> None:
        self.discoveries += 1

    def record_hop_count(self, pkt: Packet) -> None:
        if pkt.hop_count > self.max_hop_count:
            self.max_hop_count = pkt.hop_count

    def record_trace_row(
        self, now: int, node: Address, dest: Address, hop: Address, value: float
    ) -> None:
        self.trace_rows.append((now, node, dest, hop, value))

    def record(self, kind: str, **attrs) -> None:
        """Generic entry point mirroring the named hooks."""
        handler = getattr(self, f"record_{kind}", None)
        if handler is None:
            raise ValueError(f"unknown record kind {kind!r}")
        handler(**attrs)

    def snapshot(self, wall_clock_s: float = 0.0) -> MetricsSnapshot:
        return MetricsSnapshot(
            flows=self.flows,
            fant_tx=self.fant_tx,
            bant_tx=self.bant_tx,
            route_failure_tx=self.route_failure_tx,
            discoveries=self.discoveries,
            max_hop_count=self.max_hop_count,
            wall_clock_s=wall_clock_s,
        )


# -- CSV export ------------------------------------------------------------


def flows_csv_bytes(snapshot: MetricsSnapshot) -> bytes:
    lines = [FLOWS_HEADER]
    for f in snapshot.flows:
        lines.append(
            f"{f.flow},{f.source},{f.destination},{f.sent},{f.delivered},"
            f"{f.dropped_loss},{f.dropped_ttl},{f.dropped_no_route},{f.in_flight},"
            f"{fmt(f.delivery_ratio)},{fmt(f.mean_hops)},{fmt(f.mean_latency_ms)}"
        )
    return ("\n".join(lines) + "\n").encode()


def trace_csv_bytes(rows: list[tuple[int, Address, Address, Address, float]]) -> bytes:
    lines = [TRACE_HEADER]
    for now, node, dest, hop, value in rows:
        lines.append(f"{fmt(now / 1_000_000)},{node},{dest},{hop},{fmt(value)}")
    return ("\n".join(lines) + "\n").encode()


def export(data: bytes, path: str | Path) -> bytes:
    """Write already-rendered CSV bytes; returns them for convenience."""
    Path(path).write_bytes(data)
    return data
