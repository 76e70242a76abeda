"""Pheromone routing table: the algorithm's whole memory.

Maps destination -> {next hop -> pheromone}. Entries are created only by
received ants, grow through data-driven reinforcement, decay under
evaporation, and disappear when they fall below the removal threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .packets import BROADCAST, Address
from .policy import EXPONENTIAL, PolicyConfig

MICROS_PER_SECOND = 1_000_000


@dataclass(slots=True)
class PheromoneEntry:
    value: float
    last_update: int  # simulation time, microseconds


def decayed_value(entry: PheromoneEntry, now: int, cfg: PolicyConfig) -> float:
    """Entry value after evaporating from its last update to ``now``."""
    elapsed = (now - entry.last_update) / MICROS_PER_SECOND
    if elapsed <= 0.0:
        return entry.value
    intervals = elapsed / cfg.evap_interval
    if cfg.evaporation == EXPONENTIAL:
        return entry.value * cfg.evap_q**intervals
    return max(0.0, entry.value - cfg.evap_m * intervals)


class RoutingTable:
    def __init__(self, owner: Address):
        self.owner = owner
        self._entries: dict[Address, dict[Address, PheromoneEntry]] = {}

    def __len__(self) -> int:
        return sum(len(hops) for hops in self._entries.values())

    def destinations(self) -> list[Address]:
        return sorted(self._entries)

    def entries_for(self, dest: Address) -> dict[Address, PheromoneEntry]:
        """Live view of the next-hop entries for ``dest``; treat as read-only."""
        return self._entries.get(dest, {})

    def has_route(self, dest: Address) -> bool:
        return dest in self._entries

    def pheromone(self, dest: Address, hop: Address) -> float:
        entry = self._entries.get(dest, {}).get(hop)
        return entry.value if entry is not None else 0.0

    def install(self, dest: Address, hop: Address, value: float, now: int) -> None:
        """Install or refresh (dest, hop) to max(existing, value).

        Only ants call this; reinforcement never creates entries.
        """
        if hop == self.owner or hop == BROADCAST or dest == self.owner:
            raise ValueError(f"invalid routing entry ({dest} via {hop}) at node {self.owner}")
        hops = self._entries.setdefault(dest, {})
        entry = hops.get(hop)
        if entry is None:
            hops[hop] = PheromoneEntry(value, now)
        else:
            entry.value = max(entry.value, value)
            entry.last_update = now

    def reinforce(self, dest: Address, hop: Address, amount: float) -> bool:
        """Add ``amount`` to an existing entry; no-op when absent."""
        entry = self._entries.get(dest, {}).get(hop)
        if entry is None:
            return False
        entry.value += amount
        return True

    def remove(self, dest: Address, hop: Address) -> bool:
        hops = self._entries.get(dest)
        if hops is None or hop not in hops:
            return False
        del hops[hop]
        if not hops:
            del self._entries[dest]
        return True

    def evaporate_destination(self, dest: Address, now: int, cfg: PolicyConfig) -> None:
        hops = self._entries.get(dest)
        if hops is None:
            return
        dead = []
        for hop, entry in hops.items():
            value = decayed_value(entry, now, cfg)
            if value < cfg.removal_threshold:
                dead.append(hop)
            else:
                entry.value = value
                entry.last_update = now
        for hop in dead:
            del hops[hop]
        if not hops:
            del self._entries[dest]

    def evaporate(self, now: int, cfg: PolicyConfig) -> None:
        """Apply evaporation to every entry; drop entries below threshold."""
        for dest in list(self._entries):
            self.evaporate_destination(dest, now, cfg)

    def rows(self) -> list[tuple[Address, Address, float]]:
        """Sorted (dest, hop, value) triples, for traces and debugging."""
        out = []
        for dest in sorted(self._entries):
            hops = self._entries[dest]
            for hop in sorted(hops):
                out.append((dest, hop, hops[hop].value))
        return out
