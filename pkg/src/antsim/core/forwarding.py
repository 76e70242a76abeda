"""Stochastic next-hop selection.

Next hop i is chosen with probability phi_i**alpha / sum_j phi_j**alpha.
Candidates are ordered by ascending address and the draw walks the cumulative
weights, so a given uniform draw always maps to the same hop.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Mapping

from .packets import Address

if TYPE_CHECKING:
    from .table import RoutingTable


class NoRouteError(LookupError):
    """No next-hop entry exists for the requested destination."""


def forwarding_weights(
    pheromones: Mapping[Address, float], alpha: float
) -> list[tuple[Address, float]]:
    if not pheromones:
        raise NoRouteError("no candidates")
    return [(hop, pheromones[hop] ** alpha) for hop in sorted(pheromones)]


def forwarding_distribution(
    pheromones: Mapping[Address, float], alpha: float
) -> dict[Address, float]:
    """Normalized selection probabilities, keyed by next hop."""
    weights = forwarding_weights(pheromones, alpha)
    total = sum(w for _, w in weights)
    return {hop: w / total for hop, w in weights}


def select_from(pheromones: Mapping[Address, float], alpha: float, u: float) -> Address:
    """Pick a hop for a uniform draw u in [0, 1).

    Picks the first candidate (ascending address) whose cumulative weight
    exceeds u * total; comparing against unnormalized weights avoids a
    division and guarantees the last candidate absorbs the tail.
    """
    weights = forwarding_weights(pheromones, alpha)
    total = sum(w for _, w in weights)
    target = u * total
    acc = 0.0
    for hop, w in weights:
        acc += w
        if acc > target:
            return hop
    return weights[-1][0]


def select_next_hop(table: "RoutingTable", dest: Address, alpha: float, u: float) -> Address:
    """Draw a next hop for ``dest`` from ``table``; raises NoRouteError."""
    entries = table.entries_for(dest)
    if not entries:
        raise NoRouteError(f"no route to {dest}")
    return select_from({hop: e.value for hop, e in entries.items()}, alpha, u)
