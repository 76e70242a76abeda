"""Topology construction: node placement and the directed edge set.

Geometric kinds (line, grid, diamond, random_geometric) connect two nodes
whenever their distance is within comm_range (unit-disk model); the explicit
kind takes an edge list directly.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field

from ..core.packets import Address

LINE = "line"
GRID = "grid"
DIAMOND = "diamond"
RANDOM_GEOMETRIC = "random_geometric"
EXPLICIT = "explicit"

GEOMETRIC_KINDS = (LINE, GRID, DIAMOND, RANDOM_GEOMETRIC)

# Fixed diamond layout: 0 left, 1 top, 2 bottom, 3 right. With the default
# comm_range of 150 m only the four side edges exist.
DIAMOND_POSITIONS = [(0.0, 0.0), (100.0, 100.0), (100.0, -100.0), (200.0, 0.0)]
DIAMOND_COMM_RANGE = 150.0


class DisconnectedTopologyWarning(UserWarning):
    """The undirected graph is not connected; runs proceed anyway."""


@dataclass
class TopologySpec:
    kind: str = LINE
    nodes: int = 5
    rows: int = 3
    cols: int = 3
    spacing: float = 100.0  # meters
    area: tuple[float, float] = (1000.0, 1000.0)
    comm_range: float | None = None  # default depends on kind
    # Explicit kind only: (u, v, directed) triples.
    edges: list[tuple[Address, Address, bool]] = field(default_factory=list)

    def effective_comm_range(self) -> float:
        if self.comm_range is not None:
            return self.comm_range
        if self.kind in (LINE, GRID):
            return self.spacing
        if self.kind == DIAMOND:
            return DIAMOND_COMM_RANGE
        return 150.0

    def node_count(self) -> int:
        if self.kind == GRID:
            return self.rows * self.cols
        if self.kind == DIAMOND:
            return 4
        return self.nodes


@dataclass
class Topology:
    positions: dict[Address, tuple[float, float]]
    edges: set[tuple[Address, Address]]  # directed
    comm_range: float
    geometric: bool  # True when edges follow from positions

    def nodes(self) -> list[Address]:
        return sorted(self.positions)

    def area_bounds(self) -> tuple[float, float]:
        xs = [p[0] for p in self.positions.values()]
        ys = [p[1] for p in self.positions.values()]
        return (max(xs), max(ys))


def geometric_edges(
    positions: dict[Address, tuple[float, float]], comm_range: float
) -> set[tuple[Address, Address]]:
    """Directed edges between all node pairs within comm_range."""
    edges = set()
    addrs = sorted(positions)
    for i, u in enumerate(addrs):
        ux, uy = positions[u]
        for v in addrs[i + 1 :]:
            vx, vy = positions[v]
            if math.dist((ux, uy), (vx, vy)) <= comm_range:
                edges.add((u, v))
                edges.add((v, u))
    return edges


def _place(spec: TopologySpec, rng: random.Random) -> dict[Address, tuple[float, float]]:
    if spec.kind == LINE:
        if spec.nodes < 2:
            raise ValueError("line topology needs at least 2 nodes")
        return {i: (i * spec.spacing, 0.0) for i in range(spec.nodes)}
    if spec.kind == GRID:
        if spec.rows * spec.cols < 2:
            raise ValueError("grid topology needs at least 2 nodes")
        return {
            r * spec.cols + c: (c * spec.spacing, r * spec.spacing)
            for r in range(spec.rows)
            for c in range(spec.cols)
        }
    if spec.kind == DIAMOND:
        return {i: pos for i, pos in enumerate(DIAMOND_POSITIONS)}
    if spec.kind == RANDOM_GEOMETRIC:
        if spec.nodes < 2:
            raise ValueError("random_geometric topology needs at least 2 nodes")
        w, h = spec.area
        return {i: (rng.uniform(0.0, w), rng.uniform(0.0, h)) for i in range(spec.nodes)}
    raise ValueError(f"unknown topology kind {spec.kind!r}")


def _connected(nodes: list[Address], edges: set[tuple[Address, Address]]) -> bool:
    if not nodes:
        return True
    undirected: dict[Address, set[Address]] = {n: set() for n in nodes}
    for u, v in edges:
        undirected[u].add(v)
        undirected[v].add(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for nbr in undirected[stack.pop()]:
            if nbr not in seen:
                seen.add(nbr)
                stack.append(nbr)
    return len(seen) == len(nodes)


def build_topology(spec: TopologySpec, seed: int | random.Random = 0) -> Topology:
    """Deterministically build node positions and directed edges.

    Warns (does not fail) when the resulting graph is disconnected.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    comm_range = spec.effective_comm_range()
    if spec.kind == EXPLICIT:
        if spec.nodes < 2:
            raise ValueError("explicit topology needs at least 2 nodes")
        # Positions are a nominal line layout; edges never follow from them.
        positions = {i: (i * spec.spacing, 0.0) for i in range(spec.nodes)}
        edges: set[tuple[Address, Address]] = set()
        for u, v, directed in spec.edges:
            if u not in positions or v not in positions or u == v:
                raise ValueError(f"invalid explicit edge ({u}, {v})")
            edges.add((u, v))
            if not directed:
                edges.add((v, u))
        topo = Topology(positions, edges, comm_range, geometric=False)
    else:
        if comm_range <= 0:
            raise ValueError("comm_range must be positive")
        positions = _place(spec, rng)
        topo = Topology(
            positions, geometric_edges(positions, comm_range), comm_range, geometric=True
        )
    if not _connected(topo.nodes(), topo.edges):
        warnings.warn(
            f"{spec.kind} topology with {len(positions)} nodes is disconnected",
            DisconnectedTopologyWarning,
            stacklevel=2,
        )
    return topo
