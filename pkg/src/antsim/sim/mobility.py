"""Node mobility. Static (default) or random waypoint.

Random waypoint: each node travels in a straight line toward a uniformly
drawn waypoint at a uniformly drawn speed, pauses on arrival, then draws the
next waypoint. Draws happen per node in ascending address order so the
consumed random stream is reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from ..core.packets import Address

STATIC = "static"
RANDOM_WAYPOINT = "random_waypoint"


@dataclass
class MobilitySpec:
    kind: str = STATIC
    speed_min: float = 1.0  # m/s
    speed_max: float = 5.0
    pause: float = 2.0  # seconds
    update_interval: float = 1.0  # seconds


@dataclass
class _Walker:
    waypoint: tuple[float, float]
    speed: float  # m/s
    pause_until: float  # seconds


class RandomWaypointModel:
    def __init__(
        self,
        spec: MobilitySpec,
        positions: dict[Address, tuple[float, float]],
        bounds: tuple[float, float],
        rng: random.Random,
    ):
        if spec.speed_min <= 0 or spec.speed_max < spec.speed_min:
            raise ValueError("waypoint speeds must satisfy 0 < min <= max")
        self.spec = spec
        self.bounds = bounds
        self._walkers: dict[Address, _Walker] = {}
        for addr in sorted(positions):
            self._walkers[addr] = _Walker(
                waypoint=self._draw_waypoint(rng),
                speed=rng.uniform(spec.speed_min, spec.speed_max),
                pause_until=0.0,
            )

    def _draw_waypoint(self, rng: random.Random) -> tuple[float, float]:
        w, h = self.bounds
        return (rng.uniform(0.0, w), rng.uniform(0.0, h))

    def advance(
        self,
        positions: dict[Address, tuple[float, float]],
        dt: float,
        now_s: float,
        rng: random.Random,
    ) -> None:
        """Move every node by one update interval of length ``dt`` seconds."""
        for addr in sorted(positions):
            walker = self._walkers[addr]
            if now_s < walker.pause_until:
                continue
            x, y = positions[addr]
            wx, wy = walker.waypoint
            remaining = math.dist((x, y), (wx, wy))
            step = walker.speed * dt
            if step >= remaining:
                positions[addr] = (wx, wy)
                walker.pause_until = now_s + self.spec.pause
                walker.waypoint = self._draw_waypoint(rng)
                walker.speed = rng.uniform(self.spec.speed_min, self.spec.speed_max)
            else:
                frac = step / remaining
                positions[addr] = (x + (wx - x) * frac, y + (wy - y) * frac)
