"""Tunable constants of the routing algorithm.

Every knob the algorithm is sensitive to lives here so scenario files and
parameter sweeps can override any of them per run.
"""

from __future__ import annotations

from dataclasses import dataclass

EXPONENTIAL = "exponential"
LINEAR = "linear"


@dataclass
class PolicyConfig:
    # Evaporation: exponential keeps a fraction evap_q per interval, linear
    # subtracts evap_m per interval. Entries falling below removal_threshold
    # are deleted.
    evaporation: str = EXPONENTIAL
    evap_q: float = 0.9
    evap_m: float = 0.1
    evap_interval: float = 1.0  # seconds
    removal_threshold: float = 0.01

    # Pheromone dynamics.
    reinforcement: float = 0.1
    initial_pheromone: float = 1.0

    # Forwarding: next hop drawn with probability proportional to phi**alpha.
    alpha: float = 1.0

    # Discovery and bookkeeping.
    initial_ttl: int = 30
    discovery_retries: int = 2
    dedup_capacity: int = 256
    pending_capacity: int = 64

    def validate(self) -> None:
        if self.evaporation not in (EXPONENTIAL, LINEAR):
            raise ValueError(f"unknown evaporation kind {self.evaporation!r}")
        if not 0.0 < self.evap_q <= 1.0:
            raise ValueError("evap_q must be in (0, 1]")
        if self.evap_m < 0.0:
            raise ValueError("evap_m must be >= 0")
        if self.evap_interval <= 0.0:
            raise ValueError("evap_interval must be positive")
        if self.removal_threshold <= 0.0:
            raise ValueError("removal_threshold must be positive")
        if self.reinforcement <= 0.0:
            raise ValueError("reinforcement must be positive")
        if self.initial_pheromone <= 0.0:
            raise ValueError("initial_pheromone must be positive")
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")
        if self.initial_ttl < 1:
            raise ValueError("initial_ttl must be >= 1")
        if self.discovery_retries < 0:
            raise ValueError("discovery_retries must be >= 0")
        if self.dedup_capacity < 1:
            raise ValueError("dedup_capacity must be >= 1")
        if self.pending_capacity < 1:
            raise ValueError("pending_capacity must be >= 1")
