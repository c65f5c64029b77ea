"""Synthetic measurement campaigns with explicit, reproducible randomness.

Devices are double random: manufacturing first fixes each device's preferred
bit per position (a Bernoulli draw of the true alias), then every repeated
measurement flips that bit independently at the configured noise rate.  All
randomness flows through counter-based Philox streams keyed by an explicit
seed; there is no ambient RNG state anywhere in the package.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .response import MeasurementTensor

ALIAS_PROFILES = {
    "balanced": lambda t: np.full(t, 0.5),
    "linear": lambda t: np.linspace(0.05, 0.95, t),
}


def rng_stream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for a (seed, task index, ...) stream.

    Distinct paths give statistically independent streams; identical paths
    give bit-identical output across runs and platforms.
    """
    parts = [seed, *path]
    for p in parts:
        if not isinstance(p, (int, np.integer)) or p < 0:
            raise DomainError(f"seed path entries must be non-negative integers, got {p!r}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(parts)))


@dataclass(frozen=True)
class PopulationSpec:
    """Parameters of a synthetic device population.

    ``alias`` is the true probability of a 1 per position: a scalar applied
    everywhere, a length-T sequence, or a named profile from ALIAS_PROFILES.
    The seed is mandatory; two specs with equal fields simulate identically.
    """

    devices: int
    positions: int
    repeats: int
    seed: int
    alias: float | Sequence[float] | str = 0.5
    flip_noise: float = 0.0

    def __post_init__(self):
        for name in ("devices", "positions", "repeats"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise DomainError("seed must be a non-negative integer")
        if not 0.0 <= float(self.flip_noise) <= 1.0:
            raise DomainError("flip_noise must lie in [0, 1]")
        self.alias_vector()  # validate eagerly

    def alias_vector(self) -> np.ndarray:
        """Resolve the alias field to a length-T probability vector."""
        if isinstance(self.alias, str):
            try:
                vec = ALIAS_PROFILES[self.alias](self.positions)
            except KeyError:
                raise DomainError(
                    f"unknown alias profile {self.alias!r}, "
                    f"expected one of {sorted(ALIAS_PROFILES)}") from None
        elif isinstance(self.alias, (int, float)):
            vec = np.full(self.positions, float(self.alias))
        else:
            vec = np.asarray(self.alias, dtype=float)
            if vec.shape != (self.positions,):
                raise DomainError(
                    f"alias vector must have length {self.positions}, got shape {vec.shape}")
        if (vec < 0.0).any() or (vec > 1.0).any():
            raise DomainError("alias probabilities must lie in [0, 1]")
        return vec


def simulate_population(spec: PopulationSpec) -> MeasurementTensor:
    """Draw a full measurement tensor for the given population."""
    rng = rng_stream(spec.seed)
    p = spec.alias_vector()
    stable = rng.random((spec.devices, spec.positions)) < p[None, :]
    flips = rng.random((spec.devices, spec.positions, spec.repeats)) < spec.flip_noise
    bits = stable[:, :, None] ^ flips
    return MeasurementTensor(bits=bits.astype(np.uint8))
