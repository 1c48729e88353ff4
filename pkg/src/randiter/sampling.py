"""Weighted discrete index sampling with a reproducible RNG.

The generator is numpy's PCG64, seeded with a 64-bit integer. A given
(seed, weights) pair fully determines the draw sequence, which the
experiment harness relies on for byte-identical reruns.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateWeights, NegativeWeight


class RngState:
    """Single-owner deterministic random stream (PCG64)."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self) -> float:
        """Next float64 in [0, 1)."""
        return float(self._gen.random())

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)


class WeightedSampler:
    """Draws indices with probability weight[i] / sum(weights).

    Backed by a prefix-sum table and binary search; indices with zero
    weight are never returned.
    """

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        if w.size == 0:
            raise DegenerateWeights("no weights")
        if np.any(w < 0.0):
            raise NegativeWeight("sampling weights must be nonnegative")
        self.cumulative = np.cumsum(w)
        self.total = float(self.cumulative[-1])
        if self.total <= 0.0:
            raise DegenerateWeights("all sampling weights are zero")

    def __len__(self) -> int:
        return self.cumulative.shape[0]

    def probabilities(self) -> np.ndarray:
        w = np.diff(self.cumulative, prepend=0.0)
        return w / self.total

    def draw(self, rng: RngState) -> int:
        """One index with the sampler's distribution; advances rng."""
        u = rng.uniform() * self.total
        # side="right" skips zero-weight indices: their cumulative entry
        # equals the previous one, so no u lands strictly inside.
        idx = int(np.searchsorted(self.cumulative, u, side="right"))
        if idx == len(self):
            # u rounded up to exactly total; remap onto the last positive bin
            idx = int(np.searchsorted(self.cumulative, np.nextafter(self.total, 0.0), side="right"))
        return idx


def build_sampler(weights) -> WeightedSampler:
    """Validate weights and build the cumulative-table sampler."""
    return WeightedSampler(weights)


def draw(sampler: WeightedSampler, rng: RngState) -> int:
    return sampler.draw(rng)
