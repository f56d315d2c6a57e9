"""Empirical distributions over feature bins and their scalar statistics.

Masses are stored as real numbers, not integer counts, so that mass
rescaling and fractional axis shifts live in the same representation.
All logarithms are natural; entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyStream
from .features import FeatureKind, FeatureStream, bin_levels


@dataclass(frozen=True)
class Distribution:
    """Non-negative mass per bin plus the representative level of each bin."""

    kind: FeatureKind
    masses: np.ndarray
    levels: np.ndarray = None

    def __post_init__(self):
        masses = np.ascontiguousarray(self.masses, dtype=np.float64)
        if masses.shape != (self.kind.bin_count,):
            raise ValueError(
                f"expected {self.kind.bin_count} masses for {self.kind.value}"
            )
        if (masses < 0.0).any():
            raise ValueError("masses must be non-negative")
        if not masses.any():
            raise ValueError("total mass must be positive")
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)
        levels = self.levels if self.levels is not None else bin_levels(self.kind)
        levels = np.asarray(levels, dtype=np.float64)
        if levels.shape != masses.shape:
            raise ValueError("levels and masses must have equal length")
        if (np.diff(levels) <= 0).any():
            raise ValueError("bin levels must be strictly increasing")
        object.__setattr__(self, "levels", levels)

    def with_masses(self, masses: np.ndarray) -> "Distribution":
        """Same domain, new masses (renormalization output)."""
        return Distribution(self.kind, masses, self.levels)


def build(stream: FeatureStream) -> Distribution:
    """Unit-mass empirical density: mass[b] = count(b) / sample count."""
    if stream.count == 0:
        raise EmptyStream("cannot build a distribution from an empty stream")
    counts = np.bincount(stream.bin_indices, minlength=stream.kind.bin_count)
    return Distribution(stream.kind, counts.astype(np.float64) / stream.count)


def total_mass(d: Distribution) -> float:
    return math.fsum(d.masses)


def mean_level(d: Distribution) -> float:
    """Mass-weighted mean of the bin levels."""
    return math.fsum(d.levels * d.masses) / math.fsum(d.masses)


def entropy(d: Distribution) -> float:
    """Gibbs-Shannon entropy in nats of the unit-normalized masses.

    Zero-mass bins contribute nothing (0 ln 0 = 0 by explicit branch, not by
    floating-point accident). 0 <= S <= ln(bin count); S = 0 iff one bin
    holds all the mass.
    """
    total = math.fsum(d.masses)
    positive = d.masses[d.masses > 0.0]
    return -math.fsum(m / total * math.log(m / total) for m in positive)
