"""Per-pixel and neighbor-pair feature streams with fixed finite bin domains.

Four feature kinds are produced from a linearized pixel sequence:

  gray     raw gray level, 256 bins over [0, 255]
  diff     signed neighbor difference, 511 bins over [-255, 255]
  absdiff  |neighbor difference|, 256 bins over [0, 255]
  ratio    (v[t]+1)/(v[t-1]+1), 256 logarithmic bins covering [1/256, 256]

Neighbor pairs run over the whole sequence with no per-row reset, so the
traversal's seam policy decides which pixels count as neighbors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SequenceTooShort
from .ingest import PixelSequence

_LN256 = math.log(256.0)


class FeatureKind(Enum):
    GRAY = "gray"
    DIFF = "diff"
    ABSDIFF = "absdiff"
    RATIO = "ratio"

    @property
    def bin_count(self) -> int:
        return 511 if self is FeatureKind.DIFF else 256


def bin_levels(kind: FeatureKind) -> np.ndarray:
    """Representative level per bin (geometric bin centers for ratio)."""
    return _BIN_LEVELS[kind]


def ratio_bin_index(prev: np.ndarray, cur: np.ndarray) -> np.ndarray:
    """Logarithmic bin of r = (cur+1)/(prev+1): floor(256 (ln r + ln 256) / (2 ln 256)).

    The +1 regularization keeps the ratio defined at gray level 0 and the map
    symmetric in r vs 1/r; the domain is exactly [1/256, 256].
    """
    x = np.log(cur + 1.0) - np.log(prev + 1.0)
    idx = np.floor(256.0 * (x + _LN256) / (2.0 * _LN256)).astype(np.int64)
    return np.clip(idx, 0, 255)


def _levels_for(kind: FeatureKind) -> np.ndarray:
    if kind is FeatureKind.DIFF:
        levels = np.arange(-255, 256, dtype=np.float64)
    elif kind is FeatureKind.RATIO:
        # geometric center of bin b, edges at 256**(b/128 - 1)
        levels = 256.0 ** ((2.0 * np.arange(256) + 1.0) / 256.0 - 1.0)
    else:
        levels = np.arange(256, dtype=np.float64)
    levels.setflags(write=False)
    return levels


_BIN_LEVELS = {kind: _levels_for(kind) for kind in FeatureKind}


@dataclass(frozen=True)
class FeatureStream:
    """Sequence of bin indices for one feature kind."""

    kind: FeatureKind
    bin_indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.bin_indices, dtype=np.int64).reshape(-1)
        if idx.size and (idx.min() < 0 or idx.max() >= self.kind.bin_count):
            raise ValueError(f"bin index out of range for {self.kind.value}")
        idx.setflags(write=False)
        object.__setattr__(self, "bin_indices", idx)

    @property
    def count(self) -> int:
        return int(self.bin_indices.size)


def extract(seq: PixelSequence, kind: FeatureKind) -> FeatureStream:
    """Derive the feature stream of `kind` from a pixel sequence.

    gray yields one value per pixel; the neighbor kinds yield one value per
    consecutive pair (pixel count - 1) and need at least two pixels.
    """
    values = seq.values.astype(np.int64)
    if kind is FeatureKind.GRAY:
        return FeatureStream(kind, values)
    if values.size < 2:
        raise SequenceTooShort(
            f"feature '{kind.value}' needs >= 2 pixels, got {values.size}"
        )
    if kind is FeatureKind.DIFF:
        idx = np.diff(values) + 255
    elif kind is FeatureKind.ABSDIFF:
        idx = np.abs(np.diff(values))
    else:
        idx = ratio_bin_index(values[:-1], values[1:])
    return FeatureStream(kind, idx)
