"""Reference images for an absolute order scale.

Two zero points are available: seeded uniform random noise (maximum gray
disorder) and the constant "black square" (total order, entropy 0). Noise
pixels come from splitmix64 run in counter mode,

    pixel[k] = top 8 bits of mix64(seed + (k+1) * 0x9E3779B97F4A7C15)

with the standard mix64 finalizer (xor-shift 30/27/31, multipliers
0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). Pure 64-bit integer arithmetic,
so the same seed yields a bitwise-identical image on every platform; the
recipe is part of the external contract and documented in the README.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distribution import Distribution, build
from .errors import SizeMismatch
from .features import FeatureKind, extract, ratio_bin_index
from .ingest import PixelGrid, boustrophedon
from .order import Mode, OrderValue, lyapunov
from .renorm import apply_method

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)


class BaselineKind(Enum):
    UNIFORM_NOISE = "noise"
    CONSTANT = "black"


@dataclass(frozen=True)
class BaselineSpec:
    kind: BaselineKind
    width: int
    height: int
    seed: int = 0  # uniform noise only
    level: int = 0  # constant only

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("baseline dimensions must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if not 0 <= self.level <= 255:
            raise ValueError("level must lie in [0, 255]")

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


def splitmix64_levels(seed: int, count: int) -> np.ndarray:
    """Deterministic uniform gray levels; see the module docstring for the recipe."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + np.arange(1, count + 1, dtype=np.uint64) * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX_1
        z = (z ^ (z >> np.uint64(27))) * _MIX_2
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(56)).astype(np.uint8)


def generate(spec: BaselineSpec) -> PixelGrid:
    """Realize the baseline image described by `spec`."""
    if spec.kind is BaselineKind.CONSTANT:
        values = np.full(spec.pixel_count, spec.level, dtype=np.uint8)
    else:
        values = splitmix64_levels(spec.seed, spec.pixel_count)
    return PixelGrid(spec.width, spec.height, values)


def ideal_raster(width: int, height: int) -> PixelGrid:
    """Deterministic raster whose gray histogram is exactly uniform.

    Each of the 256 levels appears exactly (width*height)/256 times, so the
    gray-feature comparison against it hits the analytic disorder zero with
    no sampling error. Requires the pixel count to be a multiple of 256.
    Neighbor features of this raster are NOT noise-like (it is a ramp).
    """
    count = width * height
    if count % 256 != 0:
        raise ValueError(
            f"ideal raster needs a pixel count divisible by 256, got {count}"
        )
    return PixelGrid(width, height, (np.arange(count, dtype=np.int64) % 256))


def ideal_distribution(spec: BaselineSpec, feature: FeatureKind) -> Distribution:
    """Exact feature distribution of the baseline's generating process.

    For uniform noise the gray density is flat and the neighbor features are
    enumerated over all 256x256 independent level pairs; for the constant
    image every feature is a point mass. Size-independent.
    """
    if spec.kind is BaselineKind.CONSTANT:
        level = np.array([spec.level], dtype=np.float64)
        if feature is FeatureKind.GRAY:
            index = int(spec.level)
        elif feature is FeatureKind.DIFF:
            index = 255
        elif feature is FeatureKind.ABSDIFF:
            index = 0
        else:
            index = int(ratio_bin_index(level, level)[0])
        masses = np.zeros(feature.bin_count)
        masses[index] = 1.0
        return Distribution(feature, masses)

    if feature is FeatureKind.GRAY:
        return Distribution(feature, np.full(256, 1.0 / 256.0))
    prev = np.repeat(np.arange(256, dtype=np.float64), 256)
    cur = np.tile(np.arange(256, dtype=np.float64), 256)
    if feature is FeatureKind.DIFF:
        bins = (cur - prev).astype(np.int64) + 255
    elif feature is FeatureKind.ABSDIFF:
        bins = np.abs(cur - prev).astype(np.int64)
    else:
        bins = ratio_bin_index(prev, cur)
    masses = np.bincount(bins, minlength=feature.bin_count).astype(np.float64)
    return Distribution(feature, masses / masses.sum())


def absolute_order(
    image: PixelGrid,
    spec: BaselineSpec,
    mode: Mode,
    epsilon: float = 0.0,
    strict: bool = True,
    ideal: bool = False,
) -> OrderValue:
    """Order of `image` against the baseline, baseline always the reference.

    Positive delta_s means the image is more ordered than the baseline (for
    the noise zero); against the constant zero delta_s <= 0 always for the
    gray feature, since nothing is more ordered than a point mass. The
    reference component of `mode` is ignored. With ideal=True the baseline's
    exact process distribution replaces the realized sample.
    """
    if strict and spec.pixel_count != image.pixel_count:
        raise SizeMismatch(
            "strict mode requires equal pixel counts: "
            f"baseline {spec.width}x{spec.height} vs image {image.width}x{image.height}"
        )
    if ideal:
        base_dist = ideal_distribution(spec, mode.feature)
    else:
        base_dist = build(extract(boustrophedon(generate(spec)), mode.feature))
    image_dist = build(extract(boustrophedon(image), mode.feature))
    outcome = apply_method(mode.renorm, base_dist, image_dist)
    return lyapunov(outcome.reference, outcome.adjusted, epsilon)
