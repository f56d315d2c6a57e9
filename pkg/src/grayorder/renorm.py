"""Renormalizations that make two distributions comparable.

Four methods equalize either total mass or mean level:

  mass     scale the other distribution's masses so totals match
  shift    translate the other distribution along the level axis
  opposed  translate both distributions toward the common mean, half each
  scale    stretch/compress the other distribution's level axis

The shift methods need an additive level axis, so they exclude ratio (its
axis is logarithmic; translating log bins is multiplicative rescaling, which
is exactly what `scale` does). `scale` is restricted to the non-negative
integer axes (gray, absdiff). Inadmissible pairs raise UnsupportedKind.

Fractional moves use a two-point linear split between the adjacent integer
bins: this conserves total mass exactly and moves the mean by exactly the
requested amount. Mass pushed past a domain edge accumulates in the edge bin
(never deleted) and is reported as clipped_mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distribution import Distribution, mean_level, total_mass
from .errors import KindMismatch, UnsupportedKind, ZeroMean
from .features import FeatureKind


class RenormMethod(Enum):
    MASS_SCALE = "mass"
    SHIFT_OTHER = "shift"
    OPPOSED_SHIFT = "opposed"
    AXIS_SCALE = "scale"


_SHIFT_KINDS = frozenset(
    {FeatureKind.GRAY, FeatureKind.DIFF, FeatureKind.ABSDIFF}
)
_SCALE_KINDS = frozenset({FeatureKind.GRAY, FeatureKind.ABSDIFF})


def admissible(kind: FeatureKind, method: RenormMethod) -> bool:
    """Whether `method` is defined for distributions over `kind`."""
    if method in (RenormMethod.SHIFT_OTHER, RenormMethod.OPPOSED_SHIFT):
        return kind in _SHIFT_KINDS
    if method is RenormMethod.AXIS_SCALE:
        return kind in _SCALE_KINDS
    return True


@dataclass(frozen=True)
class RenormOutcome:
    """Comparable pair after renormalization.

    `reference` differs from the input reference only under the opposed
    shift, which moves both sides. residual_mean_gap is the |mean difference|
    left after adjustment (mass scaling does not touch means, so it can stay
    large there); clipped_mass is the mass that hit a domain edge.
    """

    reference: Distribution
    adjusted: Distribution
    method: RenormMethod
    residual_mean_gap: float
    clipped_mass: float


def renorm_mass(reference: Distribution, other: Distribution) -> RenormOutcome:
    """Scale `other`'s masses by total(reference)/total(other)."""
    _require_same_kind(reference, other)
    factor = total_mass(reference) / total_mass(other)
    adjusted = other.with_masses(other.masses * factor)
    gap = abs(mean_level(reference) - mean_level(adjusted))
    return RenormOutcome(reference, adjusted, RenormMethod.MASS_SCALE, gap, 0.0)


def shift_to_mean(reference: Distribution, other: Distribution) -> RenormOutcome:
    """Translate `other` along the level axis so means match."""
    _require_same_kind(reference, other)
    _require_shiftable(other.kind)
    delta = mean_level(reference) - mean_level(other)
    moved, clipped = _translate(other.masses, delta)
    adjusted = other.with_masses(moved)
    gap = abs(mean_level(reference) - mean_level(adjusted))
    return RenormOutcome(reference, adjusted, RenormMethod.SHIFT_OTHER, gap, clipped)


def opposed_shift(a: Distribution, b: Distribution) -> RenormOutcome:
    """Shift both distributions halfway toward the common mean.

    Used when neither image may be modified more than necessary; swapping the
    inputs swaps the outputs with the shift direction negated.
    """
    _require_same_kind(a, b)
    _require_shiftable(a.kind)
    delta = mean_level(a) - mean_level(b)
    moved_a, clipped_a = _translate(a.masses, -delta / 2.0)
    moved_b, clipped_b = _translate(b.masses, +delta / 2.0)
    shifted_a = a.with_masses(moved_a)
    shifted_b = b.with_masses(moved_b)
    gap = abs(mean_level(shifted_a) - mean_level(shifted_b))
    return RenormOutcome(
        shifted_a, shifted_b, RenormMethod.OPPOSED_SHIFT, gap, clipped_a + clipped_b
    )


def axis_scale(reference: Distribution, other: Distribution) -> RenormOutcome:
    """Map each level L of `other` to L * mean(reference)/mean(other)."""
    _require_same_kind(reference, other)
    if other.kind not in _SCALE_KINDS:
        raise UnsupportedKind(
            f"axis scaling is undefined for feature '{other.kind.value}'"
        )
    ref_mean = mean_level(reference)
    other_mean = mean_level(other)
    if other_mean == 0.0:
        if ref_mean != 0.0:
            raise ZeroMean("cannot rescale a zero-mean distribution to a nonzero mean")
        adjusted, clipped = other, 0.0
    else:
        moved, clipped = _rescale(other.masses, ref_mean / other_mean)
        adjusted = other.with_masses(moved)
    gap = abs(ref_mean - mean_level(adjusted))
    return RenormOutcome(reference, adjusted, RenormMethod.AXIS_SCALE, gap, clipped)


def apply_method(
    method: RenormMethod, reference: Distribution, other: Distribution
) -> RenormOutcome:
    return _DISPATCH[method](reference, other)


_DISPATCH = {
    RenormMethod.MASS_SCALE: renorm_mass,
    RenormMethod.SHIFT_OTHER: shift_to_mean,
    RenormMethod.OPPOSED_SHIFT: opposed_shift,
    RenormMethod.AXIS_SCALE: axis_scale,
}


def _require_same_kind(a: Distribution, b: Distribution) -> None:
    if a.kind is not b.kind:
        raise KindMismatch(f"cannot mix '{a.kind.value}' with '{b.kind.value}'")


def _require_shiftable(kind: FeatureKind) -> None:
    if kind not in _SHIFT_KINDS:
        raise UnsupportedKind(f"axis shift is undefined for feature '{kind.value}'")


def _translate(masses: np.ndarray, delta: float):
    """Move every bin's mass by `delta` bins with the two-point linear kernel."""
    nbins = masses.size
    whole = math.floor(delta)
    frac = delta - whole
    source = np.arange(nbins)
    out = np.zeros(nbins)
    clipped = 0.0
    for offset, weight in ((whole, 1.0 - frac), (whole + 1, frac)):
        if weight == 0.0:
            continue
        part = masses * weight
        target = source + offset
        out += np.bincount(np.clip(target, 0, nbins - 1), weights=part, minlength=nbins)
        clipped += float(part[(target < 0) | (target > nbins - 1)].sum())
    return out, clipped


def _rescale(masses: np.ndarray, factor: float):
    """Deposit each bin's mass at level*factor, split between adjacent bins.

    Only called for gray/absdiff, where bin index == level, so position
    arithmetic happens directly on indices.
    """
    nbins = masses.size
    position = np.arange(nbins) * factor
    lower = np.floor(position).astype(np.int64)
    frac = position - lower
    out = np.zeros(nbins)
    clipped = 0.0
    for target, part in ((lower, masses * (1.0 - frac)), (lower + 1, masses * frac)):
        out += np.bincount(np.clip(target, 0, nbins - 1), weights=part, minlength=nbins)
        outside = (target < 0) | (target > nbins - 1)
        clipped += float(part[outside].sum())
    return out, clipped
