"""The order functional and the full comparison mode matrix.

For a renormalized pair (f_ref, f_adj) two printed forms of the comparison
functional are evaluated:

  delta_s = S(f_ref) - S(f_adj)                 entropy difference, signed
  kl      = sum f_ref ln(f_ref / f_adj) >= 0    divergence form

delta_s > 0 means the adjusted (second) distribution has lower entropy,
i.e. the second image is the more ordered one. The two forms coincide only
when sum (f_ref - f_adj) ln f_adj = 0, so both are reported; `forms_agree`
records whether delta_s == -kl within tolerance.

A full comparison of two images runs the 4 features x 4 renormalizations
x 2 reference choices = 32-entry mode matrix; inadmissible feature/renorm
pairs appear as explicit skips so a report always has 32 rows.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .distribution import Distribution, build, entropy, total_mass
from .errors import (
    EmptyStream,
    KindMismatch,
    MassMismatch,
    SequenceTooShort,
    SizeMismatch,
    UnsupportedKind,
    ZeroMean,
)
from .features import FeatureKind, extract
from .ingest import PixelGrid, boustrophedon, encode_pgm
from .renorm import RenormMethod, admissible, apply_method

MASS_TOLERANCE = 1e-9
FORMS_TOLERANCE = 1e-9


class Reference(Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class Mode:
    """One cell of the mode matrix: feature x renormalization x reference choice."""

    feature: FeatureKind
    renorm: RenormMethod
    reference: Reference

    def __str__(self) -> str:
        return f"{self.feature.value}:{self.renorm.value}:{self.reference.value}"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        parts = text.strip().lower().split(":")
        if len(parts) != 3:
            raise ValueError(f"mode '{text}' is not feature:renorm:reference")
        try:
            return cls(FeatureKind(parts[0]), RenormMethod(parts[1]), Reference(parts[2]))
        except ValueError:
            raise ValueError(f"unknown mode '{text}'") from None


ALL_MODES = tuple(
    Mode(feature, method, reference)
    for feature in FeatureKind
    for method in RenormMethod
    for reference in Reference
)

HEADLINE_MODE = Mode(FeatureKind.GRAY, RenormMethod.MASS_SCALE, Reference.FIRST)


@dataclass(frozen=True)
class OrderValue:
    """Both printed forms of the functional for one renormalized pair."""

    delta_s: float
    kl: float
    forms_agree: bool
    support_mismatch_mass: float


def lyapunov(
    f_ref: Distribution, f_adj: Distribution, epsilon: float = 0.0
) -> OrderValue:
    """Evaluate the order functional; the caller must have equalized masses.

    epsilon > 0 smooths the adjusted side's zero bins before the divergence:
    f_adj' = (f_adj + eps) / (1 + B*eps) with B the bin count. With epsilon
    = 0 and reference mass sitting on adjusted zero bins, kl is reported as
    +inf rather than silently smoothed.
    """
    if f_ref.kind is not f_adj.kind:
        raise KindMismatch(
            f"cannot compare '{f_ref.kind.value}' with '{f_adj.kind.value}'"
        )
    if epsilon < 0.0:
        raise ValueError("epsilon must be >= 0")
    ref_total = total_mass(f_ref)
    adj_total = total_mass(f_adj)
    if abs(ref_total - adj_total) > MASS_TOLERANCE:
        raise MassMismatch(
            f"total masses differ by {abs(ref_total - adj_total):.3e}; renormalize first"
        )

    delta_s = entropy(f_ref) - entropy(f_adj)

    p = f_ref.masses / ref_total
    q = f_adj.masses / adj_total
    support_mismatch = math.fsum(p[(p > 0.0) & (q == 0.0)])

    if epsilon == 0.0 and support_mismatch > 0.0:
        kl = math.inf
    else:
        if epsilon > 0.0:
            q = (q + epsilon) / (1.0 + q.size * epsilon)
        keep = p > 0.0
        kl = math.fsum(pi * math.log(pi / qi) for pi, qi in zip(p[keep], q[keep]))

    forms_agree = math.isfinite(kl) and abs(delta_s + kl) <= FORMS_TOLERANCE
    return OrderValue(delta_s, kl, forms_agree, support_mismatch)


@dataclass(frozen=True)
class ImageRef:
    """Content identifier for one side of a comparison."""

    path: str
    sha256: str


def grid_ref(grid: PixelGrid, path: str = "<grid>") -> ImageRef:
    """Identifier for an in-memory grid: digest of its canonical PGM encoding."""
    return ImageRef(path, hashlib.sha256(encode_pgm(grid)).hexdigest())


@dataclass(frozen=True)
class ModeEntry:
    mode: Mode
    value: Optional[OrderValue]
    residual_mean_gap: Optional[float]
    clipped_mass: Optional[float]
    skipped: bool
    skip_reason: Optional[str]


@dataclass(frozen=True)
class OrderReport:
    """Mode matrix of results for one image pair; always 32 entries."""

    image_a: ImageRef
    image_b: ImageRef
    epsilon: float
    strict: bool
    entries: tuple

    @property
    def headline(self) -> Optional[ModeEntry]:
        """The gray/mass/first entry, or None if it was skipped."""
        for entry in self.entries:
            if entry.mode == HEADLINE_MODE and not entry.skipped:
                return entry
        return None

    def clipping_warnings(self, threshold: float = 0.01) -> list:
        """Modes whose renormalization clipped enough mass to strain the
        equal-mean premise; surfaced as warnings by the CLI."""
        return [
            f"mode {entry.mode}: clipped mass {entry.clipped_mass:.4f} exceeds {threshold}"
            for entry in self.entries
            if not entry.skipped and entry.clipped_mass > threshold
        ]


def compare(
    grid_a: PixelGrid,
    grid_b: PixelGrid,
    modes: Optional[Iterable[Mode]] = None,
    epsilon: float = 0.0,
    strict: bool = True,
    ref_a: Optional[ImageRef] = None,
    ref_b: Optional[ImageRef] = None,
) -> OrderReport:
    """Run the mode matrix for an image pair.

    `modes=None` evaluates all 32 modes; an explicit collection marks the
    rest as skipped, keeping the 32-row report shape. Strict mode insists on
    equal pixel counts. Per-mode failures (too-short sequences, inadmissible
    or degenerate renormalizations) are recorded as skips with a reason and
    never abort the rest of the matrix.
    """
    if strict and grid_a.pixel_count != grid_b.pixel_count:
        raise SizeMismatch(
            "strict mode requires equal pixel counts: "
            f"{grid_a.width}x{grid_a.height} vs {grid_b.width}x{grid_b.height}"
        )
    requested = None if modes is None else {m for m in modes}
    seq_a = boustrophedon(grid_a)
    seq_b = boustrophedon(grid_b)

    cache = {}

    def distribution_for(which: str, seq, kind: FeatureKind) -> Distribution:
        key = (which, kind)
        if key not in cache:
            try:
                cache[key] = ("ok", build(extract(seq, kind)))
            except (SequenceTooShort, EmptyStream) as exc:
                cache[key] = ("err", exc)
        status, payload = cache[key]
        if status == "err":
            raise payload
        return payload

    entries = []
    for mode in ALL_MODES:
        if requested is not None and mode not in requested:
            entries.append(_skip(mode, "excluded by mode filter"))
            continue
        if not admissible(mode.feature, mode.renorm):
            entries.append(
                _skip(
                    mode,
                    f"renorm '{mode.renorm.value}' undefined for feature "
                    f"'{mode.feature.value}'",
                )
            )
            continue
        try:
            dist_a = distribution_for("a", seq_a, mode.feature)
            dist_b = distribution_for("b", seq_b, mode.feature)
            if mode.reference is Reference.FIRST:
                outcome = apply_method(mode.renorm, dist_a, dist_b)
            else:
                outcome = apply_method(mode.renorm, dist_b, dist_a)
            value = lyapunov(outcome.reference, outcome.adjusted, epsilon)
        except (SequenceTooShort, EmptyStream, UnsupportedKind, ZeroMean) as exc:
            entries.append(_skip(mode, f"{type(exc).__name__}: {exc}"))
            continue
        entries.append(
            ModeEntry(
                mode=mode,
                value=value,
                residual_mean_gap=outcome.residual_mean_gap,
                clipped_mass=outcome.clipped_mass,
                skipped=False,
                skip_reason=None,
            )
        )

    return OrderReport(
        image_a=ref_a if ref_a is not None else grid_ref(grid_a),
        image_b=ref_b if ref_b is not None else grid_ref(grid_b),
        epsilon=epsilon,
        strict=strict,
        entries=tuple(entries),
    )


def headline_ocy(report: OrderReport) -> float:
    """The single scalar quoted per comparison: headline delta_s."""
    entry = report.headline
    if entry is None:
        raise ValueError("report has no evaluated headline entry")
    return entry.value.delta_s


def _skip(mode: Mode, reason: str) -> ModeEntry:
    return ModeEntry(
        mode=mode,
        value=None,
        residual_mean_gap=None,
        clipped_mass=None,
        skipped=True,
        skip_reason=reason,
    )
