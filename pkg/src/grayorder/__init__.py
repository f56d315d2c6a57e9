"""Relative degree of order of grayscale images.

Two images are compared as information objects: their feature distributions
are renormalized onto a common footing (equal mass and/or equal mean level)
and the entropy difference of the pair is the order scalar. Positive values
mean the second image is the more ordered one.
"""

from .baseline import (
    BaselineKind,
    BaselineSpec,
    absolute_order,
    generate,
    ideal_distribution,
    ideal_raster,
    splitmix64_levels,
)
from .distribution import Distribution, build, entropy, mean_level, total_mass
from .features import FeatureKind, FeatureStream, bin_levels, extract
from .ingest import (
    ImageFormat,
    PixelGrid,
    PixelSequence,
    Traversal,
    boustrophedon,
    decode_auto,
    decode_grayscale,
    encode_pgm,
    row_major,
    sniff_format,
)
from .order import (
    ALL_MODES,
    HEADLINE_MODE,
    ImageRef,
    Mode,
    ModeEntry,
    OrderReport,
    OrderValue,
    Reference,
    compare,
    grid_ref,
    headline_ocy,
    lyapunov,
)
from .renorm import (
    RenormMethod,
    RenormOutcome,
    admissible,
    apply_method,
    axis_scale,
    opposed_shift,
    renorm_mass,
    shift_to_mean,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_MODES",
    "BaselineKind",
    "BaselineSpec",
    "Distribution",
    "FeatureKind",
    "FeatureStream",
    "HEADLINE_MODE",
    "ImageFormat",
    "ImageRef",
    "Mode",
    "ModeEntry",
    "OrderReport",
    "OrderValue",
    "PixelGrid",
    "PixelSequence",
    "Reference",
    "RenormMethod",
    "RenormOutcome",
    "Traversal",
    "absolute_order",
    "admissible",
    "apply_method",
    "axis_scale",
    "bin_levels",
    "boustrophedon",
    "build",
    "compare",
    "decode_auto",
    "decode_grayscale",
    "encode_pgm",
    "entropy",
    "extract",
    "generate",
    "grid_ref",
    "headline_ocy",
    "ideal_distribution",
    "ideal_raster",
    "lyapunov",
    "mean_level",
    "opposed_shift",
    "renorm_mass",
    "row_major",
    "shift_to_mean",
    "sniff_format",
    "splitmix64_levels",
    "total_mass",
]
