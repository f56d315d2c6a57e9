"""Exception types shared across the package."""


class GrayOrderError(Exception):
    """Base class for every error this package raises on purpose."""


class MalformedFile(GrayOrderError):
    """Input bytes cannot be decoded as the stated image format."""


class UnsupportedBitDepth(GrayOrderError):
    """Image uses a channel depth other than 8 bits (rejected, never rescaled)."""


class SequenceTooShort(GrayOrderError):
    """Neighbor-pair features need at least two pixels."""


class EmptyStream(GrayOrderError):
    """A distribution cannot be built from zero samples."""


class KindMismatch(GrayOrderError):
    """The two distributions are over different feature domains."""


class UnsupportedKind(GrayOrderError):
    """The renormalization method is undefined for this feature domain."""


class ZeroMean(GrayOrderError):
    """Axis rescaling needs a nonzero mean to scale toward a different one."""


class MassMismatch(GrayOrderError):
    """Order functional called on distributions with unequal total mass (pipeline bug)."""


class SizeMismatch(GrayOrderError):
    """Strict comparison requires equal pixel counts."""


class ManifestMalformed(GrayOrderError):
    """Batch manifest is not a path_a,path_b CSV."""
