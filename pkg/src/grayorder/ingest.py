"""Image decoding and pixel-grid linearization.

Everything downstream works on 8-bit gray levels in [0, 255]. Color inputs
are reduced with the BT.601 integer luma (round half up); inputs with any
other channel depth are rejected rather than rescaled, because the whole
pipeline is defined over exactly 256 levels.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np
from PIL import Image

from .errors import MalformedFile, UnsupportedBitDepth

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"

# BT.601 luma weights; applied as round-half-up on the float sum.
_LUMA = np.array([0.299, 0.587, 0.114])


class ImageFormat(Enum):
    PNG = "png"
    PGM = "pgm"
    BMP = "bmp"


class Traversal(Enum):
    BOUSTROPHEDON = "boustrophedon"
    ROW_MAJOR = "rowmajor"


@dataclass(frozen=True)
class PixelGrid:
    """Decoded 8-bit grayscale raster, values row-major."""

    width: int
    height: int
    values: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        arr = np.asarray(self.values)
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("gray levels must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr.reshape(-1))
        if arr.size != self.width * self.height:
            raise ValueError(
                f"value count {arr.size} != {self.width}x{self.height}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_array(cls, rows) -> "PixelGrid":
        """Build a grid from a 2-D array-like of gray levels."""
        arr = np.asarray(rows)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array of gray levels")
        return cls(width=arr.shape[1], height=arr.shape[0], values=arr.reshape(-1))

    def rows(self) -> np.ndarray:
        return self.values.reshape(self.height, self.width)

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class PixelSequence:
    """1-D linearization of a grid, tagged with how it was produced."""

    values: np.ndarray
    traversal: Traversal
    source_width: int
    source_height: int

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.uint8).reshape(-1)
        if arr.size != self.source_width * self.source_height:
            raise ValueError("sequence length must equal source pixel count")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


def boustrophedon(grid: PixelGrid) -> PixelSequence:
    """Serpentine linearization: row 0 left-to-right, row 1 reversed, alternating.

    Consecutive sequence elements are spatially adjacent pixels, including
    across row seams, which is what makes neighbor-pair features meaningful.
    """
    rows = grid.rows().copy()
    rows[1::2] = rows[1::2, ::-1]
    return PixelSequence(
        values=rows.reshape(-1),
        traversal=Traversal.BOUSTROPHEDON,
        source_width=grid.width,
        source_height=grid.height,
    )


def row_major(grid: PixelGrid) -> PixelSequence:
    """Plain row-major linearization (control mode; seam neighbors are not adjacent)."""
    return PixelSequence(
        values=grid.values,
        traversal=Traversal.ROW_MAJOR,
        source_width=grid.width,
        source_height=grid.height,
    )


def sniff_format(data: bytes) -> ImageFormat:
    """Identify PNG/PGM/BMP from magic bytes."""
    if data.startswith(_PNG_SIGNATURE):
        return ImageFormat.PNG
    if data.startswith(b"P5"):
        return ImageFormat.PGM
    if data.startswith(b"BM"):
        return ImageFormat.BMP
    raise MalformedFile("unrecognized image format (expected PNG, binary PGM or BMP)")


def decode_grayscale(data: bytes, fmt: ImageFormat | str) -> PixelGrid:
    """Decode file bytes of the stated format to an 8-bit gray grid.

    Color is reduced via gray = round(0.299 R + 0.587 G + 0.114 B); alpha is
    ignored. Raises MalformedFile on undecodable bytes and UnsupportedBitDepth
    on non-8-bit channels (16-bit sources are rejected, not truncated).
    """
    if isinstance(fmt, str):
        fmt = ImageFormat(fmt.lower())
    if fmt is ImageFormat.PGM:
        return _decode_pgm(data)
    if fmt is ImageFormat.PNG:
        _check_png_header(data)
    else:
        _check_bmp_header(data)
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception as exc:
        raise MalformedFile(f"cannot decode {fmt.value.upper()} data: {exc}") from None
    return _grid_from_pil(img)


def decode_auto(data: bytes) -> PixelGrid:
    return decode_grayscale(data, sniff_format(data))


def encode_pgm(grid: PixelGrid) -> bytes:
    """Serialize a grid as binary PGM (P5, maxval 255); round-trips bit-exactly."""
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + grid.values.tobytes()


def _decode_pgm(data: bytes) -> PixelGrid:
    if not data.startswith(b"P5"):
        raise MalformedFile("not a binary PGM (missing P5 magic)")
    tokens, pos = _pgm_header_tokens(data)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise MalformedFile("non-numeric PGM header field") from None
    if width < 1 or height < 1:
        raise MalformedFile(f"bad PGM dimensions {width}x{height}")
    if maxval > 255:
        raise UnsupportedBitDepth(f"PGM maxval {maxval} needs >8 bits per sample")
    if maxval < 1:
        raise MalformedFile(f"bad PGM maxval {maxval}")
    raster = data[pos : pos + width * height]
    if len(raster) < width * height:
        raise MalformedFile(
            f"PGM raster truncated: {len(raster)} bytes for {width}x{height}"
        )
    return PixelGrid(width, height, np.frombuffer(raster, dtype=np.uint8))


def _pgm_header_tokens(data: bytes):
    """Read width/height/maxval after the P5 magic; '#' comments run to end of line."""
    tokens = []
    i = 2
    n = len(data)
    while len(tokens) < 3:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] != ord("\n"):
                i += 1
            continue
        if i >= n:
            raise MalformedFile("truncated PGM header")
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i] != ord("#"):
            i += 1
        tokens.append(data[start:i])
    if i >= n or not data[i : i + 1].isspace():
        raise MalformedFile("PGM header not followed by raster")
    return tokens, i + 1  # exactly one whitespace byte separates maxval from raster


def _check_png_header(data: bytes) -> None:
    if len(data) < 33 or not data.startswith(_PNG_SIGNATURE) or data[12:16] != b"IHDR":
        raise MalformedFile("not a PNG file")
    bit_depth = data[24]
    color_type = data[25]
    if bit_depth != 8:
        raise UnsupportedBitDepth(f"PNG bit depth {bit_depth}, only 8 is supported")
    if color_type not in (0, 2, 3, 4, 6):
        raise MalformedFile(f"unknown PNG color type {color_type}")


def _check_bmp_header(data: bytes) -> None:
    if len(data) < 26 or not data.startswith(b"BM"):
        raise MalformedFile("not a BMP file")
    dib_size = int.from_bytes(data[14:18], "little")
    if dib_size == 12:  # BITMAPCOREHEADER: 16-bit fields, no compression field
        bit_count = int.from_bytes(data[24:26], "little")
        compression = 0
    else:
        if len(data) < 34:
            raise MalformedFile("truncated BMP header")
        bit_count = int.from_bytes(data[28:30], "little")
        compression = int.from_bytes(data[30:34], "little")
    if bit_count not in (8, 24):
        raise UnsupportedBitDepth(f"BMP bit depth {bit_count}, only 8 and 24 supported")
    if compression != 0:
        raise MalformedFile("compressed BMP is not supported")


def _grid_from_pil(img: Image.Image) -> PixelGrid:
    width, height = img.size
    if img.mode == "L":
        gray = np.asarray(img, dtype=np.uint8)
    elif img.mode == "LA":
        gray = np.asarray(img)[:, :, 0]
    else:
        if img.mode == "P":
            img = img.convert("RGB")
        if img.mode not in ("RGB", "RGBA"):
            raise UnsupportedBitDepth(f"unsupported pixel mode '{img.mode}'")
        rgb = np.asarray(img, dtype=np.float64)[:, :, :3]
        luma = np.floor(rgb @ _LUMA + 0.5)
        gray = np.clip(luma, 0, 255).astype(np.uint8)
    return PixelGrid(width, height, gray.reshape(-1))
