import io
import struct
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from conftest import make_grid, random_grid
from grayorder import (
    ImageFormat,
    PixelGrid,
    Traversal,
    boustrophedon,
    decode_auto,
    decode_grayscale,
    encode_pgm,
    row_major,
    sniff_format,
)
from grayorder.errors import MalformedFile, UnsupportedBitDepth


def _png_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def _bmp_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="BMP")
    return buf.getvalue()


GOLDEN = Path(__file__).parent / "data"


# ---------------------------------------------------------------- PGM decode

def test_golden_ramp_raster():
    grid = decode_auto((GOLDEN / "ramp_4x3.pgm").read_bytes())
    assert (grid.width, grid.height) == (4, 3)
    assert grid.values.tolist() == [v * 20 for v in range(12)]
    seq = boustrophedon(grid)
    assert seq.values.tolist() == [0, 20, 40, 60, 140, 120, 100, 80, 160, 180, 200, 220]


def test_golden_checkerboard_raster():
    grid = decode_auto((GOLDEN / "checker_8x8.pgm").read_bytes())
    assert (grid.width, grid.height) == (8, 8)
    counts = np.bincount(grid.values, minlength=256)
    assert counts[0] == 32 and counts[255] == 32


def test_pgm_gray_passthrough():
    data = b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64])
    grid = decode_grayscale(data, ImageFormat.PGM)
    assert (grid.width, grid.height) == (2, 2)
    assert grid.values.tolist() == [0, 255, 128, 64]


def test_pgm_header_comments():
    data = b"P5\n# a comment\n2 1 # trailing\n255\n" + bytes([7, 9])
    grid = decode_grayscale(data, "pgm")
    assert grid.values.tolist() == [7, 9]


def test_pgm_16bit_rejected():
    data = b"P5\n1 1\n65535\n" + bytes([0, 0])
    with pytest.raises(UnsupportedBitDepth):
        decode_grayscale(data, ImageFormat.PGM)


def test_pgm_small_maxval_accepted():
    data = b"P5\n2 1\n15\n" + bytes([3, 15])
    assert decode_grayscale(data, ImageFormat.PGM).values.tolist() == [3, 15]


def test_pgm_truncated_raster():
    data = b"P5\n4 4\n255\n" + bytes(5)
    with pytest.raises(MalformedFile):
        decode_grayscale(data, ImageFormat.PGM)


def test_pgm_bad_magic():
    with pytest.raises(MalformedFile):
        decode_grayscale(b"P6\n1 1\n255\nX", ImageFormat.PGM)


def test_pgm_round_trip_bit_exact():
    rng = np.random.default_rng(11)
    for _ in range(5):
        grid = random_grid(rng, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        again = decode_grayscale(encode_pgm(grid), ImageFormat.PGM)
        assert np.array_equal(again.values, grid.values)
        assert (again.width, again.height) == (grid.width, grid.height)


# ---------------------------------------------------------------- PNG decode

def test_png_white_is_255():
    data = _png_bytes(Image.new("RGB", (1, 1), (255, 255, 255)))
    assert decode_grayscale(data, ImageFormat.PNG).values.tolist() == [255]


def test_png_luma_rounding():
    # round(0.299*100 + 0.587*150 + 0.114*200) = round(140.75) = 141
    data = _png_bytes(Image.new("RGB", (1, 1), (100, 150, 200)))
    assert decode_grayscale(data, ImageFormat.PNG).values.tolist() == [141]


def test_png_alpha_ignored():
    rgb = _png_bytes(Image.new("RGB", (2, 2), (10, 20, 30)))
    rgba = _png_bytes(Image.new("RGBA", (2, 2), (10, 20, 30, 7)))
    assert (
        decode_grayscale(rgb, ImageFormat.PNG).values.tolist()
        == decode_grayscale(rgba, ImageFormat.PNG).values.tolist()
    )


def test_png_gray_passthrough():
    arr = np.array([[0, 13], [254, 255]], dtype=np.uint8)
    data = _png_bytes(Image.fromarray(arr, "L"))
    assert decode_grayscale(data, ImageFormat.PNG).values.tolist() == [0, 13, 254, 255]


def test_png_16bit_rejected():
    img = Image.new("I;16", (2, 2))
    data = _png_bytes(img)
    with pytest.raises(UnsupportedBitDepth):
        decode_grayscale(data, ImageFormat.PNG)


def test_png_garbage_rejected():
    with pytest.raises(MalformedFile):
        decode_grayscale(b"\x89PNG\r\n\x1a\nnope", ImageFormat.PNG)


def test_format_mismatch_rejected():
    png = _png_bytes(Image.new("L", (1, 1)))
    with pytest.raises(MalformedFile):
        decode_grayscale(png, ImageFormat.PGM)


# ---------------------------------------------------------------- BMP decode

def test_bmp_24bit_luma():
    data = _bmp_bytes(Image.new("RGB", (1, 1), (100, 150, 200)))
    assert decode_grayscale(data, ImageFormat.BMP).values.tolist() == [141]


def test_bmp_8bit_gray_passthrough():
    arr = np.array([[0, 100], [200, 255]], dtype=np.uint8)
    data = _bmp_bytes(Image.fromarray(arr, "L"))
    assert decode_grayscale(data, ImageFormat.BMP).values.tolist() == [0, 100, 200, 255]


def test_bmp_16bit_rejected():
    # hand-built headers: 14-byte file header + BITMAPINFOHEADER with biBitCount=16
    file_header = b"BM" + struct.pack("<IHHI", 70, 0, 0, 54)
    dib = struct.pack("<IiiHHIIiiII", 40, 1, 1, 1, 16, 0, 16, 0, 0, 0, 0)
    with pytest.raises(UnsupportedBitDepth):
        decode_grayscale(file_header + dib + bytes(16), ImageFormat.BMP)


# ---------------------------------------------------------------- sniffing

def test_sniff_format():
    assert sniff_format(b"P5 rest") is ImageFormat.PGM
    assert sniff_format(b"BM rest") is ImageFormat.BMP
    assert sniff_format(b"\x89PNG\r\n\x1a\n rest") is ImageFormat.PNG
    with pytest.raises(MalformedFile):
        sniff_format(b"GIF89a")


def test_decode_auto_matches_explicit():
    data = b"P5\n1 2\n255\n" + bytes([9, 8])
    assert decode_auto(data).values.tolist() == [9, 8]


# ---------------------------------------------------------------- traversals

def test_boustrophedon_2x3():
    seq = boustrophedon(make_grid([[1, 2, 3], [4, 5, 6]]))
    assert seq.values.tolist() == [1, 2, 3, 6, 5, 4]
    assert seq.traversal is Traversal.BOUSTROPHEDON


def test_boustrophedon_single_row_identity():
    seq = boustrophedon(make_grid([[5, 6, 7, 8]]))
    assert seq.values.tolist() == [5, 6, 7, 8]


def test_boustrophedon_3x3():
    seq = boustrophedon(make_grid([[1, 2, 3], [4, 5, 6], [7, 8, 9]]))
    assert seq.values.tolist() == [1, 2, 3, 6, 5, 4, 7, 8, 9]


def test_row_major_examples():
    assert row_major(make_grid([[1, 2, 3], [4, 5, 6]])).values.tolist() == [1, 2, 3, 4, 5, 6]
    assert row_major(make_grid([[9]])).values.tolist() == [9]
    assert row_major(make_grid([[1], [2], [3]])).values.tolist() == [1, 2, 3]
    assert row_major(make_grid([[9]])).traversal is Traversal.ROW_MAJOR


def test_traversals_same_multiset():
    rng = np.random.default_rng(3)
    for _ in range(10):
        grid = random_grid(rng, int(rng.integers(1, 12)), int(rng.integers(1, 12)))
        a = np.sort(boustrophedon(grid).values)
        b = np.sort(row_major(grid).values)
        assert np.array_equal(a, b)


def test_traversals_agree_on_even_rows():
    rng = np.random.default_rng(4)
    grid = random_grid(rng, 7, 6)
    bst = boustrophedon(grid).values.reshape(6, 7)
    rmj = row_major(grid).values.reshape(6, 7)
    assert np.array_equal(bst[0::2], rmj[0::2])
    assert np.array_equal(bst[1::2], rmj[1::2, ::-1])


# ---------------------------------------------------------------- grid type

def test_grid_shape_validation():
    with pytest.raises(ValueError):
        PixelGrid(2, 2, np.zeros(3, dtype=np.uint8))
    with pytest.raises(ValueError):
        PixelGrid(0, 2, np.zeros(0, dtype=np.uint8))
    with pytest.raises(ValueError):
        PixelGrid(1, 1, np.array([300]))


def test_grid_values_read_only():
    grid = make_grid([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        grid.values[0] = 9
