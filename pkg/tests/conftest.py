import numpy as np
import pytest

from grayorder import PixelGrid, encode_pgm


def make_grid(rows) -> PixelGrid:
    return PixelGrid.from_array(np.asarray(rows))


def constant_grid(width: int, height: int, level: int) -> PixelGrid:
    return PixelGrid(width, height, np.full(width * height, level, dtype=np.uint8))


def checkerboard_grid(side: int = 16, low: int = 0, high: int = 255) -> PixelGrid:
    board = np.indices((side, side)).sum(axis=0) % 2
    return PixelGrid.from_array(np.where(board == 0, low, high))


def random_grid(rng: np.random.Generator, width: int, height: int) -> PixelGrid:
    return PixelGrid(width, height, rng.integers(0, 256, width * height, dtype=np.uint8))


def write_pgm(path, grid: PixelGrid):
    path.write_bytes(encode_pgm(grid))
    return path


@pytest.fixture
def checkerboard() -> PixelGrid:
    return checkerboard_grid()


@pytest.fixture
def constant128() -> PixelGrid:
    return constant_grid(16, 16, 128)
