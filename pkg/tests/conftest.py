import numpy as np
import pytest

from gtvpix.image_core import Image
from gtvpix.triangulation import from_point_triangles

STAIR_BLACK = {(0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)}

STAIR_TRIVIAL = [
    ((0, 1), (1, 1), (0, 0)), ((1, 1), (0, 0), (1, 0)), ((1, 1), (2, 1), (1, 0)),
    ((2, 1), (1, 0), (2, 0)), ((2, 1), (3, 1), (2, 0)), ((3, 1), (2, 0), (3, 0)),
    ((0, 2), (1, 2), (0, 1)), ((1, 2), (0, 1), (1, 1)), ((1, 2), (2, 2), (1, 1)),
    ((2, 2), (1, 1), (2, 1)), ((2, 2), (3, 2), (2, 1)), ((2, 1), (3, 1), (3, 2)),
]
STAIR_MIDDLE = [((0, 1), (1, 1), (0, 0)), ((1, 1), (2, 1), (0, 0)), ((0, 0), (1, 0), (2, 1))] + STAIR_TRIVIAL[3:]
STAIR_BEST = [
    ((0, 1), (1, 1), (0, 0)), ((1, 1), (3, 2), (0, 0)), ((0, 0), (3, 2), (2, 1)),
    ((2, 1), (1, 0), (2, 0)), ((2, 1), (3, 1), (2, 0)), ((3, 1), (2, 0), (3, 0)),
    ((0, 2), (1, 2), (0, 1)), ((1, 2), (0, 1), (1, 1)), ((1, 2), (2, 2), (1, 1)),
    ((1, 1), (2, 2), (3, 2)), ((0, 0), (2, 1), (1, 0)), ((2, 1), (3, 1), (3, 2)),
]
STAIR_ENERGIES = (
    0.5 * (2 + 3 * np.sqrt(2)),
    0.5 * (1 + np.sqrt(5) + 2 * np.sqrt(2)),
    0.5 * (1 + np.sqrt(13) + np.sqrt(2)),
)


def make_staircase() -> Image:
    data = np.ones((3, 4))
    for x, y in STAIR_BLACK:
        data[y, x] = 0.0
    return Image(data)


def pixel_art(size=32, seed=3) -> Image:
    """Blocky sprite: a few flat shapes in a small palette."""
    rng = np.random.default_rng(seed)
    palette = np.array([[0.1, 0.1, 0.3], [0.9, 0.8, 0.2], [0.8, 0.2, 0.2], [0.2, 0.7, 0.3], [1.0, 1.0, 1.0]])
    yy, xx = np.mgrid[0:size, 0:size]
    data = np.empty((size, size, 3))
    data[:] = palette[0]
    c = (size - 1) / 2
    data[(xx - c) ** 2 + (yy - c) ** 2 < (size / 3) ** 2] = palette[1]
    data[(abs(xx - c) + abs(yy - c * 0.8)) < size / 6] = palette[2]
    data[xx + 2 * yy < size * 0.6] = palette[4]
    for _ in range(3):
        x0, y0 = rng.integers(0, size - 4, 2)
        data[y0:y0 + 3, x0:x0 + 4] = palette[3]
    return Image(np.round(data * 255) / 255)


def slope_edge(width=13, height=10) -> Image:
    """Black where 3y - 2x <= 0; the ideal edge is 3y - 2x = 1/2."""
    yy, xx = np.mgrid[0:height, 0:width]
    return Image(np.where(3 * yy - 2 * xx <= 0, 0.0, 1.0))


@pytest.fixture
def staircase():
    return make_staircase()


@pytest.fixture
def staircase_meshes():
    return [from_point_triangles(4, 3, tris) for tris in (STAIR_TRIVIAL, STAIR_MIDDLE, STAIR_BEST)]


@pytest.fixture
def sprite():
    return pixel_art(16, seed=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        num, title = marker.args
        ok = call.excinfo is None
        prev = _criteria.get(num, (title, True))
        _criteria[num] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria, key=lambda n: (isinstance(n, str), n)):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}")
