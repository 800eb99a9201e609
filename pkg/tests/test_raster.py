import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtvpix.raster import (
    bezier_point,
    bresenham,
    flatten_bezier,
    line_intersection,
    rasterize_bezier,
    round_half_away,
    solve_cubic_controls,
)

coord = st.integers(-40, 40)


def connected(chain):
    return all(max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1 for a, b in zip(chain, chain[1:]))


def max_deviation(ctrl, pixels, samples=20001):
    ts = np.linspace(0, 1, samples)
    pts = np.array([bezier_point(ctrl, t) for t in ts])
    return max(float(np.min(np.hypot(pts[:, 0] - x, pts[:, 1] - y))) for x, y in pixels)


class TestRounding:
    @pytest.mark.parametrize("v,expected", [(0.5, 1), (-0.5, -1), (1.49, 1), (2.5, 3), (-2.5, -3), (0.0, 0)])
    def test_half_away(self, v, expected):
        assert round_half_away(v) == expected


class TestBresenham:
    def test_horizontal(self):
        assert bresenham(0, 0, 3, 0) == [(0, 0), (1, 0), (2, 0), (3, 0)]

    def test_single(self):
        assert bresenham(2, 2, 2, 2) == [(2, 2)]

    def test_known_octant(self):
        assert bresenham(0, 0, 5, 2) == [(0, 0), (1, 0), (2, 1), (3, 1), (4, 2), (5, 2)]

    @given(coord, coord, coord, coord)
    def test_digital_segment(self, x0, y0, x1, y1):
        pts = bresenham(x0, y0, x1, y1)
        assert pts[0] == (x0, y0) and pts[-1] == (x1, y1)
        assert len(pts) == max(abs(x1 - x0), abs(y1 - y0)) + 1
        assert connected(pts) or len(pts) == 1
        dx, dy = x1 - x0, y1 - y0
        major = max(abs(dx), abs(dy))
        for x, y in pts:
            # distance along the minor axis stays within half a pixel
            if major:
                if abs(dx) >= abs(dy):
                    assert abs(y - (y0 + dy * (x - x0) / dx)) <= 0.5 + 1e-12
                else:
                    assert abs(x - (x0 + dx * (y - y0) / dy)) <= 0.5 + 1e-12

    @given(coord, coord, coord, coord)
    def test_reverse_covers_same_count(self, x0, y0, x1, y1):
        assert len(bresenham(x0, y0, x1, y1)) == len(bresenham(x1, y1, x0, y0))


class TestBezier:
    def test_flatten_endpoints_and_flatness(self):
        ctrl = [(0, 0), (10, 20), (20, 0)]
        pts = flatten_bezier(ctrl)
        assert pts[0] == (0.0, 0.0, 0.0) and pts[-1] == (1.0, 20.0, 0.0)
        ts = [p[0] for p in pts]
        assert ts == sorted(ts)

    def test_quarter_circle_half_pixel(self):
        # quadratic approximating a quarter circle of radius 16
        ctrl = [(16, 0), (16, 16), (0, 16)]
        pixels = rasterize_bezier(ctrl)
        assert connected(pixels)
        assert max_deviation(ctrl, pixels) <= 0.5

    def test_straight_cubic_is_bresenham_like(self):
        ctrl = [(0, 0), (3, 2), (6, 4), (9, 6)]
        pixels = rasterize_bezier(ctrl)
        assert pixels[0] == (0, 0) and pixels[-1] == (9, 6)
        assert max_deviation(ctrl, pixels) <= 0.5

    def test_bad_order(self):
        with pytest.raises(ValueError):
            rasterize_bezier([(0, 0), (1, 1)])

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(coord, coord), min_size=3, max_size=4))
    def test_chain_properties(self, ctrl):
        pixels = rasterize_bezier(ctrl)
        assert pixels[0] == ctrl[0] and pixels[-1] == ctrl[-1]
        assert len(pixels) == 1 or connected(pixels)
        # bridged seams may sit on a pixel corner
        assert max_deviation(ctrl, pixels, 4001) <= math.sqrt(0.5) + 1e-9


class TestControls:
    def test_intersection(self):
        assert line_intersection((0, 0), (1, 0), (2, -1), (0, 1)) == pytest.approx((2, 0))
        assert line_intersection((0, 0), (1, 0), (0, 1), (2, 0)) is None

    def test_cubic_passes_through_target(self):
        t1 = (1 / math.sqrt(2), 1 / math.sqrt(2))
        t2 = (1 / math.sqrt(2), -1 / math.sqrt(2))
        ctrl = solve_cubic_controls((0, 0), (10, 0), t1, t2, (5, 3))
        assert len(ctrl) == 4
        assert bezier_point(ctrl, 0.5) == pytest.approx((5, 3))
        # leaves along t1 and arrives along t2
        d0 = np.subtract(ctrl[1], ctrl[0])
        d1 = np.subtract(ctrl[3], ctrl[2])
        assert (d0[0] * t1[1] - d0[1] * t1[0]) == pytest.approx(0, abs=1e-12) and np.dot(d0, t1) > 0
        assert (d1[0] * t2[1] - d1[1] * t2[0]) == pytest.approx(0, abs=1e-12) and np.dot(d1, t2) > 0

    def test_parallel_falls_back_to_quadratic(self):
        ctrl = solve_cubic_controls((0, 0), (10, 0), (1, 0), (1, 0), (5, 2))
        assert len(ctrl) == 3
        assert bezier_point(ctrl, 0.5) == pytest.approx((5, 2))

    def test_negative_length_clamped(self):
        ctrl = solve_cubic_controls((0, 0), (10, 0), (0, 1), (0, -1), (5, -3))
        assert ctrl[1] == (0.0, 0.0) or ctrl[2] == (10.0, 0.0)
