"""Exact Euclidean nearest-site maps on binary masks.

Two separable passes: nearest site within each row, then a lower envelope
of parabolas down each column. All comparisons are on integers, and ties go
to the site with the smallest ``(row, column)``.
"""

from __future__ import annotations

import numpy as np


def _row_nearest(mask: np.ndarray) -> np.ndarray:
    """Column of the nearest marked pixel in the same row (-1 when the row is empty)."""
    h, w = mask.shape
    cols = np.arange(w)
    left = np.where(mask, cols, -1)
    left = np.maximum.accumulate(left, axis=1)
    right = np.where(mask, cols, w + w)
    right = np.minimum.accumulate(right[:, ::-1], axis=1)[:, ::-1]
    has_left = left >= 0
    has_right = right < w
    use_left = has_left & (~has_right | ((cols - left) <= (right - cols)))
    out = np.where(use_left, left, np.where(has_right, right, -1))
    return out


def voronoi_map(mask) -> tuple[np.ndarray, np.ndarray]:
    """Row and column arrays of the nearest marked pixel for every pixel.

    Raises ValueError when ``mask`` has no marked pixel.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("voronoi map of an empty mask")
    h, w = mask.shape
    near_col = _row_nearest(mask)
    g2 = np.where(near_col >= 0, (near_col - np.arange(w)) ** 2, -1).astype(np.int64)

    out_row = np.empty((h, w), dtype=np.int64)
    g2_cols = g2.T.tolist()
    for j in range(w):
        g = g2_cols[j]
        # parabolas k -> (i - k)^2 + g[k]; stack of (site row, first row it wins)
        sites: list[int] = []
        starts: list[int] = []
        for k in range(h):
            gk = g[k]
            if gk < 0:
                continue
            fk = gk + k * k
            while sites:
                v = sites[-1]
                # k beats v at row i iff 2 i (k - v) > fk - fv
                num = fk - (g[v] + v * v)
                den = 2 * (k - v)
                first = num // den + 1
                if first <= starts[-1]:
                    sites.pop()
                    starts.pop()
                else:
                    break
            if not sites:
                sites.append(k)
                starts.append(0)
            elif first < h:
                sites.append(k)
                starts.append(first)
        col = np.empty(h, dtype=np.int64)
        for idx, k in enumerate(sites):
            stop = starts[idx + 1] if idx + 1 < len(sites) else h
            col[starts[idx]:stop] = k
        out_row[:, j] = col
    out_col = near_col[out_row, np.arange(w)[None, :]]
    return out_row, out_col

