"""Raster zoom with smooth discontinuities.

Source pixel ``(x, y)`` lands on zoomed pixel ``(z*x, z*y)``. Pixels known to
carry a source color form the similarity set ``S``; digitized Bezier curves
along reconstructed contours form the discontinuity set ``D``. All other
pixels blend the colors of their nearest ``S`` and ``D`` pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .contours import ContourState, regularize_contours
from .gtv import OptimizeResult, optimize_gtv
from .image_core import Image, NormConfig
from .raster import bresenham, line_intersection, rasterize_bezier, round_half_away, solve_cubic_controls
from .triangulation import BOUNDARY, Triangulation
from .voronoi import voronoi_map


class FaceClassError(RuntimeError):
    """A face with exactly one dissimilar arc; impossible for a true norm."""


@dataclass(frozen=True)
class ZoomConfig:
    z: int = 4
    beta: float = 0.75

    def __post_init__(self):
        if int(self.z) != self.z or self.z < 1:
            raise ValueError(f"zoom factor must be an integer >= 1, got {self.z}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")


class ZoomBuffers:
    def __init__(self, width: int, height: int, channels: int, z: int):
        self.z = z
        self.width = z * (width - 1) + 1
        self.height = z * (height - 1) + 1
        self.color = np.zeros((self.height, self.width, channels))
        self.S = np.zeros((self.height, self.width), dtype=bool)
        self.D = np.zeros((self.height, self.width), dtype=bool)
        self.vor_s: Optional[tuple[np.ndarray, np.ndarray]] = None
        self.vor_d: Optional[tuple[np.ndarray, np.ndarray]] = None

    def inside(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height


def iota(point, z: int) -> tuple[int, int]:
    """Zoomed pixel of a real source point, rounding half away from zero."""
    return round_half_away(z * point[0]), round_half_away(z * point[1])


def bilinear(data: np.ndarray, x: float, y: float) -> np.ndarray:
    h, w = data.shape[:2]
    x = min(max(x, 0.0), w - 1.0)
    y = min(max(y, 0.0), h - 1.0)
    x0, y0 = min(int(x), w - 2), min(int(y), h - 2)
    fx, fy = x - x0, y - y0
    top = (1 - fx) * data[y0, x0] + fx * data[y0, x0 + 1]
    bot = (1 - fx) * data[y0 + 1, x0] + fx * data[y0 + 1, x0 + 1]
    return (1 - fy) * top + fy * bot


def arc_tangent(t: Triangulation, cs: ContourState, a: int) -> tuple[float, float]:
    """Unit vector from the right barycenter to the left one; zero if undefined."""
    if not t.is_interior(a):
        return (0.0, 0.0)
    bl, br = cs.b[t.face[a]], cs.b[t.face[a ^ 1]]
    dx, dy = float(bl[0] - br[0]), float(bl[1] - br[1])
    n = math.hypot(dx, dy)
    if n < 1e-12:
        return (0.0, 0.0)
    return (dx / n, dy / n)


def build_similarity_set(img: Image, t: Triangulation, cs: ContourState, cfg: ZoomConfig, buf: ZoomBuffers):
    z = cfg.z
    for e in range(0, t.num_arcs, 2):
        if cs.w[e] != 0.0:
            continue
        p, q = t.tail(e), t.head[e]
        color = img.at(*t.point(p))
        (px, py), (qx, qy) = t.point(p), t.point(q)
        for x, y in bresenham(z * px, z * py, z * qx, z * qy):
            buf.S[y, x] = True
            buf.color[y, x] = color
    # lattice pixels last: they are ground truth
    buf.S[::z, ::z] = True
    buf.color[::z, ::z] = img.data


def face_class(t: Triangulation, cs: ContourState, f: int) -> list[int]:
    """Arcs of face ``f`` with non-zero dissimilarity; never exactly one."""
    arcs = [a for a in t.face_arcs(f) if cs.w[a] != 0.0]
    if len(arcs) == 1:
        raise FaceClassError(f"face {f} has exactly one dissimilar arc")
    return arcs


def discontinuity_curves(t: Triangulation, cs: ContourState, z: int):
    """Yield control polygons (zoomed coordinates) and single points per face."""
    for f in range(t.num_faces):
        arcs = face_class(t, cs, f)
        bf = (float(cs.b[f, 0]), float(cs.b[f, 1]))
        if not arcs:
            yield [iota(bf, z)]
        elif len(arcs) == 2:
            a1, a2 = arcs
            x1, x2 = cs.crossing(t, a1), cs.crossing(t, a2)
            t1, t2 = arc_tangent(t, cs, a1), arc_tangent(t, cs, a2)
            inter = line_intersection(x1, t1, x2, t2)
            m = bf if inter is None else (0.5 * (bf[0] + inter[0]), 0.5 * (bf[1] + inter[1]))
            # the curve enters through a1 along t1 and leaves through a2 against t2
            yield solve_cubic_controls(iota(x1, z), iota(x2, z), t1, (-t2[0], -t2[1]), iota(m, z))
        else:
            p2 = iota(bf, z)
            for a in arcs:
                p0 = iota(cs.crossing(t, a), z)
                tx, ty = arc_tangent(t, cs, a)
                lam = max(0.0, 0.5 * ((p2[0] - p0[0]) * tx + (p2[1] - p0[1]) * ty))
                yield [p0, (p0[0] + lam * tx, p0[1] + lam * ty), p2]


def build_discontinuity_set(img: Image, t: Triangulation, cs: ContourState, cfg: ZoomConfig, buf: ZoomBuffers):
    z = cfg.z
    for ctrl in discontinuity_curves(t, cs, z):
        pixels = ctrl if len(ctrl) == 1 else rasterize_bezier(ctrl)
        for x, y in pixels:
            if not buf.inside(x, y):
                continue
            buf.D[y, x] = True
            if not buf.S[y, x]:
                buf.color[y, x] = bilinear(img.data, x / z, y / z)


def compute_voronoi(buf: ZoomBuffers):
    buf.vor_s = voronoi_map(buf.S)
    buf.vor_d = voronoi_map(buf.D) if buf.D.any() else buf.vor_s


def blend(s_q, s_qd, d, dd, beta):
    """Two-branch blend of the nearest S color ``s_q`` and D color ``s_qd``.

    ``d`` and ``dd`` are the distances to those pixels. Both branches equal
    ``beta*s_q + (1-beta)*s_qd`` when ``d == dd``.
    """
    mix = beta * s_q + (1.0 - beta) * s_qd
    total = d + dd
    near_d = dd <= d
    k = np.where(near_d, 2.0 * dd / total, 2.0 * d / total)
    base = np.where(near_d, s_qd, s_q)
    return (1.0 - k) * base + k * mix


def interpolate_fill(buf: ZoomBuffers, cfg: ZoomConfig):
    if buf.vor_s is None:
        compute_voronoi(buf)
    free = ~buf.S & ~buf.D
    if not free.any():
        return
    rows, cols = np.nonzero(free)
    qr, qc = buf.vor_s[0][rows, cols], buf.vor_s[1][rows, cols]
    dr, dc = buf.vor_d[0][rows, cols], buf.vor_d[1][rows, cols]
    d = np.hypot(qr - rows, qc - cols)[:, None]
    dd = np.hypot(dr - rows, dc - cols)[:, None]
    buf.color[rows, cols] = blend(buf.color[qr, qc], buf.color[dr, dc], d, dd, cfg.beta)


def antialias(buf: ZoomBuffers):
    """Single Jacobi pass of 3x3 weighted means over D pixels outside S."""
    target = buf.D & ~buf.S
    if not target.any():
        return
    weight = np.where(buf.S, 4.0, np.where(buf.D, 0.25, 1.0))
    wc = buf.color * weight[:, :, None]
    pw = np.pad(weight, 1)
    pc = np.pad(wc, ((1, 1), (1, 1), (0, 0)))
    h, w = weight.shape
    wsum = sum(pw[dy:dy + h, dx:dx + w] for dy in range(3) for dx in range(3))
    csum = sum(pc[dy:dy + h, dx:dx + w] for dy in range(3) for dx in range(3))
    buf.color[target] = csum[target] / wsum[target][:, None]


@dataclass
class ZoomResult:
    image: Image
    buffers: ZoomBuffers
    optimization: OptimizeResult
    contours: ContourState


def zoom_pipeline(
    img: Image,
    cfg: ZoomConfig = ZoomConfig(),
    seed: int = 0,
    epsilon: float = 1e-3,
    norm: NormConfig = NormConfig(),
    max_passes: int = 100,
    max_iter: int = 100,
) -> ZoomResult:
    opt = optimize_gtv(img, norm, seed=seed, max_passes=max_passes)
    t = opt.triangulation
    cs = regularize_contours(img, t, epsilon, max_iter)
    buf = ZoomBuffers(img.width, img.height, img.channels, cfg.z)
    build_similarity_set(img, t, cs, cfg, buf)
    build_discontinuity_set(img, t, cs, cfg, buf)
    compute_voronoi(buf)
    interpolate_fill(buf, cfg)
    antialias(buf)
    out = Image(np.clip(buf.color, 0.0, 1.0))
    return ZoomResult(out, buf, opt, cs)


def zoom_image(img: Image, cfg: ZoomConfig = ZoomConfig(), seed: int = 0, epsilon: float = 1e-3, **kw) -> Image:
    return zoom_pipeline(img, cfg, seed, epsilon, **kw).image
