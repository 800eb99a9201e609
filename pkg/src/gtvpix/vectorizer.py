"""Vector output from the contour mesh, plus per-triangle gradient renders."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .contours import ContourState, regularize_contours
from .gtv import OptimizeResult, optimize_gtv
from .image_core import Image, NormConfig, atomic_write_text, quantize
from .triangulation import BOUNDARY, Triangulation

Point = tuple[float, float]


@dataclass
class ContourCell:
    pixel: tuple[int, int]
    boundary: list[Point]
    color: np.ndarray


@dataclass
class Region:
    color: np.ndarray
    polygons: list[list[Point]]
    pixels: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class VectorDocument:
    regions: list[Region]
    width: int
    height: int


def signed_area(poly) -> float:
    s = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def build_contour_mesh(t: Triangulation, cs: ContourState, img: Image, include_border: bool = False) -> list[ContourCell]:
    """One counterclockwise cell per pixel, alternating crossing points and barycenters.

    Border pixels are skipped unless ``include_border`` is set; their cells
    are then closed through the pixel center itself.
    """
    cells = []
    for v in range(t.num_vertices):
        border = t.is_border_vertex(v)
        if border and not include_border:
            continue
        poly: list[Point] = [tuple(map(float, t.point(v)))] if border else []
        for a in t.out_arcs(v):
            poly.append(cs.crossing(t, a))
            f = t.face[a]
            if f != BOUNDARY:
                poly.append((float(cs.b[f, 0]), float(cs.b[f, 1])))
        x, y = t.point(v)
        cells.append(ContourCell((x, y), poly, img.at(x, y).copy()))
    return cells


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _segments(poly):
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if a != b:
            yield a, b


def _angle(u, v):
    """Signed turn from direction u to v, in (-pi, pi]."""
    return math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])


def _chain_loops(segments) -> list[list[Point]]:
    outgoing = defaultdict(list)
    for a, b in segments:
        outgoing[a].append(b)
    loops = []
    for start in sorted(outgoing):
        while outgoing[start]:
            loop = [start]
            prev, cur = start, outgoing[start].pop()
            while cur != start:
                loop.append(cur)
                options = outgoing[cur]
                if len(options) == 1:
                    nxt = options.pop()
                else:
                    # at pinch points keep the rightmost turn so loops stay simple
                    din = (cur[0] - prev[0], cur[1] - prev[1])
                    nxt = min(options, key=lambda q: _angle(din, (q[0] - cur[0], q[1] - cur[1])))
                    options.remove(nxt)
                prev, cur = cur, nxt
            loops.append(loop)
    return loops


def _colors_match(a, b, tolerance: float) -> bool:
    if tolerance <= 0:
        return tuple(quantize(a)) == tuple(quantize(b))
    return float(np.max(np.abs(a - b))) <= tolerance


def _merge(entries, width: int, height: int, tolerance: float) -> VectorDocument:
    """Merge ``(color, loops, pixels)`` entries that share a segment and a color."""
    owner: dict[tuple[Point, Point], int] = {}
    for i, (_, loops, _) in enumerate(entries):
        for loop in loops:
            for seg in _segments(loop):
                owner[seg] = i
    uf = _UnionFind(len(entries))
    for (a, b), i in owner.items():
        j = owner.get((b, a))
        if j is not None and j != i and _colors_match(entries[i][0], entries[j][0], tolerance):
            uf.union(i, j)

    groups = defaultdict(list)
    for i in range(len(entries)):
        groups[uf.find(i)].append(i)

    regions = []
    for root in sorted(groups):
        members = groups[root]
        segs = set()
        for i in members:
            for loop in entries[i][1]:
                for a, b in _segments(loop):
                    if (b, a) in segs:
                        segs.remove((b, a))
                    else:
                        segs.add((a, b))
        loops = [lp for lp in _chain_loops(segs) if len(lp) >= 3]
        loops.sort(key=lambda lp: (-signed_area(lp), lp[0]))
        pixels = sorted(px for i in members for px in entries[i][2])
        regions.append(Region(np.array(entries[root][0], dtype=float), loops, pixels))
    return VectorDocument(regions, width, height)


def merge_regions(cells: list[ContourCell], width: int = 0, height: int = 0, tolerance: float = 0.0) -> VectorDocument:
    """Merge cells that share a boundary segment and have the same color.

    Colors are compared after 8-bit quantization, or by maximum channel
    difference when ``tolerance`` is positive. A region takes the color of its
    first cell. Outer loops come out counterclockwise, holes clockwise.
    """
    return _merge([(c.color, [c.boundary], [c.pixel]) for c in cells], width, height, tolerance)


def merge_document(doc: VectorDocument, tolerance: float = 0.0) -> VectorDocument:
    """Run the merge again on the regions of ``doc``."""
    return _merge([(r.color, r.polygons, r.pixels) for r in doc.regions], doc.width, doc.height, tolerance)


def hex_color(color) -> str:
    q = quantize(color)
    if len(q) == 1:
        q = [q[0]] * 3
    return "#{:02X}{:02X}{:02X}".format(*q[:3])


def _path_data(polygons, scale: float) -> str:
    parts = []
    for poly in polygons:
        pts = [f"{_fmt((x + 0.5) * scale)} {_fmt((y + 0.5) * scale)}" for x, y in poly]
        parts.append("M " + " L ".join(pts) + " Z")
    return " ".join(parts)


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def svg_string(doc: VectorDocument, scale: float = 1.0) -> str:
    w, h = doc.width * scale, doc.height * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
    ]
    for region in doc.regions:
        out.append(
            f'<path d="{escape(_path_data(region.polygons, scale))}" fill="{hex_color(region.color)}" '
            'fill-rule="evenodd" stroke="none"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(doc: VectorDocument, scale: float, path) -> None:
    """Write ``doc`` as SVG 1.1; pixel centers sit at half-integer user units."""
    atomic_write_text(path, svg_string(doc, scale))


def contour_mesh_svg(t: Triangulation, cs: ContourState, img: Image, scale: float = 16.0) -> str:
    """Debug view: every cell painted with its pixel color and outlined."""
    cells = build_contour_mesh(t, cs, img)
    w, h = img.width * scale, img.height * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect width="{_fmt(w)}" height="{_fmt(h)}" fill="#FFFFFF"/>',
    ]
    for cell in cells:
        out.append(
            f'<path d="{_path_data([cell.boundary], scale)}" fill="{hex_color(cell.color)}" '
            'stroke="#808080" stroke-width="0.5"/>'
        )
    for p, q in t.edges():
        (x0, y0), (x1, y1) = t.point(p), t.point(q)
        out.append(
            f'<line x1="{_fmt((x0 + .5) * scale)}" y1="{_fmt((y0 + .5) * scale)}" '
            f'x2="{_fmt((x1 + .5) * scale)}" y2="{_fmt((y1 + .5) * scale)}" stroke="#FF0000" stroke-width="0.3"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def crisp_weights(lam: np.ndarray, steepness: float = 8.0) -> np.ndarray:
    """Contrast curve ``l^s / (l^s + (1-l)^s)`` with ``s = steepness / 2``, renormalized.

    The curve fixes 0, 1/2 and 1, so vertex colors are reproduced exactly.
    ``lam`` has the three barycentric weights along axis 0.
    """
    s = steepness / 2.0
    lam = np.clip(lam, 0.0, 1.0)
    num = lam ** s
    c = num / (num + (1.0 - lam) ** s)
    return c / c.sum(axis=0, keepdims=True)


def render_triangle_gradients(
    img: Image, t: Triangulation, zoom: int, mode: str = "linear", steepness: float = 8.0
) -> Image:
    """Paint every triangle with its linear (or crisped) color interpolation.

    The output covers the zoomed lattice domain of size
    ``(zoom*(w-1)+1) x (zoom*(h-1)+1)``.
    """
    if zoom < 1:
        raise ValueError("zoom must be >= 1")
    if mode not in ("linear", "crisp"):
        raise ValueError(f"unknown render mode {mode!r}")
    W, H = zoom * (img.width - 1) + 1, zoom * (img.height - 1) + 1
    out = np.zeros((H, W, img.channels))
    for p, q, r in t.faces():
        pts = np.array([t.point(p), t.point(q), t.point(r)], float) * zoom
        cols = np.array([img.at(*t.point(v)) for v in (p, q, r)])
        x0, y0 = pts.min(axis=0).astype(int)
        x1, y1 = pts.max(axis=0).astype(int)
        yy, xx = np.mgrid[y0:y1 + 1, x0:x1 + 1]
        (ax, ay), (bx, by), (cx, cy) = pts
        det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        l1 = ((xx - ax) * (cy - ay) - (yy - ay) * (cx - ax)) / det
        l2 = ((bx - ax) * (yy - ay) - (by - ay) * (xx - ax)) / det
        lam = np.stack([1.0 - l1 - l2, l1, l2])
        inside = np.all(lam >= -1e-9, axis=0)
        if mode == "crisp":
            lam = crisp_weights(lam, steepness)
        vals = np.tensordot(np.clip(lam, 0.0, 1.0), cols, axes=(0, 0))
        out[yy[inside], xx[inside]] = vals[inside]
    return Image(np.clip(out, 0.0, 1.0))


@dataclass
class VectorizeResult:
    document: VectorDocument
    optimization: OptimizeResult
    contours: ContourState
    cells: list[ContourCell]


def vectorize(
    img: Image,
    norm: NormConfig = NormConfig(),
    seed: int = 0,
    epsilon: float = 1e-3,
    max_passes: int = 100,
    max_iter: int = 100,
    tolerance: float = 0.0,
    include_border: bool = False,
) -> VectorizeResult:
    opt = optimize_gtv(img, norm, seed=seed, max_passes=max_passes)
    cs = regularize_contours(img, opt.triangulation, epsilon, max_iter)
    cells = build_contour_mesh(opt.triangulation, cs, img, include_border)
    doc = merge_regions(cells, img.width, img.height, tolerance)
    return VectorizeResult(doc, opt, cs, cells)
