"""Contour points on arcs and barycenters on faces, aligned with discontinuities.

For an arc ``a = (p, q)`` the contour crosses it at ``t_a * p + (1 - t_a) * q``.
Twins always satisfy ``t_twin = 1 - t_a``. Barycenters are pulled toward the
dissimilarity-weighted mean of the crossing points of their face, and
crossing points toward the line joining the two barycenters around them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .image_core import Image
from .triangulation import Triangulation

log = logging.getLogger(__name__)

AREA_FLOOR = 1e-9


@dataclass
class ContourState:
    t: np.ndarray  # per arc
    b: np.ndarray  # per face, (num_faces, 2)
    w: np.ndarray  # per arc
    iterations: int = 0
    converged: bool = True
    deltas: list = field(default_factory=list)

    def crossing(self, tri: Triangulation, a: int) -> tuple[float, float]:
        """Crossing point of arc ``a``; bitwise identical for ``a`` and its twin."""
        c = a & ~1
        s = self.t[c]
        p, q = tri.tail(c), tri.head[c]
        return (s * tri.xs[p] + (1.0 - s) * tri.xs[q], s * tri.ys[p] + (1.0 - s) * tri.ys[q])


def is_updateable(t: Triangulation, a: int) -> bool:
    return t.is_interior(a)


def intersection_parameter(p, q, y, z, current: float = 0.5) -> float:
    """Parameter ``t`` placing ``t*p + (1-t)*q`` on the line through ``y`` and ``z``.

    Clamped to [0, 1]; returns ``current`` when the line is parallel to ``pq``.
    """
    dx, dy = p[0] - q[0], p[1] - q[1]
    lx, ly = z[0] - y[0], z[1] - y[1]
    # q + t (p - q) = y + s (z - y)
    det = dx * (-ly) - dy * (-lx)
    if abs(det) < 1e-12:
        return current
    rx, ry = y[0] - q[0], y[1] - q[1]
    t = (rx * (-ly) - ry * (-lx)) / det
    return min(1.0, max(0.0, t))


def _shoelace(pts) -> float:
    s = 0.0
    for i in range(len(pts)):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % len(pts)]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def arc_area(t: Triangulation, cs: ContourState, a: int) -> float:
    """Area of the quad (tail, right barycenter, crossing point, left barycenter)."""
    p = t.point(t.tail(a))
    quad = [p, tuple(cs.b[t.face[a ^ 1]]), cs.crossing(t, a), tuple(cs.b[t.face[a]])]
    return max(abs(_shoelace(quad)), AREA_FLOOR)


def dissimilarity_weights(img: Image, t: Triangulation) -> np.ndarray:
    flat = img.data.reshape(-1, img.channels)
    heads = np.asarray(t.head)
    tails = heads[np.arange(len(heads)) ^ 1]
    return np.sqrt(np.sum((flat[heads] - flat[tails]) ** 2, axis=1))


def initial_state(img: Image, t: Triangulation) -> ContourState:
    xs, ys = np.asarray(t.xs, float), np.asarray(t.ys, float)
    tri = np.asarray(t.faces())
    b = np.stack([xs[tri].mean(axis=1), ys[tri].mean(axis=1)], axis=1)
    cs = ContourState(t=np.full(t.num_arcs, 0.5), b=b, w=dissimilarity_weights(img, t))
    for a in range(0, t.num_arcs, 2):
        if is_updateable(t, a):
            s = _intersect(t, cs, a, 0.5)
            cs.t[a], cs.t[a + 1] = s, 1.0 - s
    return cs


def _intersect(t: Triangulation, cs: ContourState, a: int, current: float) -> float:
    return intersection_parameter(
        t.point(t.tail(a)), t.point(t.head[a]), cs.b[t.face[a]], cs.b[t.face[a ^ 1]], current
    )


def regularize_contours(
    img: Image, t: Triangulation, epsilon: float = 1e-3, max_iter: int = 100
) -> ContourState:
    """Relax barycenters and crossing parameters until they stop moving.

    Stops once no crossing parameter moves by ``epsilon`` or more in one
    iteration; otherwise returns after ``max_iter`` iterations with
    ``converged=False``. Faces whose arcs all have zero weight keep their
    barycenter.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    cs = initial_state(img, t)
    face_arcs = [t.face_arcs(f) for f in range(t.num_faces)]
    interior = [a for a in range(0, t.num_arcs, 2) if is_updateable(t, a)]
    cs.converged = False

    for it in range(1, max_iter + 1):
        prev = cs.t.copy()
        # barycenters
        new_b = cs.b.copy()
        for f, arcs in enumerate(face_arcs):
            ws = [cs.w[a] for a in arcs]
            total = sum(ws)
            if total == 0.0:
                continue
            mx = my = 0.0
            for wa, a in zip(ws, arcs):
                x, y = cs.crossing(t, a)
                mx += wa * x
                my += wa * y
            new_b[f, 0] = 0.5 * (cs.b[f, 0] + mx / total)
            new_b[f, 1] = 0.5 * (cs.b[f, 1] + my / total)
        cs.b = new_b
        # contour points; a twin's intersection is the complement, so one pass per edge
        for a in interior:
            s = 0.5 * (cs.t[a] + _intersect(t, cs, a, cs.t[a]))
            cs.t[a], cs.t[a + 1] = s, 1.0 - s
        # area-weighted averaging along each edge, one arc per edge (tail < head).
        # Each side is weighted by the area on the opposite end of the edge;
        # the same-side pairing pushes crossings onto the vertices.
        for e in interior:
            a = e if t.tail(e) < t.head[e] else e + 1
            alpha = 0.5 * (1.0 + 1.0 / (6.0 * arc_area(t, cs, a ^ 1)))
            alpha_t = 0.5 * (1.0 + 1.0 / (6.0 * arc_area(t, cs, a)))
            s = 0.5 * (alpha * cs.t[a] + 1.0 - alpha_t * cs.t[a ^ 1])
            s = min(1.0, max(0.0, s))
            cs.t[e] = s if a == e else 1.0 - s
            cs.t[e + 1] = 1.0 - cs.t[e]
        delta = float(np.max(np.abs(cs.t - prev))) if len(prev) else 0.0
        cs.deltas.append(delta)
        cs.iterations = it
        if delta < epsilon:
            cs.converged = True
            break
    else:
        log.warning("contour regularization did not converge in %d iterations", max_iter)
    return cs
