"""Digital straight segments and digitized Bezier curves."""

from __future__ import annotations

import math

FLATNESS = 0.25
_MAX_DEPTH = 24


def round_half_away(v: float) -> int:
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


def bresenham(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """8-connected pixels from ``(x0, y0)`` to ``(x1, y1)``, both included."""
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    pts = []
    while True:
        pts.append((x0, y0))
        if x0 == x1 and y0 == y1:
            return pts
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def _lerp(a, b, t=0.5):
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def _flat(ctrl) -> bool:
    """Inner control points within FLATNESS of the chord segment (not its line)."""
    (x0, y0), (x1, y1) = ctrl[0], ctrl[-1]
    dx, dy = x1 - x0, y1 - y0
    len2 = dx * dx + dy * dy
    for px, py in ctrl[1:-1]:
        u = 0.0 if len2 == 0.0 else min(1.0, max(0.0, ((px - x0) * dx + (py - y0) * dy) / len2))
        if math.hypot(px - x0 - u * dx, py - y0 - u * dy) > FLATNESS:
            return False
    return True


def _split(ctrl):
    levels = [list(ctrl)]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        levels.append([_lerp(prev[i], prev[i + 1]) for i in range(len(prev) - 1)])
    left = [lvl[0] for lvl in levels]
    right = [lvl[-1] for lvl in reversed(levels)]
    return left, right


def flatten_bezier(ctrl) -> list[tuple[float, float, float]]:
    """Points ``(t, x, y)`` along the curve, split by de Casteljau halving until flat."""
    c0 = [tuple(map(float, p)) for p in ctrl]
    out = [(0.0, *c0[0])]

    def rec(c, t0, t1, depth):
        if depth >= _MAX_DEPTH or _flat(c):
            out.append((t1, *c[-1]))
            return
        left, right = _split(c)
        tm = 0.5 * (t0 + t1)
        rec(left, t0, tm, depth + 1)
        rec(right, tm, t1, depth + 1)

    rec(c0, 0.0, 1.0, 0)
    return out


def _derivative(ctrl):
    n = len(ctrl) - 1
    return [(n * (b[0] - a[0]), n * (b[1] - a[1])) for a, b in zip(ctrl, ctrl[1:])]


def _span_pixels(ctrl, dctrl, a, b) -> list[tuple[int, int]]:
    """Pixels of the curve between flattening points ``a`` and ``b``.

    One pixel per integer step of the span's major axis; the minor
    coordinate comes from the exact curve, located by Newton steps.
    """
    (t0, x0, y0), (t1, x1, y1) = a, b
    axis = 0 if abs(x1 - x0) >= abs(y1 - y0) else 1
    u0, u1 = (x0, x1) if axis == 0 else (y0, y1)
    if u0 == u1:
        return [(round_half_away(x0), round_half_away(y0))]
    lo, hi = sorted((u0, u1))
    first, last = round_half_away(u0), round_half_away(u1)
    step = 1 if last >= first else -1
    pts = []
    for m in range(first, last + step, step):
        target = min(max(m, lo), hi)
        t = t0 + (target - u0) / (u1 - u0) * (t1 - t0)
        for _ in range(4):
            f = bezier_point(ctrl, t)[axis] - target
            df = bezier_point(dctrl, t)[axis]
            if df == 0.0:
                break
            t = min(max(t - f / df, t0), t1)
        px, py = bezier_point(ctrl, t)
        pts.append((m, round_half_away(py)) if axis == 0 else (round_half_away(px), m))
    return pts


def rasterize_bezier(ctrl) -> list[tuple[int, int]]:
    """Digitize a quadratic or cubic Bezier into an 8-connected pixel chain.

    The curve is split by de Casteljau halving to 0.25 px flatness, each flat
    span is digitized along its major axis, and seams are bridged with
    Bresenham so the chain stays connected.
    """
    if len(ctrl) not in (3, 4):
        raise ValueError("expected 3 or 4 control points")
    ctrl = [tuple(map(float, p)) for p in ctrl]
    dctrl = _derivative(ctrl)
    poly = flatten_bezier(ctrl)
    start = (round_half_away(ctrl[0][0]), round_half_away(ctrl[0][1]))
    end = (round_half_away(ctrl[-1][0]), round_half_away(ctrl[-1][1]))
    chain: list[tuple[int, int]] = [start]
    for a, b in zip(poly, poly[1:]):
        for p in _span_pixels(ctrl, dctrl, a, b) + ([end] if b is poly[-1] else []):
            last = chain[-1]
            if p == last:
                continue
            if max(abs(p[0] - last[0]), abs(p[1] - last[1])) > 1:
                chain.extend(bresenham(*last, *p)[1:-1])
            chain.append(p)
    return chain


def bezier_point(ctrl, t: float) -> tuple[float, float]:
    pts = [tuple(map(float, p)) for p in ctrl]
    while len(pts) > 1:
        pts = [_lerp(pts[i], pts[i + 1], t) for i in range(len(pts) - 1)]
    return pts[0]


def line_intersection(p, u, q, v):
    """Intersection of lines ``p + s*u`` and ``q + r*v``; None if parallel."""
    det = u[0] * (-v[1]) - u[1] * (-v[0])
    if abs(det) < 1e-12:
        return None
    rx, ry = q[0] - p[0], q[1] - p[1]
    s = (rx * (-v[1]) - ry * (-v[0])) / det
    return (p[0] + s * u[0], p[1] + s * u[1])


def solve_cubic_controls(p0, p3, t1, t2, m):
    """Inner controls of a cubic from ``p0`` to ``p3`` through ``m`` at parameter 1/2.

    The curve leaves ``p0`` along ``t1`` and arrives at ``p3`` along ``t2``:
    ``P1 = p0 + l1*t1`` and ``P2 = p3 - l2*t2``. Negative lengths are clamped
    to zero. When ``t1`` and ``t2`` are parallel (or zero) the system is
    singular and a quadratic through ``m`` is returned instead, so the result
    holds either 4 or 3 control points.
    """
    p0 = tuple(map(float, p0))
    p3 = tuple(map(float, p3))
    mid = ((p0[0] + p3[0]) / 2, (p0[1] + p3[1]) / 2)
    # (3/8) (l1 t1 - l2 t2) = m - mid
    rx, ry = (m[0] - mid[0]) * 8 / 3, (m[1] - mid[1]) * 8 / 3
    ax, ay = t1
    bx, by = -t2[0], -t2[1]
    det = ax * by - ay * bx
    if abs(det) < 1e-9:
        c = (2 * m[0] - mid[0], 2 * m[1] - mid[1])
        return [p0, c, p3]
    l1 = max(0.0, (rx * by - ry * bx) / det)
    l2 = max(0.0, (ax * ry - ay * rx) / det)
    return [p0, (p0[0] + l1 * ax, p0[1] + l1 * ay), (p3[0] - l2 * t2[0], p3[1] - l2 * t2[1]), p3]
