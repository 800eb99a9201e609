"""Geometric total variation of an image over a lattice triangulation.

Every lattice triangle of a triangulation has area 1/2, so the total
variation of the piecewise-linear interpolant reduces to half the sum of
per-triangle gradient norms. The optimizer flips edges greedily, taking
energy-neutral flips at random.
"""

from __future__ import annotations

import logging
import math
import random
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .image_core import Image, NormConfig
from .triangulation import Triangulation, cross, is_strictly_convex, trivial_triangulation

log = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


def triangle_gradient(img: Image, p, q, r) -> np.ndarray:
    """Discrete gradient of ``img`` on triangle ``pqr`` as a ``(channels, 2)`` array.

    ``p``, ``q``, ``r`` are ``(x, y)`` lattice points of a unimodular triangle.
    Reversing the orientation negates the result.
    """
    (px, py), (qx, qy), (rx, ry) = p, q, r
    if cross(px, py, qx, qy, rx, ry) == 0:
        raise ValueError(f"degenerate triangle {p}, {q}, {r}")
    sp, sq, sr = img.at(px, py), img.at(qx, qy), img.at(rx, ry)
    # (x, y)^perp = (-y, x)
    gx = -(sp * (ry - qy) + sq * (py - ry) + sr * (qy - py))
    gy = sp * (rx - qx) + sq * (px - rx) + sr * (qx - px)
    return np.stack([gx, gy], axis=-1)


def triangle_energy(g, cfg: NormConfig = NormConfig()) -> float:
    n = math.sqrt(float(np.sum(np.square(g))))
    return n if cfg.p == 1.0 else n ** cfg.p


def gtv_energy(img: Image, t: Triangulation, cfg: NormConfig = NormConfig()) -> float:
    total = 0.0
    for p, q, r in t.faces():
        total += triangle_energy(triangle_gradient(img, t.point(p), t.point(q), t.point(r)), cfg)
    return 0.5 * total


class _LocalEnergy:
    """Fast per-triangle energies on vertex ids, without numpy overhead."""

    def __init__(self, img: Image, t: Triangulation, cfg: NormConfig):
        self.xs, self.ys = t.xs, t.ys
        flat = img.data.reshape(-1, img.channels)
        self.cols = [tuple(float(c) for c in row) for row in flat]
        self.p = cfg.p

    def __call__(self, i: int, j: int, k: int) -> float:
        xs, ys = self.xs, self.ys
        ax, ay = xs[k] - xs[j], ys[k] - ys[j]  # r - q
        bx, by = xs[i] - xs[k], ys[i] - ys[k]  # p - r
        cx, cy = xs[j] - xs[i], ys[j] - ys[i]  # q - p
        acc = 0.0
        for sp, sq, sr in zip(self.cols[i], self.cols[j], self.cols[k]):
            gx = -(sp * ay + sq * by + sr * cy)
            gy = sp * ax + sq * bx + sr * cx
            acc += gx * gx + gy * gy
        n = math.sqrt(acc)
        return n if self.p == 1.0 else n ** self.p


def check_arc(img: Image, t: Triangulation, a: int, cfg: NormConfig = NormConfig(), _energy=None) -> int:
    """Return 1 if flipping ``a`` lowers the energy, 0 on a tie, -1 otherwise.

    Only the arc of each edge whose tail index exceeds its head index is
    examined; the other orientation always yields -1.
    """
    c, _ = _check(t, a, _energy or _LocalEnergy(img, t, cfg))
    return c


def _check(t: Triangulation, a: int, energy) -> tuple[int, float]:
    if not t.is_interior(a):
        return -1, 0.0
    p0, p1, p2, p3 = t.quad(a)
    if p0 < p2:
        return -1, 0.0
    xs, ys = t.xs, t.ys
    if not is_strictly_convex([(xs[v], ys[v]) for v in (p0, p1, p2, p3)]):
        return -1, 0.0
    e_cur = energy(p0, p1, p2) + energy(p0, p2, p3)
    e_flip = energy(p0, p1, p3) + energy(p1, p2, p3)
    delta = e_flip - e_cur
    if abs(delta) <= TIE_TOLERANCE:
        return 0, 0.0
    return (1 if delta < 0 else -1), delta


@dataclass
class PassRecord:
    index: int
    energy: float
    decreasing_flips: int
    neutral_flips: int


@dataclass
class OptimizeResult:
    triangulation: Triangulation
    energy: float
    passes: list = field(default_factory=list)
    initial_energy: float = 0.0
    converged: bool = True


def optimize_gtv(
    img: Image,
    cfg: NormConfig = NormConfig(),
    seed: int = 0,
    max_passes: int = 100,
    triangulation: Optional[Triangulation] = None,
    on_pass: Optional[Callable[[PassRecord, Triangulation], None]] = None,
    on_flip: Optional[Callable[[int, float], None]] = None,
) -> OptimizeResult:
    """Greedy randomized edge-flip minimization of the GTV energy.

    Starts from the trivial triangulation unless one is given (it is then
    modified in place). Energy-neutral flips are taken on a fair coin toss.
    After each executed flip the arcs of the two faces around it, and their
    twins, are queued for the next pass. Stops after a pass without any
    decreasing flip, or after ``max_passes`` passes with a warning.

    ``on_pass(record, t)`` runs after every pass; ``on_flip(c, energy)``
    after every executed flip with the running energy.
    """
    t = triangulation if triangulation is not None else trivial_triangulation(img.width, img.height)
    energy_of = _LocalEnergy(img, t, cfg)
    rng = random.Random(seed)

    energy = 0.5 * sum(energy_of(*tri) for tri in t.faces())
    result = OptimizeResult(t, energy, initial_energy=energy)
    result.passes.append(PassRecord(0, energy, 0, 0))

    queue: deque = deque()
    pending: deque = deque(range(t.num_arcs))
    nxt = t.next
    for index in range(1, max_passes + 1):
        queue, pending = pending, queue
        n = 0
        neutral = 0
        while queue:
            a = queue.popleft()
            c, delta = _check(t, a, energy_of)
            if c > 0 or (c == 0 and rng.getrandbits(1)):
                if c > 0:
                    n += 1
                    energy += 0.5 * delta
                else:
                    neutral += 1
                b = a ^ 1
                around = (a, nxt[a], nxt[nxt[a]], b, nxt[b], nxt[nxt[b]])
                pending.extend(around)
                pending.extend(x ^ 1 for x in around[1:3] + around[4:6])
                t.flip(a)
                if on_flip is not None:
                    on_flip(c, energy)
        record = PassRecord(index, energy, n, neutral)
        result.passes.append(record)
        log.debug("pass %d: energy=%.9f decreasing=%d neutral=%d", index, energy, n, neutral)
        if on_pass is not None:
            on_pass(record, t)
        if n == 0:
            break
    else:
        result.converged = False
        warnings.warn(f"GTV optimization stopped after {max_passes} passes", RuntimeWarning, stacklevel=2)
    result.energy = energy
    return result
