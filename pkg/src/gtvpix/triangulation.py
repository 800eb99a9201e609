"""Half-edge triangulations of the lattice points of a rectangle.

Vertices are lattice points ``(x, y)`` with index ``y * width + x``. Every
undirected edge owns two arcs ``2e`` and ``2e + 1``, so ``twin(a) == a ^ 1``.
Faces are positively oriented in ``(x, y)`` coordinates and the face of an
arc is the one on its left. Arcs along the rectangle border have the
``BOUNDARY`` marker as face and are linked around the outer loop, so that
rotating around a vertex works the same everywhere.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .image_core import DimensionError

BOUNDARY = -1


class FlipError(ValueError):
    """Raised when a flip is requested on a non-flippable arc."""


def cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def is_strictly_convex(quad: Sequence[Sequence[float]]) -> bool:
    """True iff the four consecutive turns of ``quad`` share one strict sign."""
    signs = []
    for i in range(4):
        (ax, ay), (bx, by), (cx, cy) = quad[i], quad[(i + 1) % 4], quad[(i + 2) % 4]
        c = cross(ax, ay, bx, by, cx, cy)
        if c == 0:
            return False
        signs.append(c > 0)
    return all(signs) or not any(signs)


class Triangulation:
    def __init__(self, width: int, height: int, triangles: Iterable[Sequence[int]]):
        """Build the half-edge structure from positively oriented vertex triples."""
        if width < 2 or height < 2:
            raise DimensionError(f"triangulation needs at least 2x2 points, got {width}x{height}")
        self.width = width
        self.height = height
        n = width * height
        self.xs = [v % width for v in range(n)]
        self.ys = [v // width for v in range(n)]

        self.head: list[int] = []
        self.face: list[int] = []
        self.next: list[int] = []
        self.face_arc: list[int] = []
        edge_of: dict[tuple[int, int], int] = {}

        def arc(u, v):
            key = (u, v) if u < v else (v, u)
            e = edge_of.get(key)
            if e is None:
                e = len(self.head) // 2
                edge_of[key] = e
                self.head += [key[1], key[0]]
                self.face += [BOUNDARY, BOUNDARY]
                self.next += [-1, -1]
            return 2 * e if u == key[0] else 2 * e + 1

        triangles = [tuple(tri) for tri in triangles]
        if len(triangles) != 2 * (width - 1) * (height - 1):
            raise ValueError(f"expected {2 * (width - 1) * (height - 1)} triangles, got {len(triangles)}")
        for f, (p, q, r) in enumerate(triangles):
            if not all(0 <= v < n for v in (p, q, r)):
                raise ValueError(f"triangle {(p, q, r)} has a vertex outside the grid")
            if cross(self.xs[p], self.ys[p], self.xs[q], self.ys[q], self.xs[r], self.ys[r]) != 1:
                raise ValueError(f"triangle {(p, q, r)} is not a positively oriented unimodular triangle")
            arcs = (arc(p, q), arc(q, r), arc(r, p))
            for i, a in enumerate(arcs):
                if self.face[a] != BOUNDARY:
                    raise ValueError(f"arc {self.tail(a)}->{self.head[a]} used by two faces")
                self.face[a] = f
                self.next[a] = arcs[(i + 1) % 3]
            self.face_arc.append(arcs[0])

        # outer loop: a border arc u->v continues with the border arc leaving v
        border_from = {}
        for a in range(len(self.head)):
            if self.face[a] == BOUNDARY:
                border_from[self.tail(a)] = a
        if len(border_from) != 2 * (width + height - 2) or len(self.head) != 2 * (n - 1 + len(triangles)):
            raise ValueError("triangles do not tile the rectangle")
        self.border_prev = {}
        for a in border_from.values():
            b = border_from[self.head[a]]
            self.next[a] = b
            self.border_prev[b] = a

        self.vertex_arc = [-1] * n
        for a in range(len(self.head)):
            t = self.tail(a)
            if self.vertex_arc[t] < 0 or self.face[a] == BOUNDARY:
                self.vertex_arc[t] = a

    # -- basic queries ---------------------------------------------------
    @property
    def num_arcs(self) -> int:
        return len(self.head)

    @property
    def num_edges(self) -> int:
        return len(self.head) // 2

    @property
    def num_faces(self) -> int:
        return len(self.face_arc)

    @property
    def num_vertices(self) -> int:
        return self.width * self.height

    @staticmethod
    def twin(a: int) -> int:
        return a ^ 1

    def tail(self, a: int) -> int:
        return self.head[a ^ 1]

    def prev(self, a: int) -> int:
        if self.face[a] != BOUNDARY:
            return self.next[self.next[a]]
        return self.border_prev[a]

    def point(self, v: int) -> tuple[int, int]:
        return self.xs[v], self.ys[v]

    def vertex_id(self, x: int, y: int) -> int:
        return y * self.width + x

    def left_face(self, a: int) -> int:
        return self.face[a]

    def right_face(self, a: int) -> int:
        return self.face[a ^ 1]

    def is_interior(self, a: int) -> bool:
        return self.face[a] != BOUNDARY and self.face[a ^ 1] != BOUNDARY

    is_flippable = is_interior

    def find_arc(self, u: int, v: int) -> int:
        """Arc from ``u`` to ``v``; raises KeyError when the edge does not exist."""
        for a in self.out_arcs(u):
            if self.head[a] == v:
                return a
        raise KeyError((u, v))

    def face_vertices(self, f: int) -> tuple[int, int, int]:
        a = self.face_arc[f]
        b = self.next[a]
        return self.tail(a), self.head[a], self.head[b]

    def face_arcs(self, f: int) -> tuple[int, int, int]:
        a = self.face_arc[f]
        b = self.next[a]
        return a, b, self.next[b]

    def faces(self) -> list[tuple[int, int, int]]:
        return [self.face_vertices(f) for f in range(self.num_faces)]

    def edges(self) -> list[tuple[int, int]]:
        return [(self.head[2 * e + 1], self.head[2 * e]) for e in range(self.num_edges)]

    def out_arcs(self, v: int) -> list[int]:
        """Arcs leaving ``v`` in counterclockwise order.

        For border vertices the list ends with the border arc whose left
        side is outside, so consecutive pairs always bound an inner face.
        """
        start = self.vertex_arc[v]
        arcs = [start]
        a = self.prev(start) ^ 1
        while a != start:
            arcs.append(a)
            a = self.prev(a) ^ 1
        if self.face[start] == BOUNDARY:
            arcs = arcs[1:] + arcs[:1]
        return arcs

    def is_border_vertex(self, v: int) -> bool:
        x, y = self.xs[v], self.ys[v]
        return x == 0 or y == 0 or x == self.width - 1 or y == self.height - 1

    # -- flips -------------------------------------------------------------
    def quad(self, a: int) -> tuple[int, int, int, int]:
        """Vertex ids ``(P0, P1, P2, P3)`` around interior arc ``a``.

        ``P0`` is the tail and ``P2`` the head; ``P0 P1 P2`` is the face on the
        right of ``a`` and ``P0 P2 P3`` the face on its left.
        """
        if not self.is_interior(a):
            raise FlipError(f"arc {a} is on the boundary")
        return self.tail(a), self.head[self.next[a ^ 1]], self.head[a], self.head[self.next[a]]

    def quad_points(self, a: int) -> list[tuple[int, int]]:
        return [self.point(v) for v in self.quad(a)]

    def can_flip(self, a: int) -> bool:
        return self.is_interior(a) and is_strictly_convex(self.quad_points(a))

    def flip(self, a: int) -> None:
        """Replace edge P0P2 by P1P3; afterwards ``a`` runs from P1 to P3."""
        if not self.can_flip(a):
            raise FlipError(f"arc {a} cannot be flipped")
        b = a ^ 1
        fa, fb = self.face[a], self.face[b]
        an = self.next[a]
        ap = self.next[an]
        bn = self.next[b]
        bp = self.next[bn]
        p0, p2 = self.head[b], self.head[a]
        p1, p3 = self.head[bn], self.head[an]

        self.head[a] = p3
        self.head[b] = p1
        # face fa = P0 P1 P3 ; face fb = P1 P2 P3
        self.next[bn], self.next[a], self.next[ap] = a, ap, bn
        self.next[bp], self.next[an], self.next[b] = an, b, bp
        self.face[bn] = fa
        self.face[an] = fb
        self.face_arc[fa] = a
        self.face_arc[fb] = b
        if self.vertex_arc[p0] == a:
            self.vertex_arc[p0] = bn
        if self.vertex_arc[p2] == b:
            self.vertex_arc[p2] = an

    # -- bookkeeping ---------------------------------------------------------
    def signed_area2(self, f: int) -> int:
        p, q, r = self.face_vertices(f)
        xs, ys = self.xs, self.ys
        return cross(xs[p], ys[p], xs[q], ys[q], xs[r], ys[r])

    def check_invariants(self) -> None:
        """Raise AssertionError if any structural invariant is broken."""
        w, h = self.width, self.height
        expected_faces = 2 * (w - 1) * (h - 1)
        assert self.num_faces == expected_faces, (self.num_faces, expected_faces)
        assert self.num_vertices - self.num_edges + self.num_faces == 1
        for f in range(self.num_faces):
            assert self.signed_area2(f) == 1, f"face {f} is not unimodular"
            for a in self.face_arcs(f):
                assert self.face[a] == f
        for a in range(self.num_arcs):
            assert self.head[a] != self.tail(a)
            if self.face[a] != BOUNDARY:
                assert self.next[self.next[self.next[a]]] == a
            assert self.tail(self.next[a]) == self.head[a]
        for v in range(self.num_vertices):
            assert self.tail(self.vertex_arc[v]) == v
            if self.is_border_vertex(v):
                assert self.face[self.vertex_arc[v]] == BOUNDARY
        total = sum(self.signed_area2(f) for f in range(self.num_faces))
        assert total == 2 * (w - 1) * (h - 1)

    def canonical(self) -> frozenset:
        """Set of undirected edges; equal for combinatorially equal meshes."""
        return frozenset((min(u, v), max(u, v)) for u, v in self.edges())

    def copy(self) -> "Triangulation":
        other = object.__new__(Triangulation)
        other.width, other.height = self.width, self.height
        other.xs, other.ys, other.border_prev = self.xs, self.ys, self.border_prev
        for name in ("head", "face", "next", "face_arc", "vertex_arc"):
            setattr(other, name, list(getattr(self, name)))
        return other

    def to_obj(self) -> str:
        lines = [f"v {x} {y}" for x, y in zip(self.xs, self.ys)]
        lines += ["f {} {} {}".format(*(v + 1 for v in tri)) for tri in self.faces()]
        return "\n".join(lines) + "\n"


def trivial_triangulation(width: int, height: int) -> Triangulation:
    """Split every unit square along its (x, y)-(x+1, y+1) diagonal."""
    tris = []
    for y in range(height - 1):
        for x in range(width - 1):
            v00 = y * width + x
            v10, v01, v11 = v00 + 1, v00 + width, v00 + width + 1
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    return Triangulation(width, height, tris)


def from_point_triangles(width: int, height: int, triangles) -> Triangulation:
    """Build from triangles given as point triples, fixing orientation as needed."""
    tris = []
    for tri in triangles:
        (px, py), (qx, qy), (rx, ry) = tri
        ids = [y * width + x for x, y in tri]
        if cross(px, py, qx, qy, rx, ry) < 0:
            ids[1], ids[2] = ids[2], ids[1]
        tris.append(tuple(ids))
    return Triangulation(width, height, tris)
