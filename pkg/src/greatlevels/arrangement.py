"""Combinatorial structure of a simple great-circle arrangement on S^2.

Circles are cut into arcs at their intersection points; cells are traced
as faces of the rotation system formed by the four arc-ends around every
vertex.  Each arc is stored once and traversed in both directions through
half-edges: half-edge ``2*a`` runs along arc ``a`` in the positive sense of
its circle (counterclockwise about the normal), ``2*a + 1`` runs backwards.
The cell to the left of the positive half-edge lies on the + side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import BuildError, DegeneracyError
from .sphere_core import EPS_ON, GreatSphereArrangement, sides, vertex_pair

ANGLE_TOL = 1e-9
NUDGE = 1e-6


@dataclass(frozen=True, eq=False)
class Vertex:
    id: int
    circles: tuple[int, int]
    position: np.ndarray


@dataclass(frozen=True, eq=False)
class Arc:
    id: int
    circle: int
    endpoints: tuple[int, int]
    # (left, right) with respect to the positive direction of the circle
    side_faces: tuple[int, int]
    midpoint: np.ndarray


@dataclass(frozen=True, eq=False)
class Cell:
    id: int
    # directed arcs (arc id, +1 forward / -1 backward), counterclockwise
    boundary: tuple[tuple[int, int], ...]
    sign_vector: tuple[int, ...]
    representative: np.ndarray


@dataclass(frozen=True, eq=False)
class ArrangementGraph:
    arr: GreatSphereArrangement
    vertices: tuple[Vertex, ...]
    arcs: tuple[Arc, ...]
    cells: tuple[Cell, ...]
    vertex_cells: np.ndarray  # (V, 4) cell ids around each vertex
    vertex_arcs: np.ndarray  # (V, 4) arc ids around each vertex
    circle_arcs: tuple[tuple[int, ...], ...]  # arcs of each circle in positive order
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.arr.n

    @cached_property
    def cell_signs(self) -> np.ndarray:
        """(F, n) matrix of cell sign vectors."""
        m = np.array([c.sign_vector for c in self.cells], dtype=np.int8)
        m.setflags(write=False)
        return m

    @cached_property
    def vertex_signs(self) -> np.ndarray:
        """(V, n) side of every vertex w.r.t. every circle, 0 on its own two."""
        m = np.empty((len(self.vertices), self.n), dtype=np.int8)
        for v in self.vertices:
            s = sides(self.arr.normals, v.position)
            s[list(v.circles)] = 0
            m[v.id] = s
        m.setflags(write=False)
        return m

    @cached_property
    def positions(self) -> np.ndarray:
        m = np.array([v.position for v in self.vertices])
        m.setflags(write=False)
        return m

    @cached_property
    def cell_neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Cells sharing an arc with each cell (sorted, no repeats)."""
        nb = [set() for _ in self.cells]
        for a in self.arcs:
            left, right = a.side_faces
            nb[left].add(right)
            nb[right].add(left)
        return tuple(tuple(sorted(s)) for s in nb)

    @cached_property
    def cell_by_signs(self) -> dict[tuple[int, ...], int]:
        return {c.sign_vector: c.id for c in self.cells}

    def antipodal_cell(self, cell_id: int) -> int:
        return self.cell_by_signs[tuple(-s for s in self.cells[cell_id].sign_vector)]

    @staticmethod
    def antipodal_vertex(vertex_id: int) -> int:
        return vertex_id ^ 1


def circle_frame(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal e1, e2 spanning the circle of `u` with e1 x e2 = u."""
    k = int(np.argmin(np.abs(u)))
    a = np.zeros(3)
    a[k] = 1.0
    e1 = a - (a @ u) * u
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return e1, e2


def representative_point(
    arr: GreatSphereArrangement,
    boundary,
    arc_circle,
    arc_midpoint,
    eps: float = NUDGE,
) -> np.ndarray:
    """An interior point of the cell bounded by the directed arcs `boundary`.

    Each boundary arc's midpoint is pushed a distance `eps` off its circle
    towards the cell; the first candidate whose sides are all strict and
    agree with the cell's bounding circles is returned.  Cells narrower
    than `eps` fall back to the mean of the arc midpoints (interior for a
    convex cell) and then to nudges shrunk by factors of ten.
    """
    expected = {}
    for a, direction in boundary:
        c = arc_circle[a]
        if expected.setdefault(c, direction) != direction:
            raise DegeneracyError(f"cell lies on both sides of circle {c}")

    def inside(p):
        s = sides(arr.normals, p)
        return np.all(s != 0) and all(s[ci] == sg for ci, sg in expected.items())

    def nudges(step):
        for a, direction in boundary:
            p = arc_midpoint[a] + step * direction * arr.normals[arc_circle[a]]
            yield p / np.linalg.norm(p)

    def candidates():
        yield from nudges(eps)
        mean = np.sum([arc_midpoint[a] for a, _ in boundary], axis=0)
        if np.linalg.norm(mean) > 0:
            yield mean / np.linalg.norm(mean)
        for shrink in (1e-1, 1e-2):
            yield from nudges(eps * shrink)

    for p in candidates():
        if inside(p):
            p.setflags(write=False)
            return p
    raise DegeneracyError("no interior point found; the cell is too thin")


def build_graph(arr: GreatSphereArrangement) -> ArrangementGraph:
    """Build vertices, arcs and cells of a simple arrangement of great circles."""
    if arr.dimension != 2:
        raise BuildError(f"arrangement graphs need dimension 2, got {arr.dimension}")
    n = arr.n
    if n < 2:
        raise BuildError(f"at least 2 circles are required, got {n}")
    normals = arr.normals

    vertices = []
    on_circle = [[] for _ in range(n)]
    for i, j in combinations(range(n), 2):
        for pos in vertex_pair(normals[[i, j]]):
            vid = len(vertices)
            vertices.append(Vertex(vid, (i, j), pos))
            on_circle[i].append(vid)
            on_circle[j].append(vid)

    # order the vertices of each circle and cut it into arcs
    arc_circle, arc_ends, arc_mid = [], [], []
    circle_arcs = []
    out_arc = {}  # (vertex, circle) -> arc leaving the vertex positively
    in_arc = {}
    for i in range(n):
        e1, e2 = circle_frame(normals[i])
        vids = on_circle[i]
        theta = np.array([math.atan2(vertices[v].position @ e2, vertices[v].position @ e1) for v in vids])
        theta = np.mod(theta, 2 * math.pi)
        order = np.argsort(theta, kind="stable")
        ts = theta[order]
        gaps = np.diff(np.append(ts, ts[0] + 2 * math.pi))
        if np.any(gaps <= ANGLE_TOL):
            raise DegeneracyError(f"two vertices on circle {i} coincide")
        ids = []
        m = len(order)
        for t in range(m):
            a_vid, b_vid = vids[order[t]], vids[order[(t + 1) % m]]
            t0 = ts[t]
            t1 = ts[t] + gaps[t]
            mid = 0.5 * (t0 + t1)
            aid = len(arc_circle)
            arc_circle.append(i)
            arc_ends.append((a_vid, b_vid))
            arc_mid.append(math.cos(mid) * e1 + math.sin(mid) * e2)
            out_arc[(a_vid, i)] = aid
            in_arc[(b_vid, i)] = aid
            ids.append(aid)
        circle_arcs.append(tuple(ids))

    # the four outgoing half-edges at each vertex, counterclockwise about it
    n_he = 2 * len(arc_circle)
    rotation = []
    for v in vertices:
        p = v.position
        b1, b2 = circle_frame(p)
        outs = []
        for c in v.circles:
            t = np.cross(normals[c], p)
            outs.append((2 * out_arc[(v.id, c)], t))
            outs.append((2 * in_arc[(v.id, c)] + 1, -t))
        outs.sort(key=lambda ht: math.atan2(ht[1] @ b2, ht[1] @ b1))
        rotation.append([h for h, _ in outs])

    def head(h):
        a, back = divmod(h, 2)
        return arc_ends[a][0] if back else arc_ends[a][1]

    pos_in_rotation = {}
    for vid, rot in enumerate(rotation):
        for idx, h in enumerate(rot):
            pos_in_rotation[h] = (vid, idx)

    # next half-edge around the face to the left
    nxt = np.empty(n_he, dtype=np.int64)
    for h in range(n_he):
        vid, idx = pos_in_rotation[h ^ 1]
        assert vid == head(h)
        nxt[h] = rotation[vid][(idx - 1) % 4]

    face_of = np.full(n_he, -1, dtype=np.int64)
    boundaries = []
    for h0 in range(n_he):
        if face_of[h0] >= 0:
            continue
        fid = len(boundaries)
        cycle = []
        h = h0
        while face_of[h] < 0:
            face_of[h] = fid
            cycle.append(h)
            h = int(nxt[h])
        if h != h0:
            raise DegeneracyError("inconsistent rotation system")
        boundaries.append(tuple((h // 2, -1 if h % 2 else 1) for h in cycle))

    expected_faces = n * (n - 1) + 2
    if len(boundaries) != expected_faces:
        raise DegeneracyError(f"traced {len(boundaries)} cells, expected {expected_faces}")

    cells = []
    seen = set()
    for fid, bnd in enumerate(boundaries):
        rep = representative_point(arr, bnd, arc_circle, arc_mid)
        sv = tuple(int(s) for s in sides(normals, rep))
        if sv in seen:
            raise DegeneracyError("two cells share a sign vector")
        seen.add(sv)
        cells.append(Cell(fid, bnd, sv, rep))

    arcs = []
    for aid in range(len(arc_circle)):
        mid = arc_mid[aid]
        mid.setflags(write=False)
        arcs.append(Arc(aid, arc_circle[aid], arc_ends[aid], (int(face_of[2 * aid]), int(face_of[2 * aid + 1])), mid))

    vertex_cells = np.array([[face_of[h] for h in rot] for rot in rotation], dtype=np.int64)
    vertex_arcs = np.array([[h // 2 for h in rot] for rot in rotation], dtype=np.int64)
    vertex_cells.setflags(write=False)
    vertex_arcs.setflags(write=False)

    graph = ArrangementGraph(
        arr=arr,
        vertices=tuple(vertices),
        arcs=tuple(arcs),
        cells=tuple(cells),
        vertex_cells=vertex_cells,
        vertex_arcs=vertex_arcs,
        circle_arcs=tuple(circle_arcs),
    )
    # a third circle through a vertex makes the arrangement non-simple
    vs = graph.vertex_signs
    own = np.zeros(vs.shape, dtype=bool)
    for v in vertices:
        own[v.id, list(v.circles)] = True
    if np.any((vs == 0) & ~own):
        raise DegeneracyError("three circles pass through a common vertex")
    return graph


def cells_touching(graph: ArrangementGraph, circle: int, side: int) -> frozenset[int]:
    """Cells on the given side of `circle` that share at least one arc with it."""
    if not 0 <= circle < graph.n:
        raise IndexError(f"circle {circle} out of range")
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    key = ("touching", circle, side)
    if key not in graph._memo:
        pick = 0 if side == 1 else 1
        graph._memo[key] = frozenset(graph.arcs[a].side_faces[pick] for a in graph.circle_arcs[circle])
    return graph._memo[key]


def expected_counts(n: int) -> tuple[int, int, int]:
    """(V, E, F) of any simple arrangement of n >= 2 great circles."""
    return n * (n - 1), 2 * n * (n - 1), n * (n - 1) + 2
