"""Distances, k-levels, zones and hemisphere pair counts.

The distance between a vertex v and a cell F is the least number of
circles a curve from v into F must cross.  Circles through v are free
(the curve leaves v directly into the right quadrant) and every other
circle separating v from F must be crossed, so the distance is a
separation count that skips the two circles of v.  `bfs_distance_oracle`
recomputes it from cell adjacency alone.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arrangement import ArrangementGraph, cells_touching
from .errors import PreconditionError
from .sphere_core import separation_count

E = math.e


@dataclass(frozen=True)
class LevelProfile:
    cell_id: int
    counts: tuple[int, ...]  # counts[k] = vertices at distance k, k = 0..n-1


@dataclass(frozen=True)
class ZoneProfile:
    circle: int
    # cumulative counts for j = 0..n
    both: tuple[int, ...]
    strict_pos: tuple[int, ...]
    strict_neg: tuple[int, ...]


def expected_level_bound(k: int) -> float:
    return 4 * E * (k + 2) ** 2


def zone_bound_strict(j: int, n: int) -> float:
    return 2 * E * (j + 2) * n


def zone_bound_both(j: int, n: int) -> float:
    return 4 * E * (j + 2) * n


def pairs_bound(k: int, n: int) -> float:
    """Upper bound on |F_k(C+)|: 4n for k = 0, 2e k(k+1) n otherwise."""
    return 4 * n if k == 0 else 2 * E * k * (k + 1) * n


def vertex_cell_distance(graph: ArrangementGraph, v: int, f: int) -> int:
    vert = graph.vertices[v]
    return separation_count(vert.position, graph.cells[f].representative, graph.arr, exclude=vert.circles)


def distance_matrix(graph: ArrangementGraph) -> np.ndarray:
    """(V, F) matrix of vertex-cell distances."""
    if "dist" not in graph._memo:
        vs = graph.vertex_signs.astype(np.int64)
        cs = graph.cell_signs.astype(np.int64)
        # each of the n-2 relevant circles contributes +1 if it agrees, -1 if not
        d = ((graph.n - 2) - vs @ cs.T) // 2
        d.setflags(write=False)
        graph._memo["dist"] = d
    return graph._memo["dist"]


def _cell_bfs(graph: ArrangementGraph, sources) -> np.ndarray:
    dist = np.full(len(graph.cells), -1, dtype=np.int64)
    queue = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    nbrs = graph.cell_neighbors
    while queue:
        c = queue.popleft()
        for o in nbrs[c]:
            if dist[o] < 0:
                dist[o] = dist[c] + 1
                queue.append(o)
    return dist


def cell_distances(graph: ArrangementGraph) -> np.ndarray:
    """(F, F) breadth-first distances in the cell adjacency graph."""
    if "cell_bfs" not in graph._memo:
        m = np.array([_cell_bfs(graph, [c]) for c in range(len(graph.cells))])
        m.setflags(write=False)
        graph._memo["cell_bfs"] = m
    return graph._memo["cell_bfs"]


def bfs_distance_oracle(graph: ArrangementGraph, v: int, f: int) -> int:
    """Vertex-cell distance through cell adjacency only."""
    return int(min(cell_distances(graph)[g, f] for g in graph.vertex_cells[v]))


def level_profile(graph: ArrangementGraph, f: int) -> LevelProfile:
    col = distance_matrix(graph)[:, f]
    counts = np.bincount(col, minlength=graph.n)
    return LevelProfile(f, tuple(int(c) for c in counts))


def level_table(graph: ArrangementGraph) -> np.ndarray:
    """(F, n) matrix whose row F is the level profile of cell F."""
    d = distance_matrix(graph)
    table = np.zeros((len(graph.cells), graph.n), dtype=np.int64)
    for f in range(len(graph.cells)):
        table[f] = np.bincount(d[:, f], minlength=graph.n)
    return table


def expected_level(graph: ArrangementGraph) -> list[Fraction]:
    """Average k-level size over a uniformly random south-pole cell."""
    totals = level_table(graph).sum(axis=0)
    n_cells = len(graph.cells)
    return [Fraction(int(t), n_cells) for t in totals]


def vertex_circle_sides(graph: ArrangementGraph, circle: int) -> np.ndarray:
    return graph.vertex_signs[:, circle]


def pairs_count(graph: ArrangementGraph, circle: int, side: int, k: int) -> int:
    """|F_k(C+)|: pairs (F, v) with F a cell of the opposite side touching C,
    v a vertex of the closed `side` hemisphere, at distance k."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    cells = sorted(cells_touching(graph, circle, -side))
    vmask = vertex_circle_sides(graph, circle) != -side
    sub = distance_matrix(graph)[np.ix_(vmask, cells)]
    return int(np.count_nonzero(sub == k))


def b_set(graph: ArrangementGraph, v: int, circle: int, side: int, k: int) -> list[int]:
    """Cells of the opposite side touching C at distance exactly k from v."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if graph.vertex_signs[v, circle] == -side:
        raise PreconditionError(f"vertex {v} lies on the wrong side of circle {circle}")
    d = distance_matrix(graph)
    return [f for f in sorted(cells_touching(graph, circle, -side)) if d[v, f] == k]


def b_set_size(graph: ArrangementGraph, v: int, circle: int, side: int, k: int) -> int:
    return len(b_set(graph, v, circle, side, k))


def circle_cell_distances(graph: ArrangementGraph, circle: int) -> np.ndarray:
    """BFS distance of every cell to the nearest cell touching `circle`."""
    key = ("circle_bfs", circle)
    if key not in graph._memo:
        src = cells_touching(graph, circle, 1) | cells_touching(graph, circle, -1)
        graph._memo[key] = _cell_bfs(graph, sorted(src))
    return graph._memo[key]


def zone_distances(graph: ArrangementGraph) -> np.ndarray:
    """(V, n) matrix of vertex-to-circle distances."""
    if "zone" not in graph._memo:
        m = np.empty((len(graph.vertices), graph.n), dtype=np.int64)
        for c in range(graph.n):
            cd = circle_cell_distances(graph, c)
            m[:, c] = cd[graph.vertex_cells].min(axis=1)
        m.setflags(write=False)
        graph._memo["zone"] = m
    return graph._memo["zone"]


def zone_distance(graph: ArrangementGraph, v: int, circle: int) -> int:
    if circle in graph.vertices[v].circles:
        return 0
    return int(zone_distances(graph)[v, circle])


def zone_count(graph: ArrangementGraph, circle: int, j: int, side: str = "both") -> int:
    """Vertices within distance j of `circle`.

    `side` is ``"both"`` (whole sphere, vertices on the circle included),
    ``"+"`` or ``"-"`` (strictly on that side).
    """
    if j < 0:
        raise PreconditionError("j must be non-negative")
    within = zone_distances(graph)[:, circle] <= j
    s = vertex_circle_sides(graph, circle)
    if side == "both":
        return int(np.count_nonzero(within))
    if side in ("+", "strict+"):
        return int(np.count_nonzero(within & (s == 1)))
    if side in ("-", "strict-"):
        return int(np.count_nonzero(within & (s == -1)))
    raise ValueError(f"unknown side filter {side!r}")


def zone_profile(graph: ArrangementGraph, circle: int) -> ZoneProfile:
    js = range(graph.n + 1)
    return ZoneProfile(
        circle,
        tuple(zone_count(graph, circle, j, "both") for j in js),
        tuple(zone_count(graph, circle, j, "+") for j in js),
        tuple(zone_count(graph, circle, j, "-") for j in js),
    )
