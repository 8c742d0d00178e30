"""k-cliques of half-interval and half-circle families.

A k-clique is a k-subset J of the family for which some point lies in
every member of J and in no other member.  Counting is done by probing:
the containment set only changes at endpoints, so endpoints, midpoints of
consecutive endpoints and points past the extremes realize every clique.
All members are closed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arrangement import ArrangementGraph, circle_frame
from .errors import PreconditionError
from .sphere_core import EPS_ON

TWO_PI = 2 * math.pi
_ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class HalfInterval:
    kind: str  # "left" = (-inf, endpoint], "right" = [endpoint, inf)
    endpoint: float

    def __post_init__(self):
        if self.kind not in ("left", "right"):
            raise ValueError(f"kind must be 'left' or 'right', not {self.kind!r}")
        if not math.isfinite(self.endpoint):
            raise ValueError("endpoint must be finite")

    def contains(self, p: float) -> bool:
        return p <= self.endpoint if self.kind == "left" else p >= self.endpoint


@dataclass(frozen=True)
class HalfCircle:
    """Closed arc of length pi centred at `center_angle`."""

    center_angle: float

    def __post_init__(self):
        object.__setattr__(self, "center_angle", float(self.center_angle) % TWO_PI)

    def endpoints(self) -> tuple[float, float]:
        return (self.center_angle - math.pi / 2) % TWO_PI, (self.center_angle + math.pi / 2) % TWO_PI


def _line_arrays(family: Sequence[HalfInterval]):
    ends = np.array([h.endpoint for h in family], dtype=float)
    is_left = np.array([h.kind == "left" for h in family], dtype=bool)
    return ends, is_left


def line_probes(family: Sequence[HalfInterval], density: int = 1) -> np.ndarray:
    """Probe points: endpoints, `density`-fold subdivisions of the gaps, sentinels."""
    ends = np.unique(np.array([h.endpoint for h in family], dtype=float))
    if ends.size == 0:
        return np.array([0.0])
    parts = [ends, [ends[0] - 1.0, ends[-1] + 1.0]]
    gaps = np.diff(ends)
    for i in range(1, 2 * density):
        parts.append(ends[:-1] + gaps * (i / (2 * density)))
    return np.unique(np.concatenate([np.asarray(p, dtype=float) for p in parts]))


def line_containment(family: Sequence[HalfInterval], probes: np.ndarray) -> np.ndarray:
    """(P, n) boolean matrix: probe p lies in member i."""
    ends, is_left = _line_arrays(family)
    p = np.asarray(probes)[:, None]
    return np.where(is_left[None, :], p <= ends[None, :], p >= ends[None, :])


def _clique_histogram(containment: np.ndarray, n: int) -> np.ndarray:
    if containment.shape[1] == 0:
        hist = np.zeros(n + 1, dtype=np.int64)
        hist[0] = 1
        return hist
    packed = np.packbits(containment, axis=1)
    _, first = np.unique(packed, axis=0, return_index=True)
    return np.bincount(containment[first].sum(axis=1), minlength=n + 1)


def line_clique_counts(family: Sequence[HalfInterval], density: int = 1) -> np.ndarray:
    """Array whose entry k is the number of k-cliques, k = 0..n."""
    cont = line_containment(family, line_probes(family, density))
    return _clique_histogram(cont, len(family))


def count_k_cliques_line(family: Sequence[HalfInterval], k: int) -> int:
    if k < 0:
        raise PreconditionError("k must be non-negative")
    hist = line_clique_counts(family)
    return int(hist[k]) if k < hist.size else 0


def lr_signatures(family: Sequence[HalfInterval], probes: np.ndarray) -> np.ndarray:
    """(P, 2) numbers of left and right members containing each probe."""
    _, is_left = _line_arrays(family)
    cont = line_containment(family, probes)
    return np.stack([cont[:, is_left].sum(axis=1), cont[:, ~is_left].sum(axis=1)], axis=1)


def circle_probes(family: Sequence[HalfCircle], density: int = 1) -> np.ndarray:
    ends = np.unique(np.array([e for h in family for e in h.endpoints()], dtype=float))
    if ends.size == 0:
        return np.array([0.0])
    nxt = np.append(ends[1:], ends[0] + TWO_PI)
    gaps = nxt - ends
    parts = [ends]
    for i in range(1, 2 * density):
        parts.append(ends + gaps * (i / (2 * density)))
    return np.unique(np.mod(np.concatenate(parts), TWO_PI))


def circle_containment(family: Sequence[HalfCircle], probes: np.ndarray) -> np.ndarray:
    centers = np.array([h.center_angle for h in family], dtype=float)
    diff = np.abs(np.asarray(probes)[:, None] - centers[None, :]) % TWO_PI
    diff = np.minimum(diff, TWO_PI - diff)
    return diff <= math.pi / 2 + _ENDPOINT_TOL


def circle_clique_counts(family: Sequence[HalfCircle], density: int = 1) -> np.ndarray:
    cont = circle_containment(family, circle_probes(family, density))
    return _clique_histogram(cont, len(family))


def count_k_cliques_circle(family: Sequence[HalfCircle], k: int) -> int:
    if k < 0:
        raise PreconditionError("k must be non-negative")
    hist = circle_clique_counts(family)
    return int(hist[k]) if k < hist.size else 0


def min_coverage_depth(family: Sequence[HalfCircle]) -> int:
    """Least number of members covering a point of the circle."""
    if not family:
        return 0
    return int(circle_containment(family, circle_probes(family)).sum(axis=1).min())


def half_circles_of_vertex(graph: ArrangementGraph, v: int, circle: int) -> list[HalfCircle]:
    """Points of `circle` separated from vertex v by each other circle D.

    Circles through v are skipped.  Angles are measured in the frame of
    `circle` used by the arrangement builder.
    """
    vert = graph.vertices[v]
    if circle in vert.circles or abs(graph.arr.normals[circle] @ vert.position) <= EPS_ON:
        raise PreconditionError(f"vertex {v} lies on circle {circle}")
    normals = graph.arr.normals
    e1, e2 = circle_frame(normals[circle])
    out = []
    for dcirc in range(graph.n):
        if dcirc == circle or dcirc in vert.circles:
            continue
        u = normals[dcirc]
        # points of the circle on the + side of D are centred at alpha
        alpha = math.atan2(u @ e2, u @ e1)
        if graph.vertex_signs[v, dcirc] > 0:
            alpha += math.pi
        out.append(HalfCircle(alpha))
    return out
