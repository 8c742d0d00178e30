"""Geometric primitives on the unit sphere S^d.

Points of S^d and great-(d-1)-spheres share one representation: a unit
vector in R^(d+1).  A great sphere is the set of points orthogonal to its
normal, so the same array serves as a point or as a normal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateError, DegeneracyError, OnCircleError, OnEquatorError

EPS_ON = 1e-9
EPS_RANK = 1e-9
UNIT_TOL = 1e-9
_MIN_NORM = 1e-12


def as_unit_vector(coords: Iterable[float], tol: float = UNIT_TOL) -> np.ndarray:
    """Return `coords` as a read-only float array, checking the unit norm."""
    v = np.array(coords, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ValueError(f"expected a flat vector with at least 2 coordinates, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"vector norm {norm!r} differs from 1 by more than {tol}")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class GreatSphereArrangement:
    """An ordered list of unit normals on S^d.

    ``normals`` has shape (n, d+1).  No two normals may be parallel (equal
    or antipodal) within ``EPS_RANK``.
    """

    dimension: int
    normals: np.ndarray

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        normals = np.array(self.normals, dtype=float).reshape(-1, self.dimension + 1)
        norms = np.linalg.norm(normals, axis=1)
        if normals.size and np.any(np.abs(norms - 1.0) > UNIT_TOL):
            bad = int(np.argmax(np.abs(norms - 1.0)))
            raise ValueError(f"normal {bad} has norm {norms[bad]!r}")
        normals.setflags(write=False)
        object.__setattr__(self, "normals", normals)
        _check_no_parallel(normals)

    @property
    def n(self) -> int:
        return self.normals.shape[0]

    def __len__(self) -> int:
        return self.n


def _check_no_parallel(normals: np.ndarray) -> None:
    n = normals.shape[0]
    if n < 2:
        return
    iu = np.triu_indices(n, 1)
    a, b = normals[iu[0]], normals[iu[1]]
    # chord length to the nearer of v, -v approximates the angle for small angles
    chord = np.minimum(np.linalg.norm(a - b, axis=1), np.linalg.norm(a + b, axis=1))
    if np.any(chord <= EPS_RANK):
        idx = int(np.argmin(chord))
        raise DegeneracyError(f"normals {iu[0][idx]} and {iu[1][idx]} are parallel")


def sample_unit_vectors(d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `size` independent uniform points of S^d, shape (size, d+1)."""
    if d < 1:
        raise ValueError("d must be at least 1")
    out = rng.standard_normal((size, d + 1))
    norms = np.linalg.norm(out, axis=1)
    bad = norms < _MIN_NORM
    while np.any(bad):
        out[bad] = rng.standard_normal((int(bad.sum()), d + 1))
        norms[bad] = np.linalg.norm(out[bad], axis=1)
        bad = norms < _MIN_NORM
    return out / norms[:, None]


def sample_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one uniform point of S^d (normalized Gaussian vector)."""
    v = sample_unit_vectors(d, 1, rng)[0]
    v.setflags(write=False)
    return v


def random_arrangement(d: int, n: int, rng: np.random.Generator) -> GreatSphereArrangement:
    return GreatSphereArrangement(d, sample_unit_vectors(d, n, rng))


def side(normal: Sequence[float], point: Sequence[float], eps: float = EPS_ON) -> int:
    """+1, -1 or 0 according to the sign of <normal, point> beyond `eps`."""
    normal = np.asarray(normal, dtype=float)
    point = np.asarray(point, dtype=float)
    if normal.shape != point.shape:
        raise ValueError(f"dimension mismatch: {normal.shape} vs {point.shape}")
    t = float(normal @ point)
    if t > eps:
        return 1
    if t < -eps:
        return -1
    return 0


def sides(normals: np.ndarray, point: np.ndarray, eps: float = EPS_ON) -> np.ndarray:
    """Vectorized `side` of one point against every row of `normals`."""
    t = np.asarray(normals, dtype=float) @ np.asarray(point, dtype=float)
    s = np.zeros(t.shape, dtype=np.int8)
    s[t > eps] = 1
    s[t < -eps] = -1
    return s


def separation_count(x, y, arr: GreatSphereArrangement, exclude: Iterable[int] = ()) -> int:
    """Number of non-excluded spheres of `arr` that strictly separate x from y."""
    if arr.n == 0:
        return 0
    keep = np.ones(arr.n, dtype=bool)
    for i in exclude:
        keep[i] = False
    sx = sides(arr.normals, x)
    sy = sides(arr.normals, y)
    zero = keep & ((sx == 0) | (sy == 0))
    if np.any(zero):
        raise OnCircleError(f"point lies on sphere {int(np.flatnonzero(zero)[0])}")
    return int(np.count_nonzero(keep & (sx != sy)))


def _orient(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > EPS_ON)
    if nz.size and v[nz[-1]] < 0:
        v = -v
    return v


def vertex_pair(normals: Sequence[Sequence[float]]) -> tuple[np.ndarray, np.ndarray]:
    """The two antipodal common points of d great spheres on S^d.

    The first returned vector has its last nonzero coordinate positive.
    """
    m = np.atleast_2d(np.asarray(normals, dtype=float))
    d = m.shape[1] - 1
    if m.shape[0] != d:
        raise ValueError(f"need {d} normals in R^{d + 1}, got {m.shape[0]}")
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= EPS_RANK:
        raise DegenerateError(f"normals are rank deficient (smallest singular value {sv[-1]:.3g})")
    if d == 2:
        v = np.cross(m[0], m[1])
    else:
        v = np.linalg.svd(m)[2][-1]
    v = _orient(v / np.linalg.norm(v))
    w = -v
    v.setflags(write=False)
    w.setflags(write=False)
    return v, w


def kernel_vectors(mats: np.ndarray) -> np.ndarray:
    """Generalized cross products of a stack of d x (d+1) matrices.

    Returns the (unnormalized) kernel direction of each matrix; its norm is
    the d-volume spanned by the rows, zero iff the rows are dependent.
    """
    mats = np.asarray(mats, dtype=float)
    d = mats.shape[-2]
    if mats.shape[-1] != d + 1:
        raise ValueError("expected matrices of shape (d, d+1)")
    if d == 2:
        return np.cross(mats[..., 0, :], mats[..., 1, :])
    cols = []
    for j in range(d + 1):
        minor = np.delete(mats, j, axis=-1)
        cols.append((-1) ** j * np.linalg.det(minor))
    return np.stack(cols, axis=-1)


def central_project(p: Sequence[float], plane_sign: int = 1) -> tuple[float, float]:
    """Project a point of S^2 from the origin onto the plane z = plane_sign."""
    p = np.asarray(p, dtype=float)
    if plane_sign not in (1, -1):
        raise ValueError("plane_sign must be +1 or -1")
    if abs(p[2]) <= EPS_ON:
        raise OnEquatorError(f"point {p.tolist()} lies on the equator")
    scale = plane_sign / p[2]
    return float(p[0] * scale), float(p[1] * scale)
