import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greatlevels.errors import DegenerateError, DegeneracyError, OnCircleError, OnEquatorError
from greatlevels.sphere_core import (
    GreatSphereArrangement,
    as_unit_vector,
    central_project,
    kernel_vectors,
    sample_unit_vector,
    sample_unit_vectors,
    separation_count,
    side,
    vertex_pair,
)

SQ3 = math.sqrt(3)
COORD = GreatSphereArrangement(2, np.eye(3))


def test_sample_unit_vector_norm():
    v = sample_unit_vector(2, np.random.default_rng(5))
    assert v.shape == (3,)
    assert abs(np.linalg.norm(v) - 1) < 1e-12


def test_sample_unit_vector_deterministic():
    a = sample_unit_vector(4, np.random.default_rng(123))
    b = sample_unit_vector(4, np.random.default_rng(123))
    assert np.array_equal(a, b)


def test_sample_mean_near_zero():
    pts = sample_unit_vectors(2, 10**5, np.random.default_rng(0))
    # per-coordinate variance is 1/3, so 3 sigma is about 0.0055
    assert np.all(np.abs(pts.mean(axis=0)) < 0.02)


def test_hemisphere_fraction():
    pts = sample_unit_vectors(2, 10**5, np.random.default_rng(1))
    for u in (np.array([0, 0, 1.0]), np.array([1, 2, 3.0]) / math.sqrt(14)):
        frac = np.mean(pts @ u > 0)
        assert abs(frac - 0.5) < 0.005


def test_side_examples():
    assert side([0, 0, 1], [0, 0, 1]) == 1
    assert side([0, 0, 1], [1, 0, 0]) == 0
    assert side([0, 0, 1], [0, 0.6, -0.8]) == -1


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_side_antisymmetric(seed):
    rng = np.random.default_rng(seed)
    u, x = sample_unit_vectors(3, 2, rng)
    s = side(u, x)
    if s:
        assert side(u, -x) == -s


def test_separation_count_examples():
    x = np.array([1, 1, 1]) / SQ3
    y = np.array([1, 1, -1]) / SQ3
    assert separation_count(x, y, COORD) == 1
    assert separation_count(x, x, COORD) == 0
    assert separation_count(x, -x, COORD) == 3
    assert separation_count(x, -x, COORD, exclude={0}) == 2


def test_separation_count_on_circle():
    with pytest.raises(OnCircleError):
        separation_count(np.array([1.0, 0, 0]), np.array([1, 1, 1]) / SQ3, COORD)
    # excluded circles may pass through the points
    assert separation_count(np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]), COORD, exclude={1, 2}) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 12))
def test_separation_symmetric_and_triangle(seed, n):
    rng = np.random.default_rng(seed)
    arr = GreatSphereArrangement(2, sample_unit_vectors(2, n, rng))
    x, y, z = sample_unit_vectors(2, 3, rng)
    sxy = separation_count(x, y, arr)
    assert sxy == separation_count(y, x, arr)
    assert sxy + separation_count(y, z, arr) >= separation_count(x, z, arr)


def test_vertex_pair_cross_product():
    v, w = vertex_pair([[1.0, 0, 0], [0, 1.0, 0]])
    assert np.allclose(v, [0, 0, 1]) and np.allclose(w, [0, 0, -1])


def test_vertex_pair_parallel():
    u = np.array([0.6, 0.8, 0.0])
    with pytest.raises(DegenerateError):
        vertex_pair([u, u])
    with pytest.raises(DegeneracyError):
        vertex_pair([u, -u])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_vertex_pair_kernel(seed, d):
    normals = sample_unit_vectors(d, d, np.random.default_rng(seed))
    v, w = vertex_pair(normals)
    assert np.all(np.abs(normals @ v) < 1e-10)
    assert np.array_equal(w, -v)
    assert abs(np.linalg.norm(v) - 1) < 1e-12
    last = v[np.flatnonzero(np.abs(v) > 1e-9)[-1]]
    assert last > 0


def test_kernel_vectors_matches_vertex_pair():
    rng = np.random.default_rng(3)
    mats = sample_unit_vectors(3, 3 * 5, rng).reshape(5, 3, 4)
    ker = kernel_vectors(mats)
    for m, k in zip(mats, ker):
        v, _ = vertex_pair(m)
        k = k / np.linalg.norm(k)
        assert min(np.linalg.norm(k - v), np.linalg.norm(k + v)) < 1e-10


def test_central_project():
    assert central_project([0, 0, 1], 1) == (0.0, 0.0)
    x, y = central_project(np.array([1, 0, 1]) / math.sqrt(2), 1)
    assert abs(x - 1) < 1e-15 and y == 0
    with pytest.raises(OnEquatorError):
        central_project([1, 0, 0], 1)


def test_arrangement_rejects_parallel_normals():
    with pytest.raises(DegeneracyError):
        GreatSphereArrangement(2, [[0, 0, 1.0], [0, 0, -1.0]])


def test_as_unit_vector():
    assert as_unit_vector([0, 1.0]).tolist() == [0, 1]
    with pytest.raises(ValueError):
        as_unit_vector([0, 1.1])
