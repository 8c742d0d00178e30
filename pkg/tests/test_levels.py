import math
from fractions import Fraction

import numpy as np
import pytest

from greatlevels import levels
from greatlevels.arrangement import cells_touching
from greatlevels.errors import PreconditionError

from conftest import random_graphs

ORACLE_GRAPHS = list(random_graphs(8, [2, 3, 4, 5, 6, 7, 8], seed=21))


def _vertex_at(graph, point):
    for v in graph.vertices:
        if np.allclose(v.position, point):
            return v.id
    raise LookupError(point)


def test_incident_cell_distance_zero(coord_graph):
    for v in coord_graph.vertices:
        for f in coord_graph.vertex_cells[v.id]:
            assert levels.vertex_cell_distance(coord_graph, v.id, f) == 0
            assert levels.bfs_distance_oracle(coord_graph, v.id, f) == 0


def test_pole_to_lower_octant(coord_graph):
    v = _vertex_at(coord_graph, [0, 0, 1])
    f = coord_graph.cell_by_signs[(1, 1, -1)]
    assert levels.vertex_cell_distance(coord_graph, v, f) == 1
    assert levels.bfs_distance_oracle(coord_graph, v, f) == 1


def test_lune_distances(lune_graph):
    for v in range(2):
        for f in range(4):
            assert levels.bfs_distance_oracle(lune_graph, v, f) == 0
            assert levels.vertex_cell_distance(lune_graph, v, f) == 0


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: f"n{g.n}")
def test_distance_matches_bfs_oracle(graph):
    for v in range(len(graph.vertices)):
        for f in range(len(graph.cells)):
            d = levels.vertex_cell_distance(graph, v, f)
            assert d == levels.bfs_distance_oracle(graph, v, f)
            assert d == levels.distance_matrix(graph)[v, f]


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: f"n{g.n}")
def test_antipode_of_incident_cell(graph):
    for v in range(len(graph.vertices)):
        for f in graph.vertex_cells[v]:
            far = graph.antipodal_cell(int(f))
            assert levels.vertex_cell_distance(graph, v, far) == graph.n - 2
            assert levels.bfs_distance_oracle(graph, v, far) == graph.n - 2


def test_coordinate_profiles(coord_graph):
    for f in range(8):
        assert levels.level_profile(coord_graph, f).counts == (3, 3, 0)
    assert levels.expected_level(coord_graph) == [3, 3, 0]


def test_lune_profiles(lune_graph):
    for f in range(4):
        assert levels.level_profile(lune_graph, f).counts == (2, 0)
    assert levels.expected_level(lune_graph) == [2, 0]


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: f"n{g.n}")
def test_profile_invariants(graph):
    nv = graph.n * (graph.n - 1)
    for f in range(len(graph.cells)):
        prof = levels.level_profile(graph, f)
        assert sum(prof.counts) == nv
        assert len(prof.counts) == graph.n
        assert prof.counts == levels.level_profile(graph, graph.antipodal_cell(f)).counts
    exp = levels.expected_level(graph)
    assert all(isinstance(e, Fraction) for e in exp)
    assert sum(exp) == nv
    assert float(exp[0]) <= 4 * math.e * 4


def test_pairs_count_lune(lune_graph):
    for c in range(2):
        assert levels.pairs_count(lune_graph, c, 1, 0) == 4


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: f"n{g.n}")
def test_pairs_count_brute_force(graph):
    n = graph.n
    for c in range(n):
        for s in (1, -1):
            for k in range(n):
                brute = 0
                for f in graph.cells:
                    if f.sign_vector[c] != -s or f.id not in cells_touching(graph, c, -s):
                        continue
                    for v in graph.vertices:
                        if abs(graph.arr.normals[c] @ v.position) > 1e-9 and np.sign(graph.arr.normals[c] @ v.position) != s:
                            continue
                        if levels.bfs_distance_oracle(graph, v.id, f.id) == k:
                            brute += 1
                assert levels.pairs_count(graph, c, s, k) == brute
            assert levels.pairs_count(graph, c, s, 0) <= 4 * n


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: f"n{g.n}")
def test_pairs_cover_every_level_pair(graph):
    totals = levels.level_table(graph).sum(axis=0)
    for k in range(1, graph.n):
        covered = sum(levels.pairs_count(graph, c, s, k) for c in range(graph.n) for s in (1, -1))
        assert totals[k] <= covered


def test_b_set_two_circles(lune_graph):
    for v in range(2):
        for c in range(2):
            for s in (1, -1):
                for k in range(1, 3):
                    assert levels.b_set_size(lune_graph, v, c, s, k) in (0, 1)


def test_b_set_on_circle_counts_both_directions(coord_graph):
    # v = (1,0,0) lies on the equator and on the y = 0 circle; the lower
    # octants with x < 0 are one crossing away, one on each side of y = 0
    v = _vertex_at(coord_graph, [1, 0, 0])
    assert levels.b_set_size(coord_graph, v, 2, 1, 1) == 2


def test_b_set_above_pole(coord_graph):
    # from the pole every lower octant is reached by crossing the equator
    v = _vertex_at(coord_graph, [0, 0, 1])
    assert levels.b_set_size(coord_graph, v, 2, 1, 1) == 4


def test_b_set_preconditions(coord_graph):
    v = _vertex_at(coord_graph, [0, 0, -1])
    with pytest.raises(PreconditionError):
        levels.b_set_size(coord_graph, v, 2, 1, 1)
    with pytest.raises(PreconditionError):
        levels.b_set_size(coord_graph, v, 2, -1, 0)


def test_zone_distance_examples(coord_graph):
    v = _vertex_at(coord_graph, [0, 0, 1])
    assert levels.zone_distance(coord_graph, v, 2) == 0
    assert levels.zone_distance(coord_graph, v, 0) == 0


@pytest.mark.parametrize("graph", ORACLE_GRAPHS, ids=lambda g: f"n{g.n}")
def test_zone_invariants(graph):
    n = graph.n
    d = levels.distance_matrix(graph)
    zone = levels.zone_distances(graph)
    for c in range(n):
        touching = sorted(cells_touching(graph, c, 1) | cells_touching(graph, c, -1))
        assert np.all(zone[:, c][:, None] <= d[:, touching])
        # the zone distance is attained by some touching cell
        assert np.array_equal(zone[:, c], d[:, touching].min(axis=1))
        prof = levels.zone_profile(graph, c)
        for series in (prof.both, prof.strict_pos, prof.strict_neg):
            assert all(a <= b for a, b in zip(series, series[1:]))
        assert prof.both[n] == n * (n - 1)
        assert levels.zone_count(graph, c, n + 3) == n * (n - 1)
        on_circle = 2 * (n - 1)
        assert prof.both[n] == prof.strict_pos[n] + prof.strict_neg[n] + on_circle


def test_zone_count_bad_side(coord_graph):
    with pytest.raises(ValueError):
        levels.zone_count(coord_graph, 0, 1, "above")
