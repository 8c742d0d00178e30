import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greatlevels import levels
from greatlevels.cliques import (
    HalfCircle,
    HalfInterval,
    circle_clique_counts,
    circle_containment,
    circle_probes,
    count_k_cliques_circle,
    count_k_cliques_line,
    half_circles_of_vertex,
    line_clique_counts,
    line_probes,
    lr_signatures,
    min_coverage_depth,
)
from greatlevels.errors import PreconditionError

from conftest import random_graphs

half_intervals = st.lists(
    st.builds(HalfInterval, st.sampled_from(["left", "right"]), st.floats(-100, 100, allow_nan=False)),
    max_size=40,
)
half_circles = st.lists(st.builds(HalfCircle, st.floats(0, 2 * math.pi, allow_nan=False)), min_size=1, max_size=40)


def test_single_left_interval():
    assert count_k_cliques_line([HalfInterval("left", 0.0)], 1) == 1


def test_two_opposite_intervals_tight():
    fam = [HalfInterval("left", 0.0), HalfInterval("right", 1.0)]
    assert count_k_cliques_line(fam, 1) == 2


def test_interval_validation():
    with pytest.raises(ValueError):
        HalfInterval("up", 0.0)
    with pytest.raises(ValueError):
        HalfInterval("left", math.inf)


@settings(max_examples=200, deadline=None)
@given(half_intervals)
def test_line_lemma(fam):
    hist = line_clique_counts(fam)
    assert np.all(hist <= np.arange(len(hist)) + 1)


@settings(max_examples=100, deadline=None)
@given(half_intervals)
def test_lr_signatures_identify_cliques(fam):
    probes = line_probes(fam)
    sig = lr_signatures(fam, probes)
    if not fam:
        return
    cont = np.packbits(np.array([[h.contains(p) for h in fam] for p in probes]), axis=1)
    n_sets = len({row.tobytes() for row in cont})
    n_sigs = len({tuple(s) for s in sig})
    assert n_sets == n_sigs


@settings(max_examples=100, deadline=None)
@given(half_intervals)
def test_line_probe_density(fam):
    assert np.array_equal(line_clique_counts(fam), line_clique_counts(fam, density=2))


def test_three_spread_half_circles():
    fam = [HalfCircle(math.radians(a)) for a in (0, 120, 240)]
    assert count_k_cliques_circle(fam, 1) == 3
    assert count_k_cliques_circle(fam, 1) > 1 + 1


def test_single_half_circle():
    assert count_k_cliques_circle([HalfCircle(1.0)], 1) == 1


@settings(max_examples=200, deadline=None)
@given(half_circles)
def test_circle_lemma(fam):
    hist = circle_clique_counts(fam)
    n = len(fam)
    for k, c in enumerate(hist):
        if n > 3 * k:
            assert c <= k + 1


@settings(max_examples=100, deadline=None)
@given(half_circles)
def test_circle_probe_density(fam):
    assert np.array_equal(circle_clique_counts(fam), circle_clique_counts(fam, density=2))


def test_half_circle_closed_at_endpoints():
    h = HalfCircle(0.0)
    probes = np.array([math.pi / 2, 3 * math.pi / 2, math.pi])
    assert circle_containment([h], probes)[:, 0].tolist() == [True, True, False]
    assert len(circle_probes([h])) == 4


def test_half_circles_on_coordinate_equator(coord_graph):
    # the pole lies on the other two circles, so no half-circle remains
    v = next(v.id for v in coord_graph.vertices if np.allclose(v.position, [0, 0, 1]))
    assert half_circles_of_vertex(coord_graph, v, 2) == []
    assert min_coverage_depth([]) == 0 == levels.zone_distance(coord_graph, v, 2)


def test_half_circles_precondition(coord_graph):
    v = next(v.id for v in coord_graph.vertices if np.allclose(v.position, [1, 0, 0]))
    with pytest.raises(PreconditionError):
        half_circles_of_vertex(coord_graph, v, 2)


@pytest.mark.parametrize("graph", list(random_graphs(6, [4, 6, 8], seed=31)), ids=lambda g: f"n{g.n}")
def test_half_circles_match_zone_distance(graph):
    from greatlevels.arrangement import circle_frame

    n = graph.n
    for v in graph.vertices:
        for c in range(n):
            if c in v.circles:
                continue
            fam = half_circles_of_vertex(graph, v.id, c)
            assert len(fam) == n - 3
            e1, e2 = circle_frame(graph.arr.normals[c])
            for h, dcirc in zip(fam, [x for x in range(n) if x != c and x not in v.circles]):
                # each half-circle ends at the two crossings with its circle
                for end in h.endpoints():
                    x = math.cos(end) * e1 + math.sin(end) * e2
                    assert abs(graph.arr.normals[dcirc] @ x) < 1e-9
                # and its centre is separated from v
                xc = math.cos(h.center_angle) * e1 + math.sin(h.center_angle) * e2
                assert np.sign(graph.arr.normals[dcirc] @ xc) != graph.vertex_signs[v.id, dcirc]
            assert min_coverage_depth(fam) == levels.zone_distance(graph, v.id, c)
