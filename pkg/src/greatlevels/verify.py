"""Invariant and bound checks over built arrangements.

Every check yields a :class:`Check` carrying the worst observed value and
the bound it was compared with.  Checks with ``asserted=False`` are
reported but never fail a run.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import levels
from .arrangement import ArrangementGraph, cells_touching, expected_counts
from .cliques import circle_clique_counts, half_circles_of_vertex, min_coverage_depth


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    observed: float
    bound: float
    detail: str = ""
    asserted: bool = True

    def line(self) -> str:
        tag = ("PASS" if self.passed else "FAIL") if self.asserted else "INFO"
        out = f"[{tag}] {self.name}: observed {self.observed:.12g} vs bound {self.bound:.12g}"
        return f"{out} ({self.detail})" if self.detail else out


def check_structure(graph: ArrangementGraph) -> list[Check]:
    n = graph.n
    v, e, f = len(graph.vertices), len(graph.arcs), len(graph.cells)
    ev, ee, ef = expected_counts(n)
    euler = v - e + f
    return [
        Check("vertices", v == ev, v, ev, "exact"),
        Check("arcs", e == ee, e, ee, "exact"),
        Check("cells", f == ef, f, ef, "exact"),
        Check("euler", euler == 2, euler, 2, "V - E + F"),
    ]


def check_distance_oracle(graph: ArrangementGraph) -> Check:
    d = levels.distance_matrix(graph)
    bfs = levels.cell_distances(graph)
    oracle = bfs[graph.vertex_cells].min(axis=1)  # (V, F)
    mismatches = int(np.count_nonzero(oracle != d))
    return Check("distance_oracle", mismatches == 0, mismatches, 0, f"{d.size} vertex-cell pairs")


def check_antipodal_profiles(graph: ArrangementGraph) -> Check:
    table = levels.level_table(graph)
    bad = sum(1 for f in range(len(graph.cells)) if not np.array_equal(table[f], table[graph.antipodal_cell(f)]))
    return Check("antipodal_profiles", bad == 0, bad, 0, "cells whose antipode has another profile")


def check_expected_level(graph: ArrangementGraph, kmax: int | None = None) -> list[Check]:
    n = graph.n
    exp = levels.expected_level(graph)
    out = []
    for k, e in enumerate(exp):
        if kmax is not None and k > kmax:
            break
        bound = levels.expected_level_bound(k)
        # the bound is only claimed for k < n/3
        asserted = 3 * k < n
        out.append(Check(f"expected_level k={k}", float(e) <= bound, float(e), bound, f"E_k = {e}", asserted))
    return out


def check_pairs(graph: ArrangementGraph, kmax: int | None = None) -> list[Check]:
    n = graph.n
    kmax = n - 2 if kmax is None else kmax
    out = []
    for k in range(kmax + 1):
        worst = max(levels.pairs_count(graph, c, s, k) for c in range(n) for s in (1, -1))
        bound = levels.pairs_bound(k, n)
        out.append(Check(f"pairs k={k}", worst <= bound, worst, bound, "max over hemispheres"))
    return out


def check_pairs_cover_levels(graph: ArrangementGraph) -> Check:
    """Every vertex-cell pair at distance k >= 1 is counted by some hemisphere."""
    n = graph.n
    totals = levels.level_table(graph).sum(axis=0)
    worst = 0
    for k in range(1, n):
        covered = sum(levels.pairs_count(graph, c, s, k) for c in range(n) for s in (1, -1))
        worst = max(worst, int(totals[k]) - covered)
    return Check("pairs_cover_levels", worst <= 0, worst, 0, "max of level total minus hemisphere pair total")


def _admissible_b(graph: ArrangementGraph, kmax: int):
    n = graph.n
    zone = levels.zone_distances(graph)
    for c in range(n):
        for s in (1, -1):
            side_ok = graph.vertex_signs[:, c] != -s
            for v in np.flatnonzero(side_ok):
                zd = 0 if c in graph.vertices[v].circles else zone[v, c]
                for k in range(max(1, zd + 1), kmax + 1):
                    yield int(v), c, s, k


def b_set_worst_excess(graph: ArrangementGraph, kmax: int) -> tuple[int, tuple]:
    """Largest |B(v)| - k over admissible (v, C, s, k), with a witness."""
    d = levels.distance_matrix(graph)
    worst, witness = -(10**9), ()
    for v, c, s, k in _admissible_b(graph, kmax):
        cells = sorted(cells_touching(graph, c, -s))
        size = int(np.count_nonzero(d[v, cells] == k))
        if size - k > worst:
            worst, witness = size - k, (v, c, s, k, size)
    return worst, witness


def separating_set_count(graph: ArrangementGraph, v: int, c: int, s: int, k: int) -> int:
    """Distinct sets of circles (other than C and those through v) that separate
    v from the cells of its B-set."""
    cells = levels.b_set(graph, v, c, s, k)
    mask = np.ones(graph.n, dtype=bool)
    mask[c] = False
    mask[list(graph.vertices[v].circles)] = False
    vs = graph.vertex_signs[v]
    seen = {tuple(np.flatnonzero(mask & (graph.cell_signs[f] != vs))) for f in cells}
    return len(seen)


def check_b_sets(graph: ArrangementGraph, kmax: int | None = None) -> list[Check]:
    n = graph.n
    kmax = n - 2 if kmax is None else kmax
    excess, witness = b_set_worst_excess(graph, kmax)
    literal = Check(
        "b_set_literal",
        excess <= 0,
        excess,
        0,
        "max |B(v)| - k; cells split by circles through v are counted separately"
        + (f"; worst (v, C, s, k, |B|) = {witness}" if witness else ""),
        asserted=False,
    )
    worst = -(10**9)
    for v, c, s, k in _admissible_b(graph, kmax):
        if graph.vertex_signs[v, c] == 0:
            continue
        n_family = n - 3
        if n_family <= 3 * (k - 1):
            continue
        worst = max(worst, separating_set_count(graph, v, c, s, k) - k)
    cliques = Check(
        "b_set_cliques",
        worst <= 0,
        max(worst, 0) if worst > -(10**9) else 0,
        0,
        "max distinct separating sets - k, strict-side v, n-3 > 3(k-1)",
    )
    return [literal, cliques]


def check_zones(graph: ArrangementGraph) -> list[Check]:
    n = graph.n
    worst_strict, worst_both = 0.0, 0.0
    ok = True
    for c in range(n):
        prof = levels.zone_profile(graph, c)
        for j in range(n + 1):
            bs, bb = levels.zone_bound_strict(j, n), levels.zone_bound_both(j, n)
            for val in (prof.strict_pos[j], prof.strict_neg[j]):
                worst_strict = max(worst_strict, val / bs)
                ok &= val <= bs
            worst_both = max(worst_both, prof.both[j] / bb)
            ok &= prof.both[j] <= bb
        if prof.both[n] != len(graph.vertices):
            ok = False
    return [
        Check("zone_strict", worst_strict <= 1, worst_strict, 1.0, "max count / 2e(j+2)n"),
        Check("zone_both", worst_both <= 1, worst_both, 1.0, "max count / 4e(j+2)n"),
        Check("zone_complete", ok, float(ok), 1.0, "all zone bounds and full zone at j = n"),
    ]


def check_zone_depth(graph: ArrangementGraph) -> list[Check]:
    n = graph.n
    zone = levels.zone_distances(graph)
    mismatches, lemma_excess = 0, -(10**9)
    for v in range(len(graph.vertices)):
        for c in range(n):
            if graph.vertex_signs[v, c] == 0:
                continue
            fam = half_circles_of_vertex(graph, v, c)
            if min_coverage_depth(fam) != zone[v, c]:
                mismatches += 1
            hist = circle_clique_counts(fam)
            for k in range(len(hist)):
                if len(fam) > 3 * k:
                    lemma_excess = max(lemma_excess, int(hist[k]) - (k + 1))
    return [
        Check("zone_depth", mismatches == 0, mismatches, 0, "zone distance vs min half-circle depth"),
        Check("circle_lemma_on_vertices", lemma_excess <= 0, max(lemma_excess, 0), 0, "max k-cliques - (k+1)"),
    ]


def check_zone_vs_cells(graph: ArrangementGraph) -> Check:
    zone = levels.zone_distances(graph)
    d = levels.distance_matrix(graph)
    bad = 0
    for c in range(graph.n):
        cells = sorted(cells_touching(graph, c, 1) | cells_touching(graph, c, -1))
        bad += int(np.count_nonzero(zone[:, c][:, None] > d[:, cells]))
    return Check("zone_le_cell_distance", bad == 0, bad, 0, "violations")


def run_suite(graph: ArrangementGraph, kmax: int | None = None) -> list[Check]:
    checks = []
    checks += check_structure(graph)
    checks.append(check_distance_oracle(graph))
    checks.append(check_antipodal_profiles(graph))
    checks += check_expected_level(graph)
    checks += check_pairs(graph, kmax)
    checks.append(check_pairs_cover_levels(graph))
    checks += check_b_sets(graph, kmax)
    checks += check_zones(graph)
    checks += check_zone_depth(graph)
    checks.append(check_zone_vs_cells(graph))
    return checks
