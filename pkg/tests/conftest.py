import numpy as np
import pytest

from greatlevels.arrangement import build_graph
from greatlevels.sphere_core import GreatSphereArrangement, random_arrangement


def coordinate_arrangement():
    return GreatSphereArrangement(2, np.eye(3))


def random_graphs(count, n_values, seed):
    rng = np.random.default_rng(seed)
    for t in range(count):
        n = n_values[t % len(n_values)]
        yield build_graph(random_arrangement(2, n, rng))


@pytest.fixture(scope="session")
def coord_graph():
    return build_graph(coordinate_arrangement())


@pytest.fixture(scope="session")
def lune_graph():
    return build_graph(GreatSphereArrangement(2, np.eye(3)[:2]))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    order = sorted(RESULTS, key=lambda k: (int(k.rstrip("a")), k))
    for key in order:
        terminalreporter.write_line(RESULTS[key])
