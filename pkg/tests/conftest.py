import numpy as np
import pytest

from hypercore import Hypergraph, toy_fixture

ACCEPTANCE_LINES = []


def random_hypergraph(rng, max_nodes=30, max_edges=40, min_card=2, max_card=8):
    n = int(rng.integers(2, max_nodes + 1))
    m = int(rng.integers(1, max_edges + 1))
    edges = []
    for _ in range(m):
        c = int(rng.integers(min_card, min(max_card, n) + 1))
        edges.append(rng.choice(n, size=c, replace=False).tolist())
    return Hypergraph.from_edges(edges, node_count=n)


@pytest.fixture
def toy():
    return toy_fixture()


@pytest.fixture
def vid(toy):
    """Map a ``vN`` label to its dense id."""
    return toy.node_id


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
