import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from transilab import Graph


@pytest.fixture
def two_k3_bridge():
    """Two triangles 0-1-2 and 3-4-5 joined by the edge 2-3."""
    return Graph.from_edges(6, [(0, 1), (0, 2), (1, 2),
                                (3, 4), (3, 5), (4, 5), (2, 3)])


@pytest.fixture
def k5():
    return Graph.from_edges(5, [(i, j) for i in range(5)
                                for j in range(i + 1, 5)])


@pytest.fixture
def two_k4_disconnected():
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i + 4, j + 4) for i in range(4) for j in range(i + 1, 4)]
    return Graph.from_edges(8, edges)


@pytest.fixture
def bridged_k4s():
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i + 4, j + 4) for i in range(4) for j in range(i + 1, 4)]
    edges.append((3, 4))
    return Graph.from_edges(8, edges)
