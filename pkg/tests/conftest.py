import numpy as np
import pytest

from gscoupling.graphs import Graph, all_pairs, build_graph


@pytest.fixture
def paw() -> Graph:
    """Triangle with a pendant edge; diameter 2, Laplacian spectrum 0,1,3,4."""
    return build_graph(4, [(1, 2), (1, 3), (2, 3), (3, 4)])


@pytest.fixture
def paw_eigenvectors() -> list[np.ndarray]:
    """Exact orthonormal Laplacian eigenvectors of the paw graph, ascending
    eigenvalue order (0, 1, 3, 4)."""
    return [
        np.ones(4) / 2.0,
        np.array([-1.0, -1.0, 0.0, 2.0]) / np.sqrt(6.0),
        np.array([1.0, -1.0, 0.0, 0.0]) / np.sqrt(2.0),
        np.array([1.0, 1.0, -3.0, 1.0]) / np.sqrt(12.0),
    ]


@pytest.fixture
def f2() -> np.ndarray:
    return np.array([-1.0, -1.0, 0.0, 2.0]) / np.sqrt(6.0)


def random_connected_graph(rng: np.random.Generator, n: int, extra_p: float = 0.3) -> Graph:
    """Random spanning tree plus independent extra edges."""
    edges = set()
    for v in range(2, n + 1):
        u = int(rng.integers(1, v))
        edges.add((u, v))
    for u, v in all_pairs(n):
        if (u, v) not in edges and rng.random() < extra_p:
            edges.add((u, v))
    return Graph(n, tuple(sorted(edges)))


def make_interlacing_pair(rng: np.random.Generator, n: int):
    """Sample g sorted ascending, centered, nonzero, and f threading between
    consecutive entries of g with the endpoint condition satisfied."""
    while True:
        g = np.sort(rng.standard_normal(n))
        g = g - g.mean()
        if np.linalg.norm(g) > 1e-6 and g[0] < 0 < g[-1]:
            break
    f = np.empty(n)
    for i in range(n - 1):
        f[i] = rng.uniform(g[i], g[i + 1])
    f[n - 1] = g[n - 1] + abs(rng.standard_normal())
    if f[0] * g[0] + f[n - 1] * g[n - 1] < 0:
        f[0] = g[0]
    shift = float(rng.standard_normal())
    return f - shift, g


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
