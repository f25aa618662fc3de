"""Unweighted simple graphs on 1-based vertices, hop distances, power-graph
sequences, Hamming metrics, and the standard generators used by the rest of
the package."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph. Edges are canonical (u < v) and sorted.

    ``degenerate`` marks the all-distances-zero graph used as the base of a
    pure signal filtration; it is carried as metadata and does not take part
    in equality (a degenerate graph compares equal to the complete graph with
    the same edge set).
    """

    n: int
    edges: tuple[Edge, ...]
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be >= 1, got {self.n}")
        prev = None
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge {e} is not canonical for n={self.n}")
            if prev is not None and e <= prev:
                raise ValueError(f"edges not sorted/unique at {e}")
            prev = e

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u - 1, v - 1] = 1.0
            a[v - 1, u - 1] = 1.0
        return a

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Pairwise hop counts; ``np.inf`` marks unreachable pairs."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def distance(self, u: int, v: int) -> float:
        return float(self.values[u - 1, v - 1])

    @property
    def is_connected(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    @property
    def max_finite(self) -> int:
        finite = self.values[np.isfinite(self.values)]
        return int(finite.max()) if finite.size else 0


def all_pairs(n: int):
    """Distinct vertex pairs in canonical lexicographic order."""
    return itertools.combinations(range(1, n + 1), 2)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def build_graph(n: int, edge_list) -> Graph:
    """Canonicalize an edge list into a Graph, rejecting self-loops,
    duplicates, and out-of-range endpoints."""
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    seen = set()
    canon = []
    for u, v in edge_list:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise ValueError(f"duplicate edge {e}")
        seen.add(e)
        canon.append(e)
    return Graph(n, tuple(sorted(canon)))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(all_pairs(n)))


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """BFS hop distances from every vertex."""
    if g.degenerate:
        return DistanceMatrix(np.zeros((g.n, g.n)))
    adj = g.neighbors()
    d = np.full((g.n, g.n), np.inf)
    for s in range(1, g.n + 1):
        d[s - 1, s - 1] = 0.0
        q = deque([s])
        while q:
            u = q.popleft()
            du = d[s - 1, u - 1]
            for w in adj[u]:
                if not np.isfinite(d[s - 1, w - 1]):
                    d[s - 1, w - 1] = du + 1.0
                    q.append(w)
    return DistanceMatrix(d)


def is_connected(g: Graph) -> bool:
    if g.degenerate or g.n == 1:
        return True
    adj = g.neighbors()
    seen = {1}
    q = deque([1])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == g.n


def diameter(g: Graph) -> int:
    dm = all_pairs_distances(g)
    if not dm.is_connected:
        raise ValueError("diameter is undefined for a disconnected graph")
    return dm.max_finite


def power_graph_sequence(g: Graph) -> list[Graph]:
    """Graphs whose edges are the pairs at hop distance <= k, for k from 0
    up to the diameter. The first has no edges, the last is complete."""
    dm = all_pairs_distances(g)
    if not dm.is_connected:
        raise ValueError("power-graph sequence requires a connected graph")
    d_max = dm.max_finite
    out = []
    for k in range(d_max + 1):
        edges = tuple(
            (u, v) for u, v in all_pairs(g.n) if dm.values[u - 1, v - 1] <= k
        )
        out.append(Graph(g.n, edges))
    return out


def hamming(g1: Graph, g2: Graph) -> int:
    """Number of edges contained in exactly one of the two graphs."""
    if g1.n != g2.n:
        raise ValueError(f"size mismatch: {g1.n} vs {g2.n}")
    return len(g1.edge_set ^ g2.edge_set)


def hamming_to_set(g: Graph, gs) -> int:
    gs = list(gs)
    if not gs:
        raise ValueError("Hamming distance to an empty set of graphs")
    return min(hamming(g, h) for h in gs)


def graph_union(g1: Graph, g2: Graph) -> Graph:
    if g1.n != g2.n:
        raise ValueError(f"size mismatch: {g1.n} vs {g2.n}")
    return Graph(g1.n, tuple(sorted(g1.edge_set | g2.edge_set)))


def _path(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def _cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, tuple(sorted([(i, i + 1) for i in range(1, n)] + [(1, n)])))


def _lattice2d(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise ValueError("lattice dimensions must be positive")
    edges = []
    vid = lambda r, c: (r - 1) * cols + c
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            if c < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(rows * cols, tuple(sorted(edges)))


def knn_graph(points: np.ndarray, k: int, rule: str = "union") -> Graph:
    """k-nearest-neighbour graph under Euclidean distance.

    ``rule='union'`` connects u,v when either is among the other's k nearest
    (``'mutual'`` requires both). Points tied with the k-th nearest distance
    are all included, which keeps the construction deterministic without an
    arbitrary cut inside a tie group.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two points, shape (m, d)")
    if k < 1:
        raise ValueError("k must be >= 1")
    if rule not in ("union", "mutual"):
        raise ValueError(f"unknown symmetrization rule {rule!r}")
    m = pts.shape[0]
    diffs = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diffs**2).sum(axis=2))
    nn: list[set] = []
    for i in range(m):
        order = sorted((dist[i, j], j) for j in range(m) if j != i)
        cutoff = order[min(k, m - 1) - 1][0]
        nn.append({j for d, j in order if d <= cutoff})
    edges = set()
    for i in range(m):
        for j in range(i + 1, m):
            if rule == "union":
                keep = (j in nn[i]) or (i in nn[j])
            else:
                keep = (j in nn[i]) and (i in nn[j])
            if keep:
                edges.add((i + 1, j + 1))
    return Graph(m, tuple(sorted(edges)))


def trivial_graph(n: int) -> Graph:
    """The degenerate base where every pair is at distance zero."""
    if n < 1:
        raise ValueError("vertex count must be >= 1")
    return Graph(n, tuple(all_pairs(n)), degenerate=True)


def generate(kind: str, **params) -> Graph:
    """Standard generators: path(n), cycle(n), complete(n),
    lattice2d(rows, cols), knn(points, k[, rule]), trivial(n)."""
    if kind == "path":
        n = int(params["n"])
        if n < 1:
            raise ValueError("path needs n >= 1")
        return _path(n)
    if kind == "cycle":
        return _cycle(int(params["n"]))
    if kind == "complete":
        n = int(params["n"])
        if n < 1:
            raise ValueError("complete needs n >= 1")
        return complete_graph(n)
    if kind == "lattice2d":
        return _lattice2d(int(params["rows"]), int(params["cols"]))
    if kind == "knn":
        return knn_graph(params["points"], int(params["k"]), params.get("rule", "union"))
    if kind == "trivial":
        return trivial_graph(int(params["n"]))
    raise ValueError(f"unknown graph kind {kind!r}")
