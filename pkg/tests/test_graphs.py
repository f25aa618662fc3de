import math

import numpy as np
import pytest

from gscoupling.graphs import (
    Graph,
    all_pairs,
    all_pairs_distances,
    build_graph,
    complete_graph,
    diameter,
    empty_graph,
    generate,
    graph_union,
    hamming,
    hamming_to_set,
    is_connected,
    knn_graph,
    power_graph_sequence,
    trivial_graph,
)

from conftest import random_connected_graph


def floyd_warshall(g: Graph) -> np.ndarray:
    """Independent distance oracle."""
    d = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in g.edges:
        d[u - 1, v - 1] = d[v - 1, u - 1] = 1.0
    for k in range(g.n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


class TestBuildGraph:
    def test_path3(self):
        g = build_graph(3, [(1, 2), (2, 3)])
        assert g.edges == ((1, 2), (2, 3))

    def test_paw(self, paw):
        assert paw.n == 4
        assert paw.edges == ((1, 2), (1, 3), (2, 3), (3, 4))

    def test_canonicalizes_order(self):
        g = build_graph(3, [(3, 1), (2, 1)])
        assert g.edges == ((1, 2), (1, 3))

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            build_graph(2, [(1, 1)])

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            build_graph(3, [(1, 2), (2, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            build_graph(3, [(1, 4)])

    def test_equality_by_n_and_edges(self):
        assert build_graph(3, [(1, 2)]) == build_graph(3, [(2, 1)])
        assert build_graph(3, [(1, 2)]) != build_graph(4, [(1, 2)])
        # the degenerate flag is metadata, not identity
        assert trivial_graph(3) == complete_graph(3)


class TestDistances:
    def test_p3(self):
        d = all_pairs_distances(build_graph(3, [(1, 2), (2, 3)]))
        assert d.distance(1, 3) == 2

    def test_paw_hand_bfs(self, paw):
        d = all_pairs_distances(paw)
        assert d.distance(1, 4) == 2
        assert d.distance(2, 4) == 2
        for u, v in paw.edges:
            assert d.distance(u, v) == 1

    def test_disconnected_is_inf(self):
        d = all_pairs_distances(empty_graph(2))
        assert math.isinf(d.distance(1, 2))
        assert not d.is_connected

    def test_against_floyd_warshall(self):
        rng = np.random.default_rng(101)
        for trial in range(120):
            n = int(rng.integers(2, 8))
            edges = [e for e in all_pairs(n) if rng.random() < 0.4]
            g = Graph(n, tuple(sorted(set(edges))))
            got = all_pairs_distances(g).values
            assert np.array_equal(got, floyd_warshall(g))

    def test_metric_properties(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            g = random_connected_graph(rng, int(rng.integers(2, 8)))
            d = all_pairs_distances(g).values
            assert np.array_equal(d, d.T)
            assert np.all(np.diag(d) == 0)
            for i in range(g.n):
                for j in range(g.n):
                    for k in range(g.n):
                        assert d[i, j] <= d[i, k] + d[k, j]


class TestDiameter:
    def test_paw(self, paw):
        assert diameter(paw) == 2

    def test_complete(self):
        for n in (2, 3, 5):
            assert diameter(complete_graph(n)) == 1

    def test_path(self):
        for n in (2, 4, 7):
            assert diameter(generate("path", n=n)) == n - 1

    def test_disconnected_errors(self):
        with pytest.raises(ValueError, match="disconnected"):
            diameter(empty_graph(3))


class TestPowerGraphs:
    def test_paw_sequence(self, paw):
        seq = power_graph_sequence(paw)
        assert seq == [empty_graph(4), paw, complete_graph(4)]

    def test_p3(self):
        p3 = build_graph(3, [(1, 2), (2, 3)])
        assert power_graph_sequence(p3) == [empty_graph(3), p3, complete_graph(3)]

    def test_k3(self):
        k3 = complete_graph(3)
        assert power_graph_sequence(k3) == [empty_graph(3), k3]

    def test_nested_and_shape(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(2, 9)))
            seq = power_graph_sequence(g)
            assert len(seq) == diameter(g) + 1
            assert seq[0] == empty_graph(g.n)
            assert seq[-1] == complete_graph(g.n)
            for a, b in zip(seq, seq[1:]):
                assert a.edge_set < b.edge_set

    def test_disconnected_errors(self):
        with pytest.raises(ValueError):
            power_graph_sequence(empty_graph(3))


class TestHamming:
    def test_identical(self, paw):
        assert hamming(paw, paw) == 0

    def test_vs_empty(self, paw):
        assert hamming(empty_graph(4), paw) == 4

    def test_vs_complete(self, paw):
        assert hamming(paw, complete_graph(4)) == 2

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            hamming(empty_graph(3), empty_graph(4))

    def test_symmetric_zero_iff_equal(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            n = int(rng.integers(2, 7))
            g1 = Graph(n, tuple(sorted(e for e in all_pairs(n) if rng.random() < 0.5)))
            g2 = Graph(n, tuple(sorted(e for e in all_pairs(n) if rng.random() < 0.5)))
            assert hamming(g1, g2) == hamming(g2, g1)
            assert (hamming(g1, g2) == 0) == (g1 == g2)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(17)
        for _ in range(40):
            n = int(rng.integers(2, 7))
            gs = [
                Graph(n, tuple(sorted(e for e in all_pairs(n) if rng.random() < 0.5)))
                for _ in range(3)
            ]
            assert hamming(gs[0], gs[2]) <= hamming(gs[0], gs[1]) + hamming(gs[1], gs[2])


class TestHammingToSet:
    def test_member(self, paw):
        fam = [empty_graph(4), paw, complete_graph(4)]
        assert hamming_to_set(paw, fam) == 0

    def test_single_edge(self, paw):
        fam = [empty_graph(4), paw, complete_graph(4)]
        g = build_graph(4, [(1, 2)])
        # distances 1, 3, 5 attained at the empty graph
        assert hamming_to_set(g, fam) == 1

    def test_triangle_missing_pendant(self, paw):
        fam = [empty_graph(4), paw, complete_graph(4)]
        g = build_graph(4, [(1, 2), (1, 3), (2, 3)])
        assert hamming_to_set(g, fam) == 1

    def test_empty_set_errors(self, paw):
        with pytest.raises(ValueError, match="empty"):
            hamming_to_set(paw, [])


class TestGenerate:
    def test_path(self):
        assert generate("path", n=3).edges == ((1, 2), (2, 3))

    def test_lattice(self):
        g = generate("lattice2d", rows=2, cols=2)
        assert g.n == 4 and g.edge_count == 4

    def test_lattice_bad_dims(self):
        with pytest.raises(ValueError):
            generate("lattice2d", rows=0, cols=3)

    def test_knn_circle(self):
        pts = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        g = generate("knn", points=pts, k=1)
        assert g == generate("cycle", n=4)

    def test_knn_symmetric_min_degree(self):
        rng = np.random.default_rng(23)
        pts = rng.uniform(size=(20, 2))
        g = knn_graph(pts, 3)
        deg = np.zeros(g.n, dtype=int)
        for u, v in g.edges:
            deg[u - 1] += 1
            deg[v - 1] += 1
        assert deg.min() >= 1

    def test_knn_mutual_subset_of_union(self):
        rng = np.random.default_rng(29)
        pts = rng.uniform(size=(15, 2))
        assert knn_graph(pts, 2, "mutual").edge_set <= knn_graph(pts, 2, "union").edge_set

    def test_trivial(self):
        t = trivial_graph(4)
        assert t.degenerate
        assert np.all(all_pairs_distances(t).values == 0.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown"):
            generate("hypercube", n=3)


class TestGraphUnion:
    def test_idempotent(self, paw):
        assert graph_union(paw, paw) == paw

    def test_path_plus_chord_is_cycle(self):
        p4 = generate("path", n=4)
        chord = build_graph(4, [(1, 4)])
        assert graph_union(p4, chord) == generate("cycle", n=4)

    def test_with_empty_and_complete(self, paw):
        assert graph_union(empty_graph(4), complete_graph(4)) == complete_graph(4)

    def test_commutative(self, paw):
        other = build_graph(4, [(1, 4), (2, 4)])
        assert graph_union(paw, other) == graph_union(other, paw)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            graph_union(empty_graph(3), empty_graph(4))


def test_is_connected_basics(paw):
    assert is_connected(paw)
    assert not is_connected(empty_graph(2))
    assert is_connected(Graph(1, ()))
