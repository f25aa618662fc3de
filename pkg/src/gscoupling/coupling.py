"""The graph-signal coupling: blended signal/distance dissimilarity, threshold
evaluation, one-parameter threshold families, and the graph <-> family <->
sequence conversion maps with their round-trip identity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graphs import (
    DistanceMatrix,
    Graph,
    all_pairs,
    all_pairs_distances,
    complete_graph,
    pair_count,
)

Edge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class SignalSet:
    """An ordered finite set of real signals on the vertices of a base graph,
    stored row-wise (one signal per row)."""

    base: Graph
    signals: np.ndarray

    def __post_init__(self):
        sig = np.asarray(self.signals, dtype=float)
        if sig.ndim != 2:
            sig = sig.reshape(1, -1) if sig.ndim == 1 else sig
        if sig.ndim != 2 or sig.shape[1] != self.base.n:
            raise ValueError(
                f"signals must have shape (k, {self.base.n}), got {np.shape(self.signals)}"
            )
        object.__setattr__(self, "signals", sig)

    @property
    def k(self) -> int:
        return self.signals.shape[0]

    @property
    def n(self) -> int:
        return self.base.n


@dataclass(frozen=True)
class ParamPoint:
    """A threshold plus one nonnegative scale weight per signal."""

    x0: float
    xs: tuple[float, ...]

    def __post_init__(self):
        if self.x0 < 0 or any(w < 0 for w in self.xs):
            raise ValueError("parameter components must be nonnegative")


@dataclass(frozen=True)
class OneParamFamily:
    """A nested threshold filtration of graphs.

    Segment j of the threshold axis is [b_j, b_{j+1}) with b_0 = 0 and the
    last segment unbounded; ``graphs[j]`` is the graph realized on segment j.
    The graphs are strictly nested, which makes the image and the per-graph
    segment measures directly inspectable.
    """

    n: int
    breakpoints: tuple[float, ...]
    graphs: tuple[Graph, ...]

    def __post_init__(self):
        if len(self.graphs) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one graph per threshold segment")
        prev = 0.0
        for b in self.breakpoints:
            if not (b > prev):
                raise ValueError("breakpoints must be strictly increasing and positive")
            prev = b
        for g in self.graphs:
            if g.n != self.n:
                raise ValueError("all graphs in a family must share the vertex count")
        for a, b in zip(self.graphs, self.graphs[1:]):
            if not (a.edge_set < b.edge_set):
                raise ValueError("family graphs must be strictly nested")

    @cached_property
    def reaches_complete(self) -> bool:
        return self.graphs[-1] == complete_graph(self.n)

    def segments(self) -> list[tuple[float, float, Graph]]:
        """(lo, hi, graph) triples; the last hi is inf."""
        lows = (0.0,) + self.breakpoints
        highs = self.breakpoints + (math.inf,)
        return [(lo, hi, g) for lo, hi, g in zip(lows, highs, self.graphs)]

    def image(self) -> tuple[Graph, ...]:
        return self.graphs

    def interior_segments(self) -> list[tuple[Graph, float]]:
        """(graph, segment measure) for image graphs other than the complete
        graph; measure is the Lebesgue length of the graph's threshold
        segment."""
        kn = complete_graph(self.n)
        out = []
        for lo, hi, g in self.segments():
            if g == kn:
                continue
            out.append((g, hi - lo))
        return out

    def threshold_of(self, u: int, v: int) -> float:
        """Infimum threshold at which the pair (u, v) is an edge."""
        if u > v:
            u, v = v, u
        for j, g in enumerate(self.graphs):
            if (u, v) in g.edge_set:
                return 0.0 if j == 0 else self.breakpoints[j - 1]
        raise ValueError(f"pair ({u},{v}) never becomes an edge in this family")


@dataclass(frozen=True, eq=False)
class PairSequence:
    """All distinct vertex pairs ordered by ascending signal difference,
    ties broken lexicographically; runs of equal values are recorded."""

    pairs: tuple[Edge, ...]
    deltas: np.ndarray
    tie_groups: tuple[tuple[int, int], ...]  # half-open 0-based runs


def delta_matrix(base: Graph, fs: SignalSet, weights) -> np.ndarray:
    """Pairwise sqrt( sum_i w_i (f_i(u)-f_i(v))^2 + d(u,v)^2 ).

    The degenerate base contributes zero distance everywhere; any other base
    must be connected so that distances are finite.
    """
    if fs.n != base.n:
        raise ValueError("signal length does not match the base graph")
    w = np.asarray(weights, dtype=float)
    if w.shape != (fs.k,):
        raise ValueError(f"need {fs.k} weights, got shape {w.shape}")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    dm = all_pairs_distances(base)
    if not base.degenerate and not dm.is_connected:
        raise ValueError("base graph must be connected (or the degenerate base)")
    acc = dm.values**2
    for wi, f in zip(w, fs.signals):
        if wi == 0.0:
            continue
        diff = f[:, None] - f[None, :]
        acc = acc + wi * diff**2
    return np.sqrt(acc)


def delta(base: Graph, fs: SignalSet, x: ParamPoint, u: int, v: int) -> float:
    if u == v:
        raise ValueError("pair must consist of distinct vertices")
    dm = delta_matrix(base, fs, x.xs)
    return float(dm[u - 1, v - 1])


def evaluate_coupling(base: Graph, fs: SignalSet, x: ParamPoint) -> Graph:
    """The coupling graph at one parameter point: edges are the pairs whose
    blended dissimilarity is at most the threshold x0."""
    dm = delta_matrix(base, fs, x.xs)
    edges = tuple((u, v) for u, v in all_pairs(base.n) if dm[u - 1, v - 1] <= x.x0)
    return Graph(base.n, edges)


def _family_from_values(n: int, value) -> OneParamFamily:
    """Threshold filtration of a symmetric pairwise value matrix."""
    vals = sorted({float(value[u - 1, v - 1]) for u, v in all_pairs(n)})
    positive = tuple(v for v in vals if v > 0.0)
    thresholds = (0.0,) + positive
    graphs = tuple(
        Graph(n, tuple((u, v) for u, v in all_pairs(n) if value[u - 1, v - 1] <= t))
        for t in thresholds
    )
    return OneParamFamily(n, positive, graphs)


def star_family(f) -> OneParamFamily:
    """The pure-signal filtration: pairs enter at their absolute signal
    difference. For a constant signal the image is just the complete graph."""
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size < 1:
        raise ValueError("signal must be a nonempty vector")
    diff = np.abs(f[:, None] - f[None, :])
    return _family_from_values(f.size, diff)


def constant_family(g: Graph) -> OneParamFamily:
    """The distance filtration of a connected graph: its image is the
    power-graph sequence and the breakpoints are 1..diameter."""
    dm = all_pairs_distances(g)
    if not dm.is_connected:
        raise ValueError("distance filtration requires a connected graph")
    if g.n == 1:
        return OneParamFamily(1, (), (Graph(1, ()),))
    return _family_from_values(g.n, dm.values)


def pair_sequence(f) -> PairSequence:
    f = np.asarray(f, dtype=float)
    if f.size < 2:
        raise ValueError("need at least two vertices")
    items = sorted(
        (abs(float(f[u - 1] - f[v - 1])), (u, v)) for u, v in all_pairs(f.size)
    )
    deltas = np.array([d for d, _ in items])
    pairs = tuple(p for _, p in items)
    groups = []
    start = 0
    for i in range(1, len(items) + 1):
        if i == len(items) or deltas[i] != deltas[start]:
            groups.append((start, i))
            start = i
    return PairSequence(pairs, deltas, tuple(groups))


def tau_graph_to_metric(g: Graph) -> DistanceMatrix:
    dm = all_pairs_distances(g)
    if not dm.is_connected:
        raise ValueError("metric conversion requires a connected graph")
    return dm


def tau_metric_to_family(metric) -> OneParamFamily:
    """Threshold filtration of a finite (pseudo)metric given as a matrix."""
    m = metric.values if isinstance(metric, DistanceMatrix) else np.asarray(metric, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("metric must be a square matrix")
    if np.any(np.diag(m) != 0) or not np.array_equal(m, m.T):
        raise ValueError("metric must be symmetric with zero diagonal")
    return _family_from_values(m.shape[0], m)


def tau_family_to_sequence(fam: OneParamFamily) -> tuple[Graph, ...]:
    """The image of a family as a sequence ordered by edge count."""
    return tuple(sorted(fam.graphs, key=lambda g: g.edge_count))


def tau_sequence_to_graph(seq) -> Graph:
    """First graph of a one-element sequence, second graph otherwise."""
    seq = tuple(seq)
    if not seq:
        raise ValueError("empty graph sequence")
    return seq[0] if len(seq) == 1 else seq[1]


def tau_roundtrip(g: Graph) -> Graph:
    """Graph -> metric -> threshold family -> edge-count-ordered sequence ->
    graph; the composite is the identity on connected graphs."""
    return tau_sequence_to_graph(
        tau_family_to_sequence(tau_metric_to_family(tau_graph_to_metric(g)))
    )


def compose_coupling(base: Graph, fs1: SignalSet, fs2: SignalSet, x0: float, y, z) -> Graph:
    """Couple a second signal set onto an already-coupled family.

    The first stage contributes, per pair, the threshold at which the pair
    appears in the stage-one coupling (its blended dissimilarity); the second
    stage adds its own weighted squared signal differences on top.
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if y.shape != (fs1.k,) or z.shape != (fs2.k,):
        raise ValueError("weight lengths must match the two signal sets")
    d1 = delta_matrix(base, fs1, y)
    acc = d1**2
    for wl, f in zip(z, fs2.signals):
        if wl == 0.0:
            continue
        diff = f[:, None] - f[None, :]
        acc = acc + wl * diff**2
    d2 = np.sqrt(acc)
    edges = tuple((u, v) for u, v in all_pairs(base.n) if d2[u - 1, v - 1] <= x0)
    return Graph(base.n, edges)


def merge_signal_sets(fs1: SignalSet, y, fs2: SignalSet, z) -> tuple[SignalSet, np.ndarray]:
    """Set union of two signal sets with additive weights: a signal present
    in both collections appears once and carries the sum of its weights."""
    if fs1.base != fs2.base:
        raise ValueError("signal sets must share the base graph")
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    rows: list[np.ndarray] = []
    weights: list[float] = []
    for sig, w in zip(np.vstack([fs1.signals, fs2.signals]), np.concatenate([y, z])):
        for i, existing in enumerate(rows):
            if np.array_equal(existing, sig):
                weights[i] += float(w)
                break
        else:
            rows.append(sig)
            weights.append(float(w))
    merged = SignalSet(fs1.base, np.array(rows).reshape(len(rows), fs1.n))
    return merged, np.array(weights)


def families_equivalent(a: OneParamFamily, b: OneParamFamily) -> bool:
    """Decidable special case of family equivalence: identical graph
    sequences up to a monotone reparametrization of the breakpoints."""
    return a.n == b.n and a.graphs == b.graphs


def pairwise_thresholds(fam: OneParamFamily) -> np.ndarray:
    """Matrix of first-appearance thresholds for every pair (zero diagonal)."""
    out = np.zeros((fam.n, fam.n))
    for u, v in all_pairs(fam.n):
        t = fam.threshold_of(u, v)
        out[u - 1, v - 1] = t
        out[v - 1, u - 1] = t
    return out


def pair_slot(u: int, v: int, n: int) -> int:
    """0-based index of the canonical pair (u,v) in lexicographic order."""
    if u > v:
        u, v = v, u
    return (u - 1) * n - u * (u + 1) // 2 + v - 1


def graph_pair_mask(g: Graph) -> np.ndarray:
    """Edge membership over the canonical pair slots, as a boolean vector."""
    mask = np.zeros(pair_count(g.n), dtype=bool)
    for u, v in g.edges:
        mask[pair_slot(u, v, g.n)] = True
    return mask
