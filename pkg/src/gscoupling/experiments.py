"""Desk-scale experiment harnesses: the helix example, lattice denoising with
frequency-ordered vs smoothness-ordered band filters, and the coupling
spectrum study on synthetic point clouds. All runs are reproducible from the
(config, seed) pair; per-trial RNG streams are derived from the master seed
and the trial index."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .coupling import ParamPoint, SignalSet, delta_matrix, evaluate_coupling
from .graphs import Graph, all_pairs, graph_union, hamming, is_connected, knn_graph, _lattice2d
from .smoothness import smoothness_value
from .spectral import (
    EigenBasis,
    FilterSpec,
    band_pass,
    eig_sym,
    gft,
    laplacian,
    smoothness_ordered_indices,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Self-describing result bundle: scalars in ``results``, tabular series
    as column/row blocks in ``series``, plus the full config echo."""

    kind: str
    seed: int | None
    config: dict
    results: dict
    series: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "seed": self.seed,
            "config": self.config,
            "results": self.results,
            "series": self.series,
        }


def _series(columns, rows) -> dict:
    return {"columns": list(columns), "rows": [list(r) for r in rows]}


def _pmap(fn, items, threads: int) -> list:
    """Order-preserving map, optionally over a capped worker pool; results
    are deterministic either way because the work items are independent."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def helix_instance(n: int) -> tuple[Graph, np.ndarray]:
    """Cycle graph of n points on the unit circle (helix projection, joined
    by circular-order proximity) with the height along the curve as the
    signal. Needs 5 not dividing n-1 so the projected points stay distinct."""
    if n < 3:
        raise ValueError("need n >= 3")
    if (n - 1) % 5 == 0:
        raise ValueError(
            f"n-1 = {n - 1} is divisible by 5; the projected points would coincide"
        )
    t = 5.0 * np.pi * np.arange(n) / (n - 1)
    angles = np.mod(t, 2.0 * np.pi)
    order = np.argsort(angles, kind="stable")
    edges = set()
    for a, b in zip(order, np.roll(order, -1)):
        u, v = int(a) + 1, int(b) + 1
        edges.add((min(u, v), max(u, v)))
    g = Graph(n, tuple(sorted(edges)))
    if g.edge_count != n or not is_connected(g):
        raise RuntimeError("circular-order construction did not give a cycle")
    return g, t


def energy_fraction(f, basis: EigenBasis, k: int) -> float:
    """Share of the signal's energy captured by its k largest-magnitude
    Fourier coefficients in the given basis."""
    f = np.asarray(f, dtype=float)
    norm = float(np.linalg.norm(f))
    if norm == 0.0:
        raise ValueError("energy fraction is undefined for the zero signal")
    if not (1 <= k <= basis.n):
        raise ValueError(f"k must be in 1..{basis.n}")
    coeffs = np.sort(np.abs(gft(f, basis)))[::-1]
    return float(np.sqrt(np.sum(coeffs[:k] ** 2)) / norm)


def calibrate_threshold(g: Graph, fs: SignalSet, x_scale: float,
                        target_edges: int, tol: int = 0) -> float:
    """Smallest threshold whose coupling graph has an edge count within tol
    of the target. Bisection on the (monotone, piecewise-constant) edge
    count, then snapped down to the exact pair value where the count jumps."""
    if target_edges < 0 or tol < 0:
        raise ValueError("target and tolerance must be nonnegative")
    weights = np.full(fs.k, float(x_scale))
    dm = delta_matrix(g, fs, weights)
    values = np.sort(np.array([dm[u - 1, v - 1] for u, v in all_pairs(g.n)]))
    count = lambda y: int(np.searchsorted(values, y, side="right"))
    lo_count = count(0.0)
    if abs(lo_count - target_edges) <= tol:
        return 0.0
    hi = float(values[-1])
    if count(hi) < target_edges - tol or lo_count > target_edges + tol:
        raise ValueError(
            f"target {target_edges}±{tol} unattainable: edge count ranges "
            f"{lo_count}..{count(hi)}"
        )
    lo = 0.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if count(mid) >= target_edges - tol:
            hi = mid
        else:
            lo = mid
    jump = int(np.searchsorted(values, lo, side="right"))
    y = float(values[jump])
    c = count(y)
    if abs(c - target_edges) > tol:
        raise ValueError(
            f"edge count jumps from {count(lo)} to {c} around y={y!r}; "
            f"target {target_edges}±{tol} is unattainable"
        )
    return y


@dataclass(frozen=True)
class DenoiseConfig:
    rows: int = 8
    cols: int = 8
    sigma: float = 0.3
    m_fraction: float = 0.2
    alpha_grid: tuple[float, ...] = tuple(round(0.1 * i, 1) for i in range(11))
    trials: int = 100
    tuning_trials: int = 20
    seed: int = 7

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("lattice dimensions must be positive")
        if self.sigma <= 0:
            raise ValueError("noise sigma must be positive")
        if self.trials < 1 or self.tuning_trials < 1:
            raise ValueError("need at least one tuning and one test trial")
        m = round(self.m_fraction * self.rows * self.cols)
        if m < 1:
            raise ValueError("m_fraction too small: no retained component")

    @property
    def n(self) -> int:
        return self.rows * self.cols

    @property
    def m(self) -> int:
        return round(self.m_fraction * self.n)


def piecewise_smooth_signal(rng: np.random.Generator, rows: int, cols: int,
                            basis: EigenBasis, order) -> np.ndarray:
    """Builtin clean-image generator: a random combination of the low-order
    basis vectors (order taken in the smoothness sense, i.e. the first
    entries of the ordering permutation) plus a constant bump on a random
    rectangle, normalized to unit RMS."""
    n = rows * cols
    low = max(2, n // 8)
    cols_low = [order[j] - 1 for j in range(low)]
    weights = rng.standard_normal(low)
    img = basis.vectors[:, cols_low] @ weights
    img = img / max(float(np.sqrt(np.mean(img**2))), 1e-30)
    r0, r1 = sorted(rng.integers(0, rows, size=2) + np.array([0, 1]))
    c0, c1 = sorted(rng.integers(0, cols, size=2) + np.array([0, 1]))
    bump = np.zeros((rows, cols))
    bump[r0:r1, c0:c1] = rng.normal(0.0, 0.6)
    img = img + bump.ravel()
    rms = float(np.sqrt(np.mean(img**2)))
    return img / rms if rms > 0 else img


def _tune_alpha(noisy, clean, basis, indices, grid):
    """Pick the (band, identity) coefficient pair with the lowest mean MSE
    over the tuning instances; ties prefer the smaller identity coefficient,
    then the smaller band coefficient."""
    best = None
    for a1 in grid:
        for a0 in grid:
            spec = FilterSpec(indices, (float(a0), float(a1)))
            mse = float(np.mean([
                np.mean((band_pass(x, basis, spec) - c) ** 2)
                for x, c in zip(noisy, clean)
            ]))
            key = (mse, a1, a0)
            if best is None or key < best[0]:
                best = (key, spec)
    return best[1], best[0][0]


def denoise_experiment(cfg: DenoiseConfig, clean_signals=None,
                       threads: int = 1) -> ExperimentReport:
    """Denoise noisy lattice images with a frequency-ordered band filter and
    a smoothness-ordered one, each tuned on held-out tuning trials, and
    compare test MSE."""
    g = _lattice2d(cfg.rows, cfg.cols)
    basis = eig_sym(laplacian(g))
    m = cfg.m
    x_indices = tuple(range(1, m + 1))
    sigma_perm, y_set = smoothness_ordered_indices(g, basis, m)
    y_indices = tuple(sorted(y_set))
    sigma_is_identity = sigma_perm == tuple(range(1, basis.n + 1))
    arms_coincide = set(x_indices) == set(y_indices)

    total = cfg.tuning_trials + cfg.trials
    if clean_signals is not None:
        clean_signals = [np.asarray(s, dtype=float) for s in clean_signals]
        if not clean_signals:
            raise ValueError("empty clean signal set")
        for s in clean_signals:
            if s.shape != (cfg.n,):
                raise ValueError(f"clean signals must have length {cfg.n}")
        clean = [clean_signals[i % len(clean_signals)] for i in range(total)]
    else:
        clean = [
            piecewise_smooth_signal(np.random.default_rng([cfg.seed, i, 0]),
                                    cfg.rows, cfg.cols, basis, sigma_perm)
            for i in range(total)
        ]
    noisy = [
        c + np.random.default_rng([cfg.seed, i, 1]).normal(0.0, cfg.sigma, cfg.n)
        for i, c in enumerate(clean)
    ]

    tune_slice = slice(0, cfg.tuning_trials)
    test_slice = slice(cfg.tuning_trials, total)
    spec_x, tune_mse_x = _tune_alpha(noisy[tune_slice], clean[tune_slice],
                                     basis, x_indices, cfg.alpha_grid)
    spec_y, tune_mse_y = _tune_alpha(noisy[tune_slice], clean[tune_slice],
                                     basis, y_indices, cfg.alpha_grid)

    def _trial_mse(pair):
        x, c = pair
        return (float(np.mean((band_pass(x, basis, spec_x) - c) ** 2)),
                float(np.mean((band_pass(x, basis, spec_y) - c) ** 2)))

    scores = _pmap(_trial_mse, list(zip(noisy[test_slice], clean[test_slice])), threads)
    mse_x = np.array([s[0] for s in scores])
    mse_y = np.array([s[1] for s in scores])

    results = {
        "n": cfg.n,
        "m": m,
        "sigma_is_identity": sigma_is_identity,
        "arms_coincide": arms_coincide,
        "frequency_indices": list(x_indices),
        "smoothness_indices": list(y_indices),
        "alpha_frequency": list(spec_x.alpha),
        "alpha_smoothness": list(spec_y.alpha),
        "tuning_mse_frequency": tune_mse_x,
        "tuning_mse_smoothness": tune_mse_y,
        "mse_frequency_mean": float(mse_x.mean()),
        "mse_frequency_sd": float(mse_x.std(ddof=1)) if len(mse_x) > 1 else 0.0,
        "mse_smoothness_mean": float(mse_y.mean()),
        "mse_smoothness_sd": float(mse_y.std(ddof=1)) if len(mse_y) > 1 else 0.0,
        "wins_smoothness": int(np.sum(mse_y < mse_x)),
        "wins_frequency": int(np.sum(mse_x < mse_y)),
        "ties": int(np.sum(mse_x == mse_y)),
    }
    series = {
        "per_trial_mse": _series(
            ["trial", "mse_frequency", "mse_smoothness"],
            [[int(i), float(a), float(b)]
             for i, (a, b) in enumerate(zip(mse_x, mse_y))],
        ),
        "basis_smoothness": _series(
            ["eigen_index", "smoothness"],
            [[j + 1, smoothness_value(g, basis.vectors[:, j])] for j in range(basis.n)],
        ),
    }
    return ExperimentReport("denoise", cfg.seed, asdict(cfg), results, series)


def spearman_rho(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def ranks(v):
        order = np.argsort(v, kind="stable")
        r = np.empty_like(v)
        i = 0
        while i < len(v):
            j = i
            while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
                j += 1
            r[order[i:j + 1]] = 0.5 * (i + j) + 1.0
            i = j + 1
        return r

    rx, ry = ranks(x), ranks(y)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = float(np.sqrt(np.sum(rx**2) * np.sum(ry**2)))
    if denom == 0.0:
        return 0.0
    return float(np.sum(rx * ry) / denom)


@dataclass(frozen=True)
class SpectrumConfig:
    n_points: int = 60
    k: int = 4
    n_signals: int = 6
    schedule_len: int = 21
    x_max: float | None = None
    edge_tol: int = 0
    k_max: int = 5
    i_star: int | None = None
    signal_noise: float = 0.1
    seed: int = 11

    def __post_init__(self):
        if self.schedule_len < 2:
            raise ValueError("schedule needs at least two steps")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.n_signals < 1:
            raise ValueError("need at least one signal")

    @property
    def mid_index(self) -> int:
        return self.i_star if self.i_star is not None else (self.schedule_len - 1) // 2


def _auto_x_max(g: Graph, fs: SignalSet) -> float:
    """Scale at which the weighted signal terms dominate the squared graph
    distances by about 100x at the median pair."""
    dm = delta_matrix(g, fs, np.zeros(fs.k))
    d2 = np.array([dm[u - 1, v - 1] ** 2 for u, v in all_pairs(g.n)])
    sig2 = np.zeros_like(d2)
    for f in fs.signals:
        diff = f[:, None] - f[None, :]
        sig2 += np.array([diff[u - 1, v - 1] ** 2 for u, v in all_pairs(g.n)])
    med = float(np.median(sig2))
    if med == 0.0:
        raise ValueError("signals carry no pairwise variation; cannot scale the schedule")
    return 100.0 * float(np.median(d2)) / med


def coupling_spectrum_experiment(cfg: SpectrumConfig, points=None, signals=None,
                                 threads: int = 1) -> ExperimentReport:
    """Walk a schedule of coupling graphs from the base geometry toward the
    signal geometry, tracking Hamming drift and the energy concentration of
    the signals in each union graph's eigenbasis."""
    rng = np.random.default_rng([cfg.seed])
    if points is None:
        # deterministic resampling: the builtin cloud retries fresh draws
        # until the k-NN base is connected
        g = None
        for attempt in range(64):
            points = np.random.default_rng([cfg.seed, 0, attempt]).uniform(
                0.0, 1.0, size=(cfg.n_points, 2))
            g = knn_graph(points, cfg.k)
            if is_connected(g):
                break
        else:
            raise ValueError("could not draw a connected k-NN base in 64 attempts")
        n = points.shape[0]
    else:
        points = np.asarray(points, dtype=float)
        n = points.shape[0]
        g = knn_graph(points, cfg.k)
        if not is_connected(g):
            raise ValueError("base k-NN graph is disconnected; adjust the point cloud or k")

    const = np.full(n, 1.0 / math.sqrt(n))
    if signals is None:
        sigs = []
        for _ in range(cfg.n_signals):
            a, b = rng.standard_normal(2)
            f = a * points[:, 0] + b * points[:, 1] + cfg.signal_noise * rng.standard_normal(n)
            sigs.append(f)
        signals = np.array(sigs)
    else:
        signals = np.asarray(signals, dtype=float)
    signals = signals - (signals @ const)[:, None] * const[None, :]
    fs = SignalSet(g, signals)

    x_max = cfg.x_max if cfg.x_max is not None else _auto_x_max(g, fs)
    steps = np.arange(cfg.schedule_len) * (x_max / (cfg.schedule_len - 1))
    target = g.edge_count

    graphs, thresholds = [], []
    for i, x in enumerate(steps):
        if i == 0:
            y = 1.0
            gi = evaluate_coupling(g, fs, ParamPoint(y, tuple([0.0] * fs.k)))
            if gi != g:
                raise RuntimeError("zero-weight coupling did not reproduce the base graph")
        else:
            y = calibrate_threshold(g, fs, float(x), target, cfg.edge_tol)
            gi = evaluate_coupling(g, fs, ParamPoint(y, tuple([float(x)] * fs.k)))
        graphs.append(gi)
        thresholds.append(float(y))

    unions = [graph_union(g, gi) for gi in graphs]
    for h in unions:
        if not is_connected(h):
            raise ValueError("union graph is disconnected; cannot eigendecompose")
    ham_gi = [hamming(g, gi) for gi in graphs]
    ham_hi = [hamming(g, h) for h in unions]

    ks = list(range(1, cfg.k_max + 1))

    def _fractions_for(h):
        basis = eig_sym(laplacian(h))
        block = np.zeros((len(signals), cfg.k_max))
        for j, f in enumerate(signals):
            for k in ks:
                block[j, k - 1] = energy_fraction(f, basis, k)
        return block

    fractions = np.stack(_pmap(_fractions_for, unions, threads))

    i_star = cfg.mid_index
    rel = (fractions[i_star] - fractions[0]) / fractions[0]
    buckets = []
    for k in ks:
        col = rel[:, k - 1]
        buckets.append([int(k),
                        int(np.sum(col >= 0.10)),
                        int(np.sum(col <= -0.10)),
                        int(np.sum(np.abs(col) < 0.10))])

    results = {
        "n_points": n,
        "base_edges": target,
        "x_max": float(x_max),
        "i_star": int(i_star),
        "spearman_hamming_vs_index": spearman_rho(ham_gi, np.arange(cfg.schedule_len)),
        "base_reproduced_at_zero": graphs[0] == g,
        "favor_union_total": int(sum(b[1] for b in buckets)),
        "favor_base_total": int(sum(b[2] for b in buckets)),
    }
    series = {
        "schedule": _series(
            ["index", "signal_scale", "threshold", "hamming_gi", "hamming_hi"],
            [[int(i), float(steps[i]), thresholds[i], ham_gi[i], ham_hi[i]]
             for i in range(cfg.schedule_len)],
        ),
        "mean_energy_fraction": _series(
            ["index"] + [f"k{k}" for k in ks],
            [[int(i)] + [float(fractions[i, :, k - 1].mean()) for k in ks]
             for i in range(cfg.schedule_len)],
        ),
        "relative_change_buckets": _series(
            ["k", "favor_union", "favor_base", "neutral"], buckets,
        ),
    }
    return ExperimentReport("spectrum", cfg.seed, asdict(cfg), results, series)
