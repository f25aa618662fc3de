"""Dense symmetric eigendecomposition (cyclic Jacobi sweeps), combinatorial
graph Laplacian, graph Fourier transform, band-pass filters, and the
smoothness-ordered index sets that replace the classical low-pass band."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph
from .smoothness import smoothness_value

_SYM_TOL = 1e-12
_CONV_FACTOR = 1e-12
_MAX_SWEEPS = 100
_RESIDUAL_BOUND = 1e-8


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Ascending eigenvalues with orthonormal eigenvectors as columns; each
    vector's first non-negligible entry is positive."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class FilterSpec:
    """Band-pass filter data: retained 1-based eigen indices and the
    (band, identity) mixing coefficients."""

    indices: tuple[int, ...]
    alpha: tuple[float, float] = (1.0, 0.0)

    def __post_init__(self):
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate filter indices")
        for i in self.indices:
            if i < 1:
                raise ValueError(f"filter index {i} out of range")
        if len(self.alpha) != 2:
            raise ValueError("alpha must be a (band, identity) pair")


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian: degree matrix minus adjacency."""
    a = g.adjacency()
    return np.diag(a.sum(axis=1)) - a


def _jacobi(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic-sweep Jacobi diagonalization. Deterministic: fixed row-major
    rotation order and a fixed convergence threshold relative to the input
    Frobenius norm."""
    a = np.array(m, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a, "fro"))
    if n == 1 or scale == 0.0:
        return np.diag(a).copy(), v
    threshold = _CONV_FACTOR * scale
    for _ in range(_MAX_SWEEPS):
        off = float(np.sqrt(max(np.sum(a**2) - np.sum(np.diag(a) ** 2), 0.0)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                # entries far below the convergence threshold cannot affect
                # the result; zeroing them avoids overflow in tau
                if abs(apq) <= 1e-100 * threshold + 5e-324:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    return np.diag(a).copy(), v


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        lead = nz[0] if nz.size else 0
        if col[lead] < 0:
            out[:, j] = -col
    return out


def eig_sym(m: np.ndarray) -> EigenBasis:
    """Eigendecomposition of a symmetric matrix with a deterministic
    ordering and sign convention."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    if np.max(np.abs(m - m.T), initial=0.0) > _SYM_TOL:
        raise ValueError("matrix is not symmetric within 1e-12")
    values, vectors = _jacobi(m)
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = _fix_signs(vectors[:, order])
    scale = float(np.linalg.norm(m, "fro"))
    residual = float(np.max(np.abs(m @ vectors - vectors * values[None, :]), initial=0.0))
    gram_err = float(np.max(np.abs(vectors.T @ vectors - np.eye(m.shape[0]))))
    if residual > _RESIDUAL_BOUND * max(scale, 1.0) or gram_err > _RESIDUAL_BOUND:
        raise RuntimeError("Jacobi sweep did not reach the accuracy contract")
    return EigenBasis(values, vectors)


def gft(f, basis: EigenBasis) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (basis.n,):
        raise ValueError(f"signal must have length {basis.n}")
    return basis.vectors.T @ f


def igft(coeffs, basis: EigenBasis) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.n,):
        raise ValueError(f"coefficients must have length {basis.n}")
    return basis.vectors @ coeffs


def band_pass(f, basis: EigenBasis, spec: FilterSpec) -> np.ndarray:
    """alpha0 * (projection onto the indexed eigenvectors) + alpha1 * f."""
    f = np.asarray(f, dtype=float)
    if f.shape != (basis.n,):
        raise ValueError(f"signal must have length {basis.n}")
    for i in spec.indices:
        if i > basis.n:
            raise ValueError(f"filter index {i} out of range for n={basis.n}")
    a0, a1 = spec.alpha
    out = a1 * f
    if spec.indices and a0 != 0.0:
        cols = [i - 1 for i in spec.indices]
        sub = basis.vectors[:, cols]
        out = out + a0 * (sub @ (sub.T @ f))
    return out


def basis_smoothness_values(g: Graph, basis: EigenBasis) -> tuple[float, ...]:
    return tuple(smoothness_value(g, basis.vectors[:, j]) for j in range(basis.n))


def smoothness_ordered_indices(g: Graph, basis: EigenBasis, m: int):
    """Permutation of the eigen indices by ascending smoothness (stable, so
    equal values keep eigenvalue order) and the first m of them."""
    if not (0 <= m <= basis.n):
        raise ValueError(f"m must be between 0 and {basis.n}")
    eps = np.array(basis_smoothness_values(g, basis))
    sigma = tuple(int(i) + 1 for i in np.argsort(eps, kind="stable"))
    return sigma, frozenset(sigma[:m])
