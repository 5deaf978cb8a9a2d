"""Principal component analysis over a dense symmetric eigensolver.

The eigensolver is a cyclic Jacobi rotation scheme implemented here rather
than taken from a linear-algebra backend; at D = 100 (flattened flowchart
vectors) a full decomposition is a few milliseconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInput


def symmetric_eigh(matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Eigenvalues (descending) and matching eigenvector columns of a real
    symmetric matrix, via cyclic Jacobi rotations.

    Convergence: the off-diagonal Frobenius norm falls below ``tol`` times
    the matrix norm (or hits zero).  Symmetric input is assumed, not checked.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if n > 1 and scale > 0.0:
        for _ in range(max_sweeps):
            off = np.sqrt(2.0 * np.sum(np.tril(a, -1) ** 2))
            if off <= tol * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= 1e-300:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    row_p, row_q = a[p, :].copy(), a[q, :].copy()
                    a[p, :] = c * row_p - s * row_q
                    a[q, :] = s * row_p + c * row_q
                    col_p, col_q = a[:, p].copy(), a[:, q].copy()
                    a[:, p] = c * col_p - s * col_q
                    a[:, q] = s * col_p + c * col_q
                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


@dataclass
class PcaResult:
    mean: np.ndarray                      # (D,)
    components: np.ndarray                # (k, D), orthonormal rows
    explained_variance_ratio: np.ndarray  # (k,)
    projections: np.ndarray               # (N, k)
    eigenvalues: np.ndarray               # (k,)

    def reconstruct(self) -> np.ndarray:
        return self.mean + self.projections @ self.components


def pca_fit(matrix: np.ndarray, k: int) -> PcaResult:
    """Top-k principal components of the rows of ``matrix``.

    Covariance uses divisor N - 1.  Each component's sign is fixed so its
    largest-magnitude coordinate is positive, making projections
    reproducible across runs.
    """
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-d data matrix, got shape {x.shape}")
    n, d = x.shape
    if n < 2:
        raise DegenerateInput(f"need at least 2 rows for PCA, got {n}")
    if not 1 <= k <= min(n, d):
        raise ValueError(f"k must be in [1, {min(n, d)}], got {k}")
    if not np.all(np.isfinite(x)):
        raise DegenerateInput("data matrix contains non-finite entries")

    mean = x.mean(axis=0)
    centered = x - mean
    covariance = centered.T @ centered / (n - 1)
    eigenvalues, eigenvectors = symmetric_eigh(covariance)
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    total = float(eigenvalues.sum())
    ratios = eigenvalues / total if total > 0.0 else np.zeros_like(eigenvalues)

    components = eigenvectors[:, :k].T.copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0.0:
            row *= -1.0
    return PcaResult(
        mean=mean,
        components=components,
        explained_variance_ratio=ratios[:k].copy(),
        projections=centered @ components.T,
        eigenvalues=eigenvalues[:k].copy(),
    )
