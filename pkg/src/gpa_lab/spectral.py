"""Perron-Frobenius data of a bipartite adjacency matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, ZeroMatrix

RESIDUAL_TOL = 1e-14
MAX_ITER = 100_000


@dataclass(frozen=True)
class PerronFrobeniusData:
    """``d**2`` is the PF eigenvalue of ``D D^T``; each eigenvector has unit 2-norm."""

    d: float
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    iterations: int = 0

    @property
    def lam(self) -> np.ndarray:
        """Concatenation (lambda_plus; lambda_minus), indexed like the graph's vertices."""
        return np.concatenate([self.lambda_plus, self.lambda_minus])

    def residuals(self, D: np.ndarray) -> tuple[float, float]:
        D = np.asarray(D, dtype=float)
        r1 = np.max(np.abs(D @ self.lambda_minus - self.d * self.lambda_plus))
        r2 = np.max(np.abs(D.T @ self.lambda_plus - self.d * self.lambda_minus))
        return float(r1), float(r2)


def perron_frobenius(
    D,
    seed: np.ndarray | None = None,
    tol: float = RESIDUAL_TOL,
    max_iter: int = MAX_ITER,
) -> PerronFrobeniusData:
    """Power iteration on the square ``D D^T``.

    Iterating on ``D D^T`` rather than on the full bipartite adjacency matrix
    sidesteps the period-2 oscillation of bipartite graphs. ``seed`` defaults
    to the all-ones vector and must be entrywise positive.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.size == 0 or not np.any(D):
        raise ZeroMatrix("adjacency matrix is empty or zero")
    if np.any(D < 0):
        raise ValueError("adjacency matrix must be entrywise nonnegative")
    M = D @ D.T
    x = np.ones(D.shape[0]) if seed is None else np.array(seed, dtype=float)
    if x.shape != (D.shape[0],) or np.any(x <= 0):
        raise ValueError("seed must be a positive vector over V+")
    x /= np.linalg.norm(x)

    it = 0
    while True:
        y = M @ x
        mu = float(x @ y)
        res = np.max(np.abs(y - mu * x)) / mu
        if res < tol:
            break
        it += 1
        if it >= max_iter:
            raise ConvergenceFailure(f"no convergence after {max_iter} iterations (residual {res:.3e})")
        x = y / np.linalg.norm(y)

    d = float(np.sqrt(mu))
    lam_minus = D.T @ x / d
    lam_minus /= np.linalg.norm(lam_minus)
    lam_plus = x / np.linalg.norm(x)
    if np.any(lam_plus <= 0) or np.any(lam_minus <= 0):
        raise ConvergenceFailure("eigenvector is not strictly positive; is the graph connected?")
    return PerronFrobeniusData(d, lam_plus, lam_minus, it)
