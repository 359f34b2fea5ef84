"""Exhaustive minimization of ``||A x - b||^2`` over all binary ``x``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .solver import Problem

DEFAULT_MAX_N = 24
_CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    x: np.ndarray
    sse: float
    candidates_evaluated: int


def index_to_bits(k, n):
    """Binary vector for candidate number ``k``; ``x_1`` is the most
    significant bit, so increasing ``k`` is lexicographic order."""
    k = np.asarray(k, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return (k[..., None] >> shifts) & 1


def exhaustive_solve(problem, max_n=DEFAULT_MAX_N):
    """Global binary minimizer by enumerating all ``2**n`` candidates.

    Ties in the residual are broken toward the lexicographically smallest
    ``x``.  Candidates are scored in vectorized chunks; everything scoring
    within rounding distance of a chunk minimum is re-scored with
    :meth:`Problem.residual_sse`, so the returned ``sse`` is directly
    comparable with other solvers' residuals.
    """
    n = problem.n
    if n > max_n:
        raise TooLarge(f"exhaustive search over 2**{n} candidates exceeds cap 2**{max_n}")
    A, b = problem.A, problem.b
    total = 1 << n
    scale = float(np.linalg.norm(b) + np.linalg.norm(A, axis=0).sum())
    window = 1e-9 * max(scale * scale, 1e-300)

    best_sse, best_k = np.inf, -1
    for start in range(0, total, _CHUNK):
        ks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        X = index_to_bits(ks, n).astype(np.float64)
        R = X @ A.T - b
        scores = np.einsum("ij,ij->i", R, R)
        near = np.flatnonzero(scores <= scores.min() + window)
        for j in near:
            k = int(ks[j])
            s = problem.residual_sse(X[j])
            if s < best_sse or (s == best_sse and k < best_k):
                best_sse, best_k = s, k
    x = index_to_bits(best_k, n).astype(np.int64)
    return OracleResult(x, best_sse, total)
