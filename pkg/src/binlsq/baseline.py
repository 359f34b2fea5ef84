"""One-shot real least-squares solve of the whole system, rounded to binary."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOLERANCES, least_squares


@dataclass(frozen=True)
class BaselineResult:
    real_x: np.ndarray
    rounded_x: np.ndarray
    sse_of_rounded: float


def round_to_binary(real_x, threshold=0.5):
    """Entrywise threshold; values ``>= threshold`` map to 1."""
    return (np.asarray(real_x, dtype=np.float64) >= threshold).astype(np.int64)


def direct_pseudo_solve(problem, tol=DEFAULT_TOLERANCES):
    real_x = least_squares(problem.A, problem.b, tol)
    rounded = round_to_binary(real_x)
    return BaselineResult(real_x, rounded, problem.residual_sse(rounded))
