"""Dense real linear algebra used by the solvers.

Matrices and vectors are plain ``numpy.ndarray`` objects of dtype float64.
:func:`as_matrix` and :func:`as_vector` validate shape and finiteness at the
boundaries; everything downstream assumes validated input.

Two independent routes to the least-squares solution are provided:

* :func:`pseudo_inverse` forms ``(B'B)^{-1} B'`` from the normal equations
  (Cholesky of the Gram matrix).
* :func:`least_squares` / :class:`LeastSquaresFactor` use a thin QR
  factorization, which is better conditioned.

The two must agree within ``Tolerances.solve_tolerance``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NonFiniteEntries, RankDeficient


@dataclass(frozen=True)
class Tolerances:
    rank_threshold: float = 1e-10
    solve_tolerance: float = 1e-8

    def __post_init__(self):
        if not (self.rank_threshold > 0 and self.solve_tolerance > 0):
            raise ValueError(
                f"tolerances must be strictly positive, got rank_threshold="
                f"{self.rank_threshold!r}, solve_tolerance={self.solve_tolerance!r}"
            )


DEFAULT_TOLERANCES = Tolerances()


def as_matrix(M, name="matrix"):
    """Return ``M`` as a validated 2-D float64 array (a copy is not forced)."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteEntries(f"{name} has non-finite entries")
    return M


def as_vector(v, name="vector"):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 1-D array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteEntries(f"{name} has non-finite entries")
    return v


def matvec(M, v):
    """Matrix-vector product with an explicit dimension check."""
    M = as_matrix(M)
    v = as_vector(v)
    if M.shape[1] != v.shape[0]:
        raise DimensionMismatch(
            f"matvec: matrix has {M.shape[1]} columns but vector has length {v.shape[0]}"
        )
    return M @ v


def sse(v):
    """Summed squared error ``v'v`` of a residual vector."""
    v = np.asarray(v, dtype=np.float64)
    return float(np.dot(v, v))


def _singular_ratio(A):
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])


def check_full_column_rank(A, tol=DEFAULT_TOLERANCES):
    """True iff the smallest singular value of ``A`` exceeds
    ``tol.rank_threshold`` times the largest one."""
    A = as_matrix(A)
    if A.shape[0] < A.shape[1]:
        raise DimensionMismatch(
            f"rank check needs rows >= cols, got {A.shape[0]} rows and {A.shape[1]} cols"
        )
    return _singular_ratio(A) > tol.rank_threshold


def _require_full_column_rank(B, tol):
    ratio = _singular_ratio(B)
    if not ratio > tol.rank_threshold:
        raise RankDeficient(
            f"matrix of shape {B.shape} is not of full column rank: smallest/largest "
            f"singular value ratio {ratio:.3e} <= {tol.rank_threshold:.1e}",
            magnitude=ratio,
        )


def pseudo_inverse(B, tol=DEFAULT_TOLERANCES):
    """Left pseudo-inverse ``(B'B)^{-1} B'`` of a tall full-column-rank matrix.

    Computed literally from the normal equations via a Cholesky factor of the
    Gram matrix ``B'B``.

    Raises
    ------
    RankDeficient
        If ``B`` fails the rank test, or if the computed inverse does not
        satisfy ``P B = I`` within ``tol.solve_tolerance`` (Gram matrix too
        ill-conditioned for the normal equations).
    """
    B = as_matrix(B)
    m, n = B.shape
    if not m > n:
        raise DimensionMismatch(f"pseudo_inverse needs rows > cols, got {m} rows and {n} cols")
    _require_full_column_rank(B, tol)
    gram = B.T @ B
    try:
        factor = scipy.linalg.cho_factor(gram, lower=True)
    except np.linalg.LinAlgError as exc:
        raise RankDeficient(f"Gram matrix is not positive definite: {exc}") from exc
    P = scipy.linalg.cho_solve(factor, B.T)
    defect = float(np.max(np.abs(P @ B - np.eye(n))))
    if defect >= tol.solve_tolerance:
        raise RankDeficient(
            f"normal-equation pseudo-inverse is inaccurate: max|PB - I| = {defect:.3e}",
            magnitude=_singular_ratio(B),
        )
    return P


class LeastSquaresFactor:
    """Thin QR factorization of a tall full-column-rank matrix, reusable for
    any number of right-hand sides."""

    def __init__(self, B, tol=DEFAULT_TOLERANCES):
        B = as_matrix(B)
        if B.shape[0] < B.shape[1]:
            raise DimensionMismatch(
                f"least squares needs rows >= cols, got {B.shape[0]} rows and {B.shape[1]} cols"
            )
        _require_full_column_rank(B, tol)
        self.matrix = B
        self.tol = tol
        self._q, self._r = np.linalg.qr(B, mode="reduced")

    @property
    def shape(self):
        return self.matrix.shape

    def solve(self, s):
        """Real-valued minimizer of ``||B x - s||_2``.

        ``s`` may be a vector of length ``rows`` or an array of shape
        ``(rows, k)`` holding ``k`` right-hand sides as columns.
        """
        s = np.asarray(s, dtype=np.float64)
        if s.shape[0] != self.matrix.shape[0]:
            raise DimensionMismatch(
                f"least squares: matrix has {self.matrix.shape[0]} rows but right-hand "
                f"side has length {s.shape[0]}"
            )
        return scipy.linalg.solve_triangular(self._r, self._q.T @ s, lower=False)

    def project(self, s):
        """Best estimate ``B x_hat`` of ``s`` within the column space of ``B``."""
        return self.matrix @ self.solve(s)


def least_squares(B, s, tol=DEFAULT_TOLERANCES):
    return LeastSquaresFactor(B, tol).solve(as_vector(s, "right-hand side"))
