"""Dynamic-programming sweep with least-squares branch relaxation (DPBB).

Variables are decided one at a time, left to right.  For variable ``i`` the
incoming state (the right-hand side with already-chosen columns removed) is
tried with ``x_i = 0`` and ``x_i = 1``.  Each trial state is projected onto the
span of the remaining columns ``a_{i+1} .. a_n`` with the remaining variables
relaxed to real values, and the branch with the smaller projection residual
wins.  The last variable has no remaining columns, so its two branches are
scored by the squared magnitude of the resulting state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidProblem, RankDeficient
from .linalg import (
    DEFAULT_TOLERANCES,
    LeastSquaresFactor,
    as_matrix,
    as_vector,
    check_full_column_rank,
    sse,
)


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Problem:
    """An overdetermined system ``A x = b`` with ``m > n`` and ``rank(A) = n``."""

    A: np.ndarray
    b: np.ndarray
    tol: object = field(default=DEFAULT_TOLERANCES, repr=False, compare=False)

    def __post_init__(self):
        try:
            A = as_matrix(self.A, "A")
            b = as_vector(self.b, "b")
        except DimensionMismatch as exc:
            raise InvalidProblem(str(exc)) from exc
        m, n = A.shape
        if b.shape[0] != m:
            raise InvalidProblem(f"A has {m} rows but b has length {b.shape[0]}")
        if not m > n:
            raise InvalidProblem(f"system must be strictly overdetermined, got m={m}, n={n}")
        if not check_full_column_rank(A, self.tol):
            raise RankDeficient(f"A ({m}x{n}) does not have full column rank")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def residual_sse(self, x):
        """``||A x - b||^2`` recomputed from scratch."""
        return sse(self.A @ np.asarray(x, dtype=np.float64) - self.b)


@dataclass(frozen=True)
class BranchEval:
    bit: int
    state: np.ndarray
    relaxed_completion: np.ndarray | None
    state_estimate: np.ndarray
    error: np.ndarray
    sse: float


@dataclass(frozen=True)
class StageRecord:
    index: int
    incoming_state: np.ndarray
    branch0: BranchEval
    branch1: BranchEval
    decision: int

    @property
    def chosen(self):
        return self.branch1 if self.decision else self.branch0


@dataclass(frozen=True)
class SolveResult:
    x: np.ndarray
    final_sse: float
    stages: tuple


def _branch_state(bit, incoming_state, a_i):
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    return incoming_state - a_i if bit else incoming_state.copy()


def evaluate_branch(i, bit, incoming_state, a_i, B_i, tol=DEFAULT_TOLERANCES):
    """Score one branch of stage ``i`` (1-based, ``i < n``).

    ``B_i`` holds the remaining columns ``a_{i+1} .. a_n``; it may be passed
    already factorized as a :class:`LeastSquaresFactor` so that both branches
    of a stage share one factorization.
    """
    if i < 1:
        raise ValueError(f"stage index is 1-based, got {i}")
    factor = B_i if isinstance(B_i, LeastSquaresFactor) else LeastSquaresFactor(B_i, tol)
    incoming_state = as_vector(incoming_state, "incoming state")
    a_i = as_vector(a_i, "column")
    if a_i.shape != incoming_state.shape:
        raise DimensionMismatch(
            f"column length {a_i.shape[0]} != state length {incoming_state.shape[0]}"
        )
    state = _branch_state(bit, incoming_state, a_i)
    completion = factor.solve(state)
    estimate = factor.matrix @ completion
    error = state - estimate
    return BranchEval(bit, state, completion, estimate, error, sse(error))


def evaluate_last(incoming_state, a_n):
    """Score both branches of the final variable.

    With no columns left, the error of a branch is its state itself.
    """
    incoming_state = as_vector(incoming_state, "incoming state")
    a_n = as_vector(a_n, "column")
    if a_n.shape != incoming_state.shape:
        raise DimensionMismatch(
            f"column length {a_n.shape[0]} != state length {incoming_state.shape[0]}"
        )
    zero = np.zeros_like(incoming_state)
    out = []
    for bit in (0, 1):
        state = _branch_state(bit, incoming_state, a_n)
        out.append(BranchEval(bit, state, None, zero, state.copy(), sse(state)))
    return tuple(out)


def _decide(branch0, branch1):
    # strict comparison: ties keep x_i = 0
    return 1 if branch1.sse < branch0.sse else 0


def dpbb_solve(problem, tol=DEFAULT_TOLERANCES):
    """Run the DPBB sweep on ``problem`` and return the solution with its
    full per-stage trace."""
    if not isinstance(problem, Problem):
        raise InvalidProblem(f"expected a Problem, got {type(problem).__name__}")
    A, n = problem.A, problem.n
    state = problem.b.copy()
    stages = []
    for i in range(1, n + 1):
        a_i = A[:, i - 1]
        if i < n:
            # B_i does not depend on the bit, so factor it once per stage
            factor = LeastSquaresFactor(A[:, i:], tol)
            b0 = evaluate_branch(i, 0, state, a_i, factor, tol)
            b1 = evaluate_branch(i, 1, state, a_i, factor, tol)
        else:
            b0, b1 = evaluate_last(state, a_i)
        decision = _decide(b0, b1)
        stages.append(StageRecord(i, state, b0, b1, decision))
        state = (b1 if decision else b0).state
    x = np.array([s.decision for s in stages], dtype=np.int64)
    return SolveResult(x, problem.residual_sse(x), tuple(stages))
