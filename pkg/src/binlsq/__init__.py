"""Binary (0/1) solutions of overdetermined linear systems ``A x = b``."""
from .baseline import BaselineResult, direct_pseudo_solve, round_to_binary
from .bench import BenchReport, BenchSpec, run_bench
from .errors import (
    BinLsqError,
    DegenerateColumn,
    DimensionMismatch,
    InvalidProblem,
    InvalidSpec,
    NonFiniteEntries,
    RankDeficient,
    TooLarge,
)
from .generator import GeneratedProblem, GeneratorSpec, add_noise, build_matrix, generate, plant_rhs
from .linalg import (
    Tolerances,
    check_full_column_rank,
    least_squares,
    matvec,
    pseudo_inverse,
    sse,
)
from .oracle import OracleResult, exhaustive_solve
from .solver import (
    BranchEval,
    Problem,
    SolveResult,
    StageRecord,
    dpbb_solve,
    evaluate_branch,
    evaluate_last,
)

__version__ = "0.1.0"
