"""Test problems built from sampled sinusoid/exponential function families.

Each column of ``A`` is one function sampled at ``t_k = k * sample_step`` for
``k = 1 .. m``, optionally scaled so its largest-magnitude entry is +-1.  The
right-hand side is ``A x`` for a planted binary ``x``, and the noisy
right-hand side adds ``noise_fraction * u_k`` with ``u_k`` uniform on
``[0, 1)`` (so the noise is non-negative, not zero-mean).

Randomness comes from numpy's ``PCG64`` bit generator seeded with the ``GeneratorSpec``
64-bit seed.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateColumn, InvalidSpec, RankDeficient
from .linalg import DEFAULT_TOLERANCES, check_full_column_rank, matvec
from .solver import Problem

DEFAULT_PERIOD = 1e-3


def _paper1_columns(t, f0):
    w = 2 * np.pi * f0 * t
    return [np.sin(w) + 1, np.cos(w) + 1, np.cos(2 * w) + 1]


def _paper2_columns(t, f0):
    w = 2 * np.pi * f0 * t
    return [
        np.sin(w),
        np.cos(w),
        np.cos(2 * w),
        np.sin(2 * w),
        np.sin(w / 2),
        np.cos(w / 2),
        np.cos(3 * w),
        np.sin(3 * w),
        1 - np.exp(-3000 * t),
        np.exp(-3000 * t),
    ]


# name -> (column functions, n, default m, default sample step as a fraction of T, default planted x)
FAMILIES = {
    "paper1": (_paper1_columns, 3, 10, 1 / 10, (1, 0, 1)),
    # the published Example 2 entries correspond to a T/21 step, not T/20
    "paper2": (_paper2_columns, 10, 20, 1 / 21, (1, 0, 1, 1, 1, 0, 1, 1, 1, 0)),
}


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one generated problem.

    ``m``, ``sample_step`` and ``planted_x`` default to the family's
    published settings when left as ``None``.
    """

    family: str = "paper1"
    m: int | None = None
    T: float = DEFAULT_PERIOD
    sample_step: float | None = None
    normalize: bool = True
    planted_x: tuple | None = None
    noise_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        _, n, m0, step_frac, x0 = FAMILIES[self.family]
        if not (isinstance(self.T, (int, float)) and self.T > 0):
            raise InvalidSpec(f"T must be positive, got {self.T!r}")
        m = m0 if self.m is None else self.m
        step = self.T * step_frac if self.sample_step is None else self.sample_step
        x = x0 if self.planted_x is None else self.planted_x
        try:
            x = tuple(int(v) for v in x)
        except (TypeError, ValueError) as exc:
            raise InvalidSpec(f"planted_x must be a sequence of 0/1, got {x!r}") from exc
        if not isinstance(m, int) or isinstance(m, bool) or m <= n:
            raise InvalidSpec(f"family {self.family} has n={n}; m must be an integer > {n}, got {m!r}")
        if not (isinstance(step, (int, float)) and step > 0):
            raise InvalidSpec(f"sample_step must be positive, got {step!r}")
        if len(x) != n or any(v not in (0, 1) for v in x):
            raise InvalidSpec(f"planted_x must be {n} binary values, got {x!r}")
        if not (0.0 <= self.noise_fraction <= 1.0):
            raise InvalidSpec(f"noise_fraction must lie in [0, 1], got {self.noise_fraction!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise InvalidSpec(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "sample_step", float(step))
        object.__setattr__(self, "planted_x", x)
        object.__setattr__(self, "noise_fraction", float(self.noise_fraction))

    @property
    def n(self):
        return FAMILIES[self.family][1]

    def to_dict(self):
        d = asdict(self)
        d["planted_x"] = list(self.planted_x)
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown generator spec keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidSpec(f"malformed spec: {exc}") from exc


@dataclass(frozen=True)
class GeneratedProblem:
    problem: Problem
    noisy_b: np.ndarray
    noise: np.ndarray
    spec: GeneratorSpec = field(repr=False)

    @property
    def planted_x(self):
        return np.array(self.spec.planted_x, dtype=np.int64)

    @property
    def noisy_problem(self):
        return Problem(self.problem.A, self.noisy_b)


def build_matrix(spec):
    columns_fn = FAMILIES[spec.family][0]
    t = np.arange(1, spec.m + 1) * spec.sample_step
    A = np.column_stack(columns_fn(t, 1.0 / spec.T))
    peaks = np.max(np.abs(A), axis=0)
    dead = np.flatnonzero(peaks == 0)
    if dead.size:
        raise DegenerateColumn(f"columns {[int(j) + 1 for j in dead]} are identically zero")
    if spec.normalize:
        A = A / peaks
    return A


def plant_rhs(A, planted_x):
    return matvec(A, np.asarray(planted_x, dtype=np.float64))


def add_noise(b, noise_fraction, seed):
    """Return ``(b + w, w)`` with ``w_k = noise_fraction * u_k``."""
    if not (0.0 <= noise_fraction <= 1.0):
        raise InvalidSpec(f"noise_fraction must lie in [0, 1], got {noise_fraction!r}")
    b = np.asarray(b, dtype=np.float64)
    rng = np.random.Generator(np.random.PCG64(seed))
    w = noise_fraction * rng.random(b.shape[0])
    return b + w, w


def generate(spec, tol=DEFAULT_TOLERANCES):
    A = build_matrix(spec)
    if not check_full_column_rank(A, tol):
        raise RankDeficient(f"sampled {spec.family} matrix ({A.shape[0]}x{A.shape[1]}) is rank deficient")
    b = plant_rhs(A, spec.planted_x)
    noisy_b, w = add_noise(b, spec.noise_fraction, spec.seed)
    return GeneratedProblem(Problem(A, b, tol), noisy_b, w, spec)
