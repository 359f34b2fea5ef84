"""Seeded Monte Carlo comparison of recovery under additive noise.

Every (noise level, trial) pair gets its own seeds, derived from
``(base_seed, level index, trial index)`` by ``numpy.random.SeedSequence``
spawn keys.  Adding or removing noise levels therefore never changes the
problems drawn for other levels, and every method sees the identical
problem for a given pair.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .baseline import direct_pseudo_solve
from .errors import BinLsqError, InvalidSpec
from .generator import FAMILIES, GeneratorSpec, generate
from .oracle import DEFAULT_MAX_N, exhaustive_solve
from .solver import dpbb_solve

log = logging.getLogger(__name__)

METHODS = ("dpbb", "baseline", "oracle")
_NOISE_STREAM, _PLANT_STREAM = 0, 1


@dataclass(frozen=True)
class BenchSpec:
    family: str = "paper2"
    noise_fractions: tuple = (0.0, 0.1, 0.2)
    trials_per_point: int = 100
    base_seed: int = 0
    methods: tuple = ("dpbb", "baseline")
    planted_policy: str = "fixed"
    planted_x: tuple | None = None
    max_oracle_n: int = DEFAULT_MAX_N

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}")
        levels = tuple(float(v) for v in self.noise_fractions)
        if not levels or any(not (0.0 <= v <= 1.0) for v in levels):
            raise InvalidSpec(f"noise_fractions must be non-empty and within [0, 1], got {levels}")
        if not isinstance(self.trials_per_point, int) or self.trials_per_point < 1:
            raise InvalidSpec(f"trials_per_point must be >= 1, got {self.trials_per_point!r}")
        if not (isinstance(self.base_seed, int) and 0 <= self.base_seed < 2**64):
            raise InvalidSpec(f"base_seed must be an unsigned 64-bit integer, got {self.base_seed!r}")
        methods = tuple(self.methods)
        bad = [mth for mth in methods if mth not in METHODS]
        if bad or not methods or len(set(methods)) != len(methods):
            raise InvalidSpec(f"methods must be distinct entries of {METHODS}, got {methods}")
        if self.planted_policy not in ("fixed", "random"):
            raise InvalidSpec(f"planted_policy must be 'fixed' or 'random', got {self.planted_policy!r}")
        object.__setattr__(self, "noise_fractions", levels)
        object.__setattr__(self, "methods", methods)
        if self.planted_x is not None:
            object.__setattr__(self, "planted_x", tuple(int(v) for v in self.planted_x))
            # validates length and alphabet
            GeneratorSpec(family=self.family, planted_x=self.planted_x)

    def to_dict(self):
        d = asdict(self)
        d["noise_fractions"] = list(self.noise_fractions)
        d["methods"] = list(self.methods)
        d["planted_x"] = None if self.planted_x is None else list(self.planted_x)
        return d

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown bench spec keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidSpec(f"malformed spec: {exc}") from exc


def derive_seed(base_seed, level_index, trial, stream=_NOISE_STREAM):
    """Deterministic 64-bit seed for one (level, trial, stream) triple."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(level_index, trial, stream))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class MethodOutcome:
    x: list | None
    sse: float | None
    recovered: bool
    bit_errors: int | None
    error: str | None = None


@dataclass(frozen=True)
class TrialRecord:
    level_index: int
    noise_fraction: float
    trial: int
    seed: int
    planted_x: list
    outcomes: dict


@dataclass(frozen=True)
class MethodStats:
    method: str
    noise_fraction: float
    trials: int
    recovered: int
    recovery_rate: float
    mean_final_sse: float | None
    bit_error_rate: float | None
    failed: int


@dataclass(frozen=True)
class BenchReport:
    spec: BenchSpec
    stats: tuple
    trials: tuple
    skipped: dict = field(default_factory=dict)

    def stat(self, method, noise_fraction):
        for s in self.stats:
            if s.method == method and s.noise_fraction == noise_fraction:
                return s
        raise KeyError((method, noise_fraction))

    def to_json(self):
        doc = {
            "spec": self.spec.to_dict(),
            "skipped": dict(self.skipped),
            "stats": [asdict(s) for s in self.stats],
            "trials": [
                {**asdict(t), "outcomes": {k: asdict(v) for k, v in t.outcomes.items()}}
                for t in self.trials
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        cols = list(MethodStats.__dataclass_fields__)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for s in self.stats:
            w.writerow([_cell(getattr(s, c)) for c in cols])
        return buf.getvalue()


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _run_method(method, problem, planted, max_oracle_n):
    try:
        if method == "dpbb":
            res = dpbb_solve(problem)
            x, value = res.x, res.final_sse
        elif method == "baseline":
            res = direct_pseudo_solve(problem)
            x, value = res.rounded_x, res.sse_of_rounded
        else:
            res = exhaustive_solve(problem, max_oracle_n)
            x, value = res.x, res.sse
    except BinLsqError as exc:
        return MethodOutcome(None, None, False, None, f"{type(exc).__name__}: {exc}")
    errors = int(np.sum(x != planted))
    return MethodOutcome([int(v) for v in x], float(value), errors == 0, errors)


def run_trial(spec, level_index, trial, methods=None):
    methods = spec.methods if methods is None else methods
    fraction = spec.noise_fractions[level_index]
    seed = derive_seed(spec.base_seed, level_index, trial, _NOISE_STREAM)
    n = FAMILIES[spec.family][1]
    if spec.planted_policy == "random":
        rng = np.random.Generator(
            np.random.PCG64(derive_seed(spec.base_seed, level_index, trial, _PLANT_STREAM))
        )
        planted = tuple(int(v) for v in rng.integers(0, 2, size=n))
    else:
        planted = spec.planted_x
    try:
        gp = generate(GeneratorSpec(family=spec.family, planted_x=planted,
                                    noise_fraction=fraction, seed=seed))
        problem = gp.noisy_problem
        planted_arr = gp.planted_x
    except BinLsqError as exc:
        failed = MethodOutcome(None, None, False, None, f"{type(exc).__name__}: {exc}")
        return TrialRecord(level_index, fraction, trial, seed, list(planted or ()),
                           {mth: failed for mth in methods})
    outcomes = {mth: _run_method(mth, problem, planted_arr, spec.max_oracle_n) for mth in methods}
    return TrialRecord(level_index, fraction, trial, seed,
                       [int(v) for v in planted_arr], outcomes)


def _summarize(method, fraction, records, n_bits):
    outs = [r.outcomes[method] for r in records]
    ok = [o for o in outs if o.error is None]
    recovered = sum(o.recovered for o in outs)
    return MethodStats(
        method=method,
        noise_fraction=fraction,
        trials=len(outs),
        recovered=recovered,
        recovery_rate=recovered / len(outs),
        mean_final_sse=float(np.mean([o.sse for o in ok])) if ok else None,
        bit_error_rate=(sum(o.bit_errors for o in ok) / (len(ok) * n_bits)) if ok else None,
        failed=len(outs) - len(ok),
    )


def run_bench(spec, jobs=1):
    """Run every (noise level, trial) pair for every requested method.

    The report is a pure function of ``spec``; ``jobs > 1`` runs trials on a
    thread pool without changing the result.
    """
    n = FAMILIES[spec.family][1]
    methods = spec.methods
    skipped = {}
    if "oracle" in methods and n > spec.max_oracle_n:
        reason = f"n={n} exceeds oracle cap {spec.max_oracle_n}"
        warnings.warn(f"skipping oracle: {reason}", RuntimeWarning, stacklevel=2)
        skipped["oracle"] = reason
        methods = tuple(mth for mth in methods if mth != "oracle")

    keys = [(li, t) for li in range(len(spec.noise_fractions)) for t in range(spec.trials_per_point)]
    work = lambda key: run_trial(spec, key[0], key[1], methods)  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(work, keys))
    else:
        records = [work(k) for k in keys]
    records.sort(key=lambda r: (r.level_index, r.trial))
    log.debug("bench finished %d trials", len(records))

    stats = []
    for li, fraction in enumerate(spec.noise_fractions):
        level = [r for r in records if r.level_index == li]
        stats.extend(_summarize(mth, fraction, level, n) for mth in methods)
    return BenchReport(spec, tuple(stats), tuple(records), skipped)
