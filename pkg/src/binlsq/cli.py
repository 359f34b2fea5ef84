"""Command line front end.

Exit codes: 0 success, 2 unparseable input file, 3 dimension/shape problem,
4 rank deficiency, 5 invalid spec, arguments or output location.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

from . import trace
from .baseline import direct_pseudo_solve
from .bench import METHODS, BenchSpec, run_bench
from .errors import (
    BinLsqError,
    DimensionMismatch,
    InvalidProblem,
    InvalidSpec,
    NonFiniteEntries,
    RankDeficient,
)
from .files import ParseError, format_matrix, format_vector, read_matrix, read_vector
from .generator import FAMILIES, GeneratorSpec, generate
from .oracle import DEFAULT_MAX_N, exhaustive_solve
from .solver import Problem, dpbb_solve

EXIT_OK, EXIT_PARSE, EXIT_DIMENSION, EXIT_RANK, EXIT_SPEC = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_SPEC, f"{self.prog}: error: {message}\n")


def _exit_code(exc):
    if isinstance(exc, (ParseError, NonFiniteEntries)):
        return EXIT_PARSE
    if isinstance(exc, RankDeficient):
        return EXIT_RANK
    if isinstance(exc, (InvalidProblem, DimensionMismatch)):
        return EXIT_DIMENSION
    return EXIT_SPEC


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSpec(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InvalidSpec(f"config {path} must hold a JSON object")
    return cfg


def _bits(text):
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise InvalidSpec(f"expected comma-separated 0/1 values, got {text!r}") from exc


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise InvalidSpec(f"expected comma-separated numbers, got {text!r}") from exc


def _overrides(args, mapping):
    return {key: getattr(args, attr) for attr, key in mapping.items()
            if getattr(args, attr, None) is not None}


def cmd_generate(args):
    cfg = _load_config(args.config)
    cfg.update(_overrides(args, {"family": "family", "m": "m", "period": "T",
                                 "sample_step": "sample_step", "noise": "noise_fraction",
                                 "seed": "seed"}))
    if args.planted is not None:
        cfg["planted_x"] = _bits(args.planted)
    if args.no_normalize:
        cfg["normalize"] = False
    spec = GeneratorSpec.from_dict(cfg)
    if not os.path.isdir(args.out):
        raise InvalidSpec(f"output directory {args.out} does not exist")
    gp = generate(spec)
    # render everything before touching the filesystem
    contents = {
        "A.csv": format_matrix(gp.problem.A),
        "b.csv": format_vector(gp.problem.b),
        "b_noisy.csv": format_vector(gp.noisy_b),
        "noise.csv": format_vector(gp.noise),
        "x_planted.csv": format_vector(gp.planted_x),
        "spec.json": json.dumps(spec.to_dict(), indent=2, sort_keys=True) + "\n",
    }
    for name, text in contents.items():
        with open(os.path.join(args.out, name), "w") as fh:
            fh.write(text)
    print(json.dumps({"out": args.out, "files": sorted(contents), "m": spec.m, "n": spec.n}))
    return EXIT_OK


def cmd_solve(args):
    A = read_matrix(args.matrix)
    b = read_vector(args.rhs)
    problem = Problem(A, b)
    out = {"method": args.method, "m": problem.m, "n": problem.n}
    if args.method == "dpbb":
        res = dpbb_solve(problem)
        out.update(x=[int(v) for v in res.x], sse=res.final_sse)
        if args.trace or args.tables:
            doc = trace.trace_document(problem, res, {"A": args.matrix, "b": args.rhs})
            if args.tables:
                sys.stdout.write(trace.render_tables(doc))
                return EXIT_OK
            out["trace"] = doc
    elif args.method == "oracle":
        res = exhaustive_solve(problem, args.max_n)
        out.update(x=[int(v) for v in res.x], sse=res.sse,
                   candidates_evaluated=res.candidates_evaluated)
    else:
        res = direct_pseudo_solve(problem)
        out.update(x=[int(v) for v in res.rounded_x], sse=res.sse_of_rounded,
                   real_x=[float(v) for v in res.real_x])
    if args.method != "dpbb" and (args.trace or args.tables):
        print(f"warning: --trace/--tables apply to dpbb only; ignored for {args.method}",
              file=sys.stderr)
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_bench(args):
    cfg = _load_config(args.config)
    cfg.update(_overrides(args, {"family": "family", "trials": "trials_per_point",
                                 "seed": "base_seed", "planted_policy": "planted_policy",
                                 "max_oracle_n": "max_oracle_n"}))
    if args.noise is not None:
        cfg["noise_fractions"] = _floats(args.noise)
    if args.methods is not None:
        cfg["methods"] = tuple(args.methods.split(","))
    if args.planted is not None:
        cfg["planted_x"] = _bits(args.planted)
    spec = BenchSpec.from_dict(cfg)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    if not os.path.isdir(out_dir):
        raise InvalidSpec(f"output directory {out_dir} does not exist")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = run_bench(spec, jobs=args.jobs)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    table = report.to_csv()
    with open(args.out + ".json", "w") as fh:
        fh.write(report.to_json())
    with open(args.out + ".csv", "w") as fh:
        fh.write(table)
    sys.stdout.write(table)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="binlsq", description="Binary solutions of overdetermined linear systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a generated test problem as CSV files")
    g.add_argument("--config", help="JSON file with generator spec fields")
    g.add_argument("--family", choices=sorted(FAMILIES))
    g.add_argument("--m", type=int, help="number of samples (rows)")
    g.add_argument("--period", type=float, help="period T in seconds")
    g.add_argument("--sample-step", type=float, help="sampling interval in seconds")
    g.add_argument("--no-normalize", action="store_true", help="skip per-column max-abs scaling")
    g.add_argument("--planted", help="planted solution, e.g. 1,0,1")
    g.add_argument("--noise", type=float, help="noise fraction in [0, 1]")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True, help="existing output directory")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve a problem read from CSV files")
    s.add_argument("matrix", help="CSV file holding A")
    s.add_argument("rhs", help="CSV file holding b")
    s.add_argument("--method", choices=("dpbb", "oracle", "baseline"), default="dpbb")
    s.add_argument("--trace", action="store_true", help="include the per-stage trace (dpbb)")
    s.add_argument("--tables", action="store_true", help="print the trace as text tables (dpbb)")
    s.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="oracle size cap")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="seeded recovery benchmark")
    b.add_argument("--config", help="JSON file with bench spec fields")
    b.add_argument("--family", choices=sorted(FAMILIES))
    b.add_argument("--noise", help="comma-separated noise fractions")
    b.add_argument("--trials", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--methods", help=f"comma-separated subset of {','.join(METHODS)}")
    b.add_argument("--planted-policy", choices=("fixed", "random"))
    b.add_argument("--planted", help="fixed planted solution")
    b.add_argument("--max-oracle-n", type=int)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", required=True, help="output path prefix (.json and .csv are appended)")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BinLsqError as exc:
        print(f"binlsq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
