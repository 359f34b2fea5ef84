"""Plain comma-separated numeric files: one matrix row per line, no header.

Floats are written with ``repr`` (shortest string that round-trips to the
same double).
"""
from __future__ import annotations

import numpy as np

from .errors import BinLsqError


class ParseError(BinLsqError, ValueError):
    pass


def format_matrix(M):
    M = np.atleast_2d(M)
    return "".join(",".join(_fmt(v) for v in row) + "\n" for row in M)


def format_vector(v):
    """One entry per line."""
    return "".join(_fmt(x) + "\n" for x in np.ravel(v))


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def read_matrix(path):
    try:
        M = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot parse matrix file {path}: {exc}") from exc
    if M.size == 0:
        raise ParseError(f"matrix file {path} is empty")
    return M


def read_vector(path):
    """Read a vector written either one entry per line or as a single row."""
    M = read_matrix(path)
    if M.shape[0] != 1 and M.shape[1] != 1:
        raise ParseError(f"{path} holds a {M.shape[0]}x{M.shape[1]} matrix, expected a vector")
    return M.ravel()
