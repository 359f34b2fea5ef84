import numpy as np
import pytest

from binlsq import GeneratorSpec, generate


def gauss_solve(M, rhs):
    """Gaussian elimination with partial pivoting on plain Python floats.

    Deliberately independent of numpy/scipy linear algebra; used as the
    oracle for the normal equations.
    """
    n = len(M)
    rhs = [list(r) if hasattr(r, "__len__") else [r] for r in rhs]
    aug = [[float(v) for v in M[i]] + [float(v) for v in rhs[i]] for i in range(n)]
    width = len(aug[0])
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        for r in range(col + 1, n):
            f = aug[r][col] / p
            for c in range(col, width):
                aug[r][c] -= f * aug[col][c]
    out = [[0.0] * (width - n) for _ in range(n)]
    for r in range(n - 1, -1, -1):
        for k in range(width - n):
            acc = aug[r][n + k] - sum(aug[r][c] * out[c][k] for c in range(r + 1, n))
            out[r][k] = acc / aug[r][r]
    return np.array(out)


def normal_equation_pinv(B):
    """(B'B)^{-1} B' by explicit loops plus :func:`gauss_solve`."""
    B = np.asarray(B, dtype=float)
    m, n = B.shape
    gram = [[sum(B[k, i] * B[k, j] for k in range(m)) for j in range(n)] for i in range(n)]
    return gauss_solve(gram, B.T.tolist())


def random_full_rank(rng, m, n):
    while True:
        B = rng.standard_normal((m, n))
        s = np.linalg.svd(B, compute_uv=False)
        if s[-1] / s[0] > 1e-6:
            return B


@pytest.fixture(scope="session")
def example1():
    return generate(GeneratorSpec(family="paper1"))


@pytest.fixture(scope="session")
def example2():
    return generate(GeneratorSpec(family="paper2"))


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in getattr(rep, "nodeid", "") and rep.when == "call":
                rows.append((rep.nodeid.split("::")[-1], "PASS" if outcome == "passed" else "FAIL"))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(rows):
            terminalreporter.write_line(f"{verdict}  {name}")
