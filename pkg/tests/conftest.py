import numpy as np
import pytest

from regpath.data import Dataset
from regpath.numerics import RandomStream


def random_problem(seed, n=30, p=10, outlier_prob=0.15):
    """Sparse linear model with heavy-tailed noise; used across test modules."""
    s = RandomStream(seed)
    X = s.normals(n * p).reshape(n, p)
    beta = np.zeros(p)
    beta[:3] = [3.0, -2.0, 1.5]
    e = s.normals(n)
    e = np.where(s.uniforms(n) < outlier_prob, 8.0 * e, e)
    return Dataset(X, X @ beta + e)


def orthonormal_problem(seed, n=12, p=6):
    s = RandomStream(seed)
    Q, _ = np.linalg.qr(s.normals(n * p).reshape(n, p))
    y = 3.0 * s.normals(n)
    return Dataset(Q, y)


@pytest.fixture
def identity_ds():
    return Dataset(np.eye(2), [3.0, 1.0])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
