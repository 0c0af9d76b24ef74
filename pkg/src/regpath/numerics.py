"""Dense linear algebra and a reproducible normal sampler.

Matrices and vectors are plain float64 numpy arrays. ``as_matrix`` and
``as_vector`` validate shape and finiteness at the boundaries.

Sampling layout
---------------
``RandomStream`` draws raw 64-bit words from PCG64. Each word ``w`` maps to
a uniform ``(w >> 11) * 2**-53`` in [0, 1). A standard normal consumes two
consecutive words ``w1, w2`` through the cosine branch of Box-Muller::

    u1 = ((w1 >> 11) + 1) * 2**-53      # in (0, 1], so log is finite
    u2 = (w2 >> 11) * 2**-53
    z  = sqrt(-2 log u1) * cos(2 pi u2)

No value is cached between calls, so the word sequence consumed by any
sampler is a fixed function of how many uniforms and normals it asked for.
"""

import math

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, RankDeficient

PIVOT_TOL = 1e-12
_TWO_POW_M53 = 2.0 ** -53


def as_matrix(a, name="matrix"):
    a = np.array(a, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-d, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def as_vector(v, name="vector"):
    v = np.array(v, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-d, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def cholesky(A, pivot_tol=PIVOT_TOL):
    """Lower Cholesky factor of a symmetric matrix.

    Raises NotPositiveDefinite when a pivot (the diagonal value before the
    square root) is at or below ``pivot_tol``.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    L = np.zeros_like(A)
    for k in range(n):
        pivot = A[k, k] - L[k, :k] @ L[k, :k]
        if not pivot > pivot_tol:
            raise NotPositiveDefinite(
                f"Cholesky pivot {pivot:.3e} <= {pivot_tol:g} at index {k}", index=k
            )
        L[k, k] = math.sqrt(pivot)
        if k + 1 < n:
            L[k + 1:, k] = (A[k + 1:, k] - L[k + 1:, :k] @ L[k, :k]) / L[k, k]
    return L


def _forward(L, b):
    x = np.empty_like(b)
    for i in range(len(b)):
        x[i] = (b[i] - L[i, :i] @ x[:i]) / L[i, i]
    return x


def _backward(L, b):
    # solves L.T x = b
    n = len(b)
    x = np.empty_like(b)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def solve_spd(A, b, pivot_tol=PIVOT_TOL):
    """Solve ``A x = b`` for symmetric positive definite ``A`` via Cholesky."""
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise DimensionMismatch(f"A {A.shape} and b {b.shape} are incompatible")
    if n == 0:
        return np.zeros(0)
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) > 1e-10 * scale:
        raise ValueError("A is not symmetric")
    L = cholesky(A, pivot_tol)
    return _backward(L, _forward(L, b))


def least_squares(X, y):
    """Ordinary least squares coefficients; requires full column rank."""
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    if y.shape != (n,):
        raise DimensionMismatch(f"X has {n} rows but y has {len(y)} entries")
    if n < p:
        raise RankDeficient(f"{n} rows cannot determine {p} coefficients")
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < p:
        raise RankDeficient(f"effective rank {rank} < {p} columns")
    return beta


def power_norm_sq(X, iters=50):
    """Estimate ``||X||_op**2`` by power iteration on ``X.T X``."""
    p = X.shape[1]
    v = np.full(p, 1.0 / math.sqrt(p))
    est = 0.0
    for _ in range(iters):
        w = X.T @ (X @ v)
        est = float(np.linalg.norm(w))
        if est == 0.0:
            return 0.0
        v = w / est
    return est


class RandomStream:
    """Seeded source of uniforms and standard normals (see module docstring).

    A stream is single-owner; derive independent streams from distinct seeds.
    """

    def __init__(self, seed):
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)

    def raw(self, k):
        return self._bits.random_raw(int(k)).astype(np.uint64)

    def uniforms(self, k):
        return _words_to_uniform(self.raw(k))

    def normals(self, k):
        w = self.raw(2 * int(k)).reshape(-1, 2)
        return _box_muller(w[:, 0], w[:, 1])

    def normal(self):
        return float(self.normals(1)[0])

    def uniform(self):
        return float(self.uniforms(1)[0])


def _words_to_uniform(w):
    return (w >> np.uint64(11)).astype(float) * _TWO_POW_M53


def _box_muller(w1, w2):
    u1 = ((w1 >> np.uint64(11)) + np.uint64(1)).astype(float) * _TWO_POW_M53
    u2 = _words_to_uniform(w2)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def gaussian_stream(stream):
    """Endless generator of standard normals drawn from ``stream``."""
    while True:
        yield stream.normal()
