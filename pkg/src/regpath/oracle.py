"""Fixed-lambda L1 solver by proximal gradient with backtracking.

Deliberately independent of the homotopy's active-set bookkeeping: each
iteration takes a gradient step on the smooth loss and soft-thresholds.
Convergence is declared on the KKT residual, not on objective change.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError, MaxItersExceeded, NonFinite
from .losses import (
    BinomialDeviance,
    Exponential,
    Huber,
    Squared,
    check_task,
    kkt_from_gradient,
)
from .numerics import power_norm_sq


@dataclass(frozen=True)
class OracleConfig:
    max_iters: int = 100_000
    kkt_tol: float = 1e-8
    shrink: float = 0.5
    initial_step: float = None  # default 1 / curvature bound

    def __post_init__(self):
        if not self.kkt_tol > 0:
            raise ValueError("kkt_tol must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class GridPath:
    lambdas: np.ndarray
    betas: np.ndarray
    kkt: np.ndarray
    iterations: np.ndarray
    loss: str = "squared"
    delta: float = None
    n: int = 0
    feature_names: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, GridPath):
            return NotImplemented
        return (
            all(
                np.array_equal(getattr(self, a), getattr(other, a))
                for a in ("lambdas", "betas", "kkt", "iterations")
            )
            and (self.loss, self.delta, self.n, tuple(self.feature_names))
            == (other.loss, other.delta, other.n, tuple(other.feature_names))
        )


def soft_threshold(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def curvature_bound(ds, loss, beta=None):
    """Upper bound (estimate) on the Hessian norm of the summed loss."""
    nsq = power_norm_sq(ds.X)
    if isinstance(loss, (Squared, Huber)):
        return 2.0 * nsq
    if isinstance(loss, BinomialDeviance):
        return 0.25 * nsq
    if isinstance(loss, Exponential):
        f = ds.X @ (np.zeros(ds.p) if beta is None else beta)
        return nsq * float(np.max(loss.second_deriv(ds.y, f)))
    raise InputError(f"fixed-lambda solver does not support loss {loss.name!r}")


def _solve(ds, loss, lam, cfg, beta):
    X, y = ds.X, ds.y

    def smooth(b):
        return float(np.sum(loss.value(y, X @ b)))

    def grad(b):
        return X.T @ loss.deriv(y, X @ b)

    L = curvature_bound(ds, loss, beta)
    step = cfg.initial_step or (1.0 / L if L > 0 else 1.0)
    f = smooth(beta)
    g = grad(beta)
    best, best_kkt = beta, np.inf
    for it in range(cfg.max_iters + 1):
        kkt = kkt_from_gradient(g, lam, beta)
        if not np.isfinite(kkt) or not np.isfinite(f):
            raise NonFinite("non-finite loss or gradient", iteration=it)
        if kkt < best_kkt:
            best, best_kkt = beta, kkt
        if kkt <= cfg.kkt_tol:
            return beta, kkt, it
        if it == cfg.max_iters:
            break
        while True:
            cand = soft_threshold(beta - step * g, step * lam)
            d = cand - beta
            dd = d @ d
            f_cand = smooth(cand)
            g_cand = grad(cand)
            remainder = f_cand - f - g @ d
            if remainder <= dd / (2.0 * step) or dd == 0.0:
                break
            # remainder lost in rounding noise: test curvature along d instead
            if remainder <= 1e-12 * (1.0 + abs(f)) and d @ (g_cand - g) <= dd / step:
                break
            step *= cfg.shrink
            if step < 1e-300:
                raise NonFinite("step size underflow", iteration=it)
        beta, f, g = cand, f_cand, g_cand
        # let the step recover after backtracking
        step /= cfg.shrink ** 0.5
    raise MaxItersExceeded(
        f"no KKT convergence in {cfg.max_iters} iterations (residual {best_kkt:.3e})",
        beta=best, kkt=best_kkt, lam=lam,
    )


def solve_l1(ds, loss, lam, cfg=None, warm_start=None, return_info=False):
    """Minimize ``sum L(y_i, x_i.beta) + lam * ||beta||_1`` at a fixed lambda.

    Raises MaxItersExceeded (carrying the best iterate) when the KKT
    residual does not drop below ``cfg.kkt_tol``.
    """
    cfg = cfg or OracleConfig()
    if not loss.differentiable:
        raise InputError(f"loss {loss.name!r} is not differentiable")
    if lam < 0:
        raise InputError("lambda must be nonnegative")
    check_task(ds, loss)
    beta = np.zeros(ds.p) if warm_start is None else np.array(warm_start, dtype=float)
    beta, kkt, its = _solve(ds, loss, float(lam), cfg, beta)
    if return_info:
        return beta, kkt, its
    return beta


def solve_grid(ds, loss, lambdas, cfg=None):
    """Warm-started sweep over a strictly decreasing lambda grid."""
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.ndim != 1 or lambdas.size == 0:
        raise InputError("lambda grid must be a nonempty list")
    if np.any(lambdas < 0) or np.any(np.diff(lambdas) >= 0):
        raise InputError("lambda grid must be strictly decreasing and nonnegative")
    betas, kkts, iters = [], [], []
    beta = None
    for lam in lambdas:
        try:
            beta, kkt, its = solve_l1(ds, loss, lam, cfg, warm_start=beta, return_info=True)
        except MaxItersExceeded as exc:
            raise MaxItersExceeded(str(exc).split(" (lambda=")[0], exc.beta, exc.kkt, lam) from exc
        betas.append(beta)
        kkts.append(kkt)
        iters.append(its)
    return GridPath(
        lambdas=lambdas,
        betas=np.array(betas),
        kkt=np.array(kkts),
        iterations=np.array(iters),
        loss=loss.name,
        delta=getattr(loss, "delta", None),
        n=ds.n,
        feature_names=tuple(ds.feature_names),
    )


def log_grid(start, stop, count):
    """``count`` log-spaced values from ``start`` down to ``stop``."""
    return np.geomspace(start, stop, int(count))
