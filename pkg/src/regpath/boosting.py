"""Generic gradient-based epsilon-boosting (coordinate descent with fixed
step size).

Starting from beta = 0, every iteration picks the coordinate with the
largest absolute partial derivative of the summed loss (lowest index on
ties) and moves it by ``epsilon`` against the sign of that derivative.
With squared loss this is forward stagewise regression; with exponential
loss it is a variant of AdaBoost.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonFinite, OutOfRange
from .losses import check_task, clamp_count


@dataclass(frozen=True)
class BoostConfig:
    epsilon: float
    steps: int
    loss: object
    thin: int = None  # default max(1, steps // 1000)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if self.thin is None:
            object.__setattr__(self, "thin", max(1, self.steps // 1000))
        if self.thin < 1:
            raise ValueError("thin must be at least 1")


@dataclass(frozen=True, eq=False)
class BoostTrace:
    """Recorded iterates. Row k of ``betas`` is beta after ``iterations[k]``
    raw steps; ``coords[k]`` is the coordinate moved at that step (-1 for
    the initial point)."""

    iterations: np.ndarray
    betas: np.ndarray
    coords: np.ndarray
    losses: np.ndarray
    epsilon: float
    steps: int
    thin: int
    loss: str
    n: int = 0
    feature_names: tuple = ()
    stopped_at_stationary: bool = False
    loss_increases: int = 0
    clamped: int = 0

    @property
    def counts(self):
        """Signed number of epsilon steps taken per coordinate."""
        return np.rint(self.betas / self.epsilon).astype(np.int64)

    @property
    def l1norms(self):
        return np.sum(np.abs(self.betas), axis=1)

    def __eq__(self, other):
        if not isinstance(other, BoostTrace):
            return NotImplemented
        arrays = ("iterations", "betas", "coords", "losses")
        scalars = ("epsilon", "steps", "thin", "loss", "n", "stopped_at_stationary",
                   "loss_increases", "clamped")
        return (
            all(np.array_equal(getattr(self, a), getattr(other, a)) for a in arrays)
            and all(getattr(self, s) == getattr(other, s) for s in scalars)
            and tuple(self.feature_names) == tuple(other.feature_names)
        )


def boost(ds, cfg):
    loss = cfg.loss
    check_task(ds, loss)
    X, y = ds.X, ds.y
    eps = float(cfg.epsilon)
    # integer step counts per coordinate; beta = eps * counts exactly
    counts = np.zeros(ds.p, dtype=np.int64)
    f = np.zeros(ds.n)

    cur = float(np.sum(loss.value(y, f)))
    rec_t, rec_k, rec_j, rec_l = [0], [counts.copy()], [-1], [cur]
    stationary = False
    increases = 0
    clamped = 0
    last = 0
    for t in range(1, cfg.steps + 1):
        grad = X.T @ loss.deriv(y, f)
        if not np.all(np.isfinite(grad)):
            raise NonFinite("non-finite gradient", iteration=t)
        j = int(np.argmax(np.abs(grad)))
        if grad[j] == 0.0:
            stationary = True
            break
        counts[j] -= int(np.sign(grad[j]))
        beta = eps * counts
        f = X @ beta
        clamped += clamp_count(y, f) if loss.margin else 0
        new = float(np.sum(loss.value(y, f)))
        if not np.isfinite(new):
            raise NonFinite("loss overflow", iteration=t)
        if new > cur:
            increases += 1
        cur = new
        last = t
        if t % cfg.thin == 0 or t == cfg.steps:
            rec_t.append(t)
            rec_k.append(counts.copy())
            rec_j.append(j)
            rec_l.append(cur)
    if stationary and rec_t[-1] != last:
        rec_t.append(last)
        rec_k.append(counts.copy())
        rec_j.append(-1)
        rec_l.append(cur)

    counts_arr = np.array(rec_k, dtype=np.int64).reshape(-1, ds.p)
    return BoostTrace(
        iterations=np.array(rec_t),
        betas=eps * counts_arr,
        coords=np.array(rec_j),
        losses=np.array(rec_l),
        epsilon=eps,
        steps=int(cfg.steps),
        thin=int(cfg.thin),
        loss=loss.name,
        n=ds.n,
        feature_names=tuple(ds.feature_names),
        stopped_at_stationary=stationary,
        loss_increases=increases,
        clamped=clamped,
    )


def descent_step_bound(ds, loss, beta):
    """Largest epsilon for which the next boosting step from ``beta`` is
    guaranteed not to raise a loss with curvature bounded by ``c``.

    A step of size eps on coordinate j changes the loss by at most
    ``-eps*|g_j| + c/2 * eps**2 * ||x_j||**2``; the bound is where that
    vanishes. Returns None for losses without a global curvature bound.
    """
    curv = {"squared": 2.0, "huber": 2.0, "logistic": 0.25}.get(loss.name)
    if curv is None:
        return None
    g = ds.X.T @ loss.deriv(ds.y, ds.X @ np.asarray(beta, dtype=float))
    j = int(np.argmax(np.abs(g)))
    return float(2.0 * abs(g[j]) / (curv * ds.X[:, j] @ ds.X[:, j]))


def trace_at_norm(trace, s):
    """Recorded iterate whose L1 norm is closest to ``s`` (earliest on ties)."""
    norms = trace.l1norms
    if s < 0 or s > norms.max() + 1e-12:
        raise OutOfRange(f"norm {s!r} outside [0, {norms.max()!r}]")
    k = int(np.argmin(np.abs(norms - s)))
    return trace.betas[k].copy()
