"""Exact piecewise-linear regularization paths.

Both solvers share one event-driven engine. Along a segment the active
coefficients move as ``beta_A(lam) = beta_A(lam_k) + (lam_k - lam) * gamma_A``
where ``gamma_A`` solves ``H_A gamma_A = s_A`` with ``H_A`` the loss Hessian
restricted to the active columns (and, for the Huber loss, to observations
whose residual sits in the quadratic zone). A segment ends at the nearest of:

* drop     an active coefficient reaches zero and leaves the active set,
* regime   a residual crosses +-delta (Huber only),
* entry    an inactive gradient reaches the current lambda,
* terminal lambda reaches zero.

Events closer than ``tie_tol * max(1, lam_0)`` in lambda are processed at a
single breakpoint in the order drop, regime, entry (lowest index first), and
the direction is recomputed after each one. A coordinate or observation
that changed state at a breakpoint cannot change again until the next one.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .data import REGRESSION
from .errors import (
    CollinearActiveSet,
    DegenerateQuadraticZone,
    InputError,
    MaxItersExceeded,
    NotPositiveDefinite,
    OutOfRange,
    StepLimitExceeded,
)
from .losses import Huber, kkt_residual  # noqa: F401  (re-exported)
from .numerics import cholesky, solve_spd

TIE_TOL = 1e-10

_PRIORITY = {"drop": 0, "regime": 1, "entry": 2}


@dataclass(frozen=True)
class Event:
    kind: str
    index: Optional[int] = None
    into: Optional[str] = None

    def __str__(self):
        if self.kind == "regime":
            return f"regime({self.index},{self.into})"
        if self.index is None:
            return self.kind
        return f"{self.kind}({self.index})"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if "(" not in text:
            return cls(text)
        kind, rest = text.split("(", 1)
        args = rest.rstrip(")").split(",")
        into = args[1] if len(args) > 1 else None
        return cls(kind, int(args[0]), into)


def format_events(events):
    return ";".join(str(e) for e in events)


def parse_events(text):
    return tuple(Event.parse(s) for s in text.split(";") if s.strip())


@dataclass(frozen=True, eq=False)
class PiecewisePath:
    """Breakpoints ``lambdas[0] > ... > lambdas[m]`` with coefficients
    ``betas[k]`` and per-segment directions ``directions[k]`` (change in beta
    per unit decrease of lambda on ``[lambdas[k+1], lambdas[k]]``).

    ``events[k]`` lists what happened at breakpoint k and ``active[k]`` is
    the active set leaving it. ``halted`` names the reason when the path
    stopped early; ``endpoint`` then optionally holds ``(lambda, beta)``
    from the fixed-lambda solver near zero.
    """

    lambdas: np.ndarray
    betas: np.ndarray
    directions: np.ndarray
    events: tuple
    active: tuple
    loss: str = "squared"
    delta: Optional[float] = None
    n: int = 0
    feature_names: tuple = ()
    halted: Optional[str] = None
    endpoint: Optional[tuple] = field(default=None)

    @property
    def p(self):
        return self.betas.shape[1]

    @property
    def n_breakpoints(self):
        return len(self.lambdas)

    def __eq__(self, other):
        if not isinstance(other, PiecewisePath):
            return NotImplemented
        same_end = (self.endpoint is None) == (other.endpoint is None)
        if same_end and self.endpoint is not None:
            same_end = self.endpoint[0] == other.endpoint[0] and np.array_equal(
                self.endpoint[1], other.endpoint[1]
            )
        return (
            same_end
            and np.array_equal(self.lambdas, other.lambdas)
            and np.array_equal(self.betas, other.betas)
            and np.array_equal(self.directions, other.directions)
            and self.events == other.events
            and self.active == other.active
            and (self.loss, self.delta, self.n, tuple(self.feature_names), self.halted)
            == (other.loss, other.delta, other.n, tuple(other.feature_names), other.halted)
        )


def _homotopy(X, y, delta=None, max_events=None, tie_tol=TIE_TOL):
    n, p = X.shape
    huber = delta is not None
    if max_events is None:
        max_events = 10 * p + 100

    if huber:
        quad = np.abs(y) <= delta
        lin_sign = np.where(quad, 0.0, np.sign(y))
    else:
        quad = np.ones(n, dtype=bool)
        lin_sign = np.zeros(n)

    def gradient(beta):
        r = y - X @ beta
        psi = np.where(quad, -2.0 * r, -2.0 * delta * lin_sign) if huber else -2.0 * r
        return X.T @ psi, r

    beta = np.zeros(p)
    g, r = gradient(beta)
    lam = float(np.max(np.abs(g)))
    lambdas, betas, events, actives, directions = [lam], [beta.copy()], [[]], [], []
    halted = None
    if lam == 0.0:
        events[0].append(Event("terminal"))
        actives.append(())
        return lambdas, betas, directions, events, actives, halted

    tol = tie_tol * max(1.0, lam)
    active, signs = [], {}
    barred_vars, barred_obs = set(), set()
    n_events = 0

    while True:
        gamma = np.zeros(p)
        if active:
            A = np.array(active)
            XQA = X[np.ix_(quad, A)]
            H = 2.0 * XQA.T @ XQA
            s_A = np.array([signs[j] for j in active])
            try:
                gamma[A] = solve_spd(H, s_A)
            except NotPositiveDefinite:
                try:
                    cholesky(2.0 * X[:, A].T @ X[:, A])
                    full_rank = True
                except NotPositiveDefinite:
                    full_rank = False
                if huber and full_rank:
                    halted = "degenerate_quadratic_zone"
                    events[-1].append(Event("halt"))
                    break
                if not huber and len(active) > n and events[-1] and events[-1][-1].kind == "entry":
                    # active set outgrew the sample size: stop before the entry
                    last = events[-1].pop()
                    active.remove(last.index)
                    del signs[last.index]
                    events[-1].append(Event("terminal"))
                    break
                raise CollinearActiveSet("active columns are linearly dependent", active) from None

        u = X @ gamma
        c = 2.0 * (X[quad].T @ u[quad])

        cands = []
        for j in active:
            rate = -signs[j] * gamma[j]
            if rate > 0:
                cands.append((max(signs[j] * beta[j], 0.0) / rate, "drop", j, None))
        if huber:
            for i in range(n):
                if quad[i]:
                    if u[i] < 0:
                        cands.append((max(delta - r[i], 0.0) / -u[i], "regime", i, 1.0))
                    if u[i] > 0:
                        cands.append((max(r[i] + delta, 0.0) / u[i], "regime", i, -1.0))
                else:
                    rate = lin_sign[i] * u[i]
                    if rate > 0:
                        gap = max(lin_sign[i] * r[i] - delta, 0.0)
                        cands.append((gap / rate, "regime", i, 0.0))
        in_active = set(active)
        for j in range(p):
            if j in in_active:
                continue
            up = c[j] + 1.0
            if up > 0:
                cands.append((max(lam - g[j], 0.0) / up, "entry", j, -1.0))
            down = 1.0 - c[j]
            if down > 0:
                cands.append((max(lam + g[j], 0.0) / down, "entry", j, 1.0))
        # whatever changed at this breakpoint may not change again here
        cands = [
            cd for cd in cands
            if cd[0] > tol
            or cd[2] not in (barred_obs if cd[1] == "regime" else barred_vars)
        ]

        t_min = min((cd[0] for cd in cands), default=np.inf)
        if t_min >= lam - tol:
            directions.append(gamma)
            actives.append(tuple(active))
            beta = beta + lam * gamma
            lambdas.append(0.0)
            betas.append(beta.copy())
            events.append([Event("terminal")])
            break
        _, kind, idx, arg = min(
            (cd for cd in cands if cd[0] <= t_min + tol),
            key=lambda cd: (_PRIORITY[cd[1]], cd[2]),
        )

        if t_min > tol:
            directions.append(gamma)
            actives.append(tuple(active))
            lam = lam - t_min
            beta = beta + t_min * gamma
            lambdas.append(lam)
            betas.append(beta.copy())
            events.append([])
            barred_vars.clear()
            barred_obs.clear()

        if kind == "drop":
            active.remove(idx)
            del signs[idx]
            beta[idx] = 0.0
            betas[-1][idx] = 0.0
            barred_vars.add(idx)
            events[-1].append(Event("drop", idx))
        elif kind == "entry":
            active.append(idx)
            signs[idx] = arg
            barred_vars.add(idx)
            events[-1].append(Event("entry", idx))
        else:
            if quad[idx]:
                quad[idx] = False
                lin_sign[idx] = arg
                events[-1].append(Event("regime", idx, "linear"))
            else:
                quad[idx] = True
                lin_sign[idx] = 0.0
                events[-1].append(Event("regime", idx, "quadratic"))
            barred_obs.add(idx)
        g, r = gradient(beta)

        n_events += 1
        if n_events > max_events:
            raise StepLimitExceeded(f"more than {max_events} events at lambda={lam!r}")

    actives.append(tuple(active))
    return lambdas, betas, directions, events, actives, halted


def _build(ds, raw, loss, delta):
    lambdas, betas, directions, events, actives, halted = raw
    p = ds.p
    return PiecewisePath(
        lambdas=np.array(lambdas, dtype=float),
        betas=np.array(betas, dtype=float).reshape(-1, p),
        directions=np.array(directions, dtype=float).reshape(-1, p),
        events=tuple(tuple(ev) for ev in events),
        active=tuple(actives[: len(lambdas)]),
        loss=loss,
        delta=delta,
        n=ds.n,
        feature_names=tuple(ds.feature_names),
        halted=halted,
    )


def _require_regression(ds):
    if ds.task != REGRESSION:
        raise InputError("path solvers need a regression dataset")


def lasso_path(ds, max_events=None, tie_tol=TIE_TOL):
    """Full Lasso path for ``sum (y - X beta)**2 + lam * ||beta||_1``.

    Starts at ``lam_0 = max |2 X.T y|`` with beta = 0 and runs to lambda = 0,
    or stops early (``terminal`` event) once the active set would exceed the
    number of observations.
    """
    _require_regression(ds)
    raw = _homotopy(ds.X, ds.y, None, max_events, tie_tol)
    return _build(ds, raw, "squared", None)


def huberized_lasso_path(ds, delta, max_events=None, tie_tol=TIE_TOL, strict=False,
                         finish_with_oracle=True):
    """Full path for the Huber loss with knot ``delta`` plus an L1 penalty.

    If the Hessian restricted to the quadratic-zone observations becomes
    singular the path halts at the last valid breakpoint (``halted`` set,
    final event ``halt``); with ``strict=True`` DegenerateQuadraticZone is
    raised instead. When halted and ``finish_with_oracle`` is set, the
    fixed-lambda solver is run at ``1e-10 * lam_0`` from the last breakpoint
    and stored in ``endpoint``.
    """
    _require_regression(ds)
    if not delta > 0:
        raise ValueError("delta must be positive")
    delta = float(delta)
    raw = _homotopy(ds.X, ds.y, delta, max_events, tie_tol)
    path = _build(ds, raw, "huber", delta)
    if path.halted is None:
        return path
    if strict:
        raise DegenerateQuadraticZone(
            f"quadratic-zone Hessian singular at lambda={path.lambdas[-1]!r}"
        )
    if finish_with_oracle:
        from .oracle import solve_l1

        lam_end = 1e-10 * path.lambdas[0]
        try:
            b = solve_l1(ds, Huber(delta), lam_end, warm_start=path.betas[-1])
        except MaxItersExceeded as exc:
            b = exc.beta
        object.__setattr__(path, "endpoint", (lam_end, b))
    return path


def evaluate_path(path, lam):
    """Coefficients at ``lam`` by linear interpolation between breakpoints."""
    lams = path.lambdas
    if lam > lams[0] or lam < lams[-1] or lam < 0:
        raise OutOfRange(f"lambda {lam!r} outside [{lams[-1]!r}, {lams[0]!r}]")
    # lams is strictly decreasing
    hit = np.flatnonzero(lams == lam)
    if hit.size:
        return path.betas[hit[0]].copy()
    k = int(np.searchsorted(-lams, -lam)) - 1
    return path.betas[k] + (lams[k] - lam) * path.directions[k]
