"""Path comparison and the two desk-scale reproductions: Huberized Lasso vs
Lasso under contaminated noise, and epsilon-boosting vs the exact L1
logistic path."""

import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .boosting import BoostConfig, BoostTrace, boost
from .data import BinarySimConfig, ContaminatedSimConfig, simulate_binary, simulate_contaminated
from .errors import EmptyOverlap, InputError, RegPathError
from .homotopy import huberized_lasso_path, lasso_path
from .losses import BinomialDeviance, lambda_max
from .oracle import log_grid, solve_grid
from . import serialize


@dataclass(frozen=True)
class DiscrepancyReport:
    matched: int
    sup: float
    mean: float
    axis: str
    per_coordinate_max: tuple

    def to_dict(self):
        d = asdict(self)
        d["per_coordinate_max"] = list(self.per_coordinate_max)
        return d


def _compare(points_a, points_b, axis):
    if not points_a or not points_b:
        raise InputError("both point lists must be nonempty")
    s_b = np.array([s for s, _ in points_b], dtype=float)
    b_b = np.array([np.asarray(b, dtype=float) for _, b in points_b])
    order = np.argsort(s_b, kind="stable")
    s_b, b_b = s_b[order], b_b[order]
    lo, hi = s_b[0], s_b[-1]

    diffs = []
    for s, beta in points_a:
        if s < lo or s > hi:
            continue
        k = int(np.searchsorted(s_b, s))
        if s_b[k] == s:
            ref = b_b[k]
        else:
            w = (s - s_b[k - 1]) / (s_b[k] - s_b[k - 1])
            ref = (1.0 - w) * b_b[k - 1] + w * b_b[k]
        diffs.append(np.abs(np.asarray(beta, dtype=float) - ref))
    if not diffs:
        raise EmptyOverlap(f"{axis} ranges of the two paths do not overlap")
    diffs = np.array(diffs)
    per_point = diffs.max(axis=1)
    return DiscrepancyReport(
        matched=len(diffs),
        sup=float(per_point.max()),
        mean=float(per_point.mean()),
        axis=axis,
        per_coordinate_max=tuple(float(v) for v in diffs.max(axis=0)),
    )


def compare_by_norm(points_a, points_b):
    """Coefficient discrepancy between two paths aligned by L1 norm.

    Each point ``(s, beta)`` of A whose norm lies within B's range is paired
    with B linearly interpolated at the same norm (B's exact point when the
    norms coincide).
    """
    return _compare(points_a, points_b, "l1norm")


def compare_by_lambda(points_a, points_b):
    return _compare(points_a, points_b, "lambda")


def points(obj, axis="l1norm"):
    """``(key, beta)`` pairs from a path, grid or trace."""
    betas = obj.betas
    if axis == "l1norm":
        keys = np.sum(np.abs(betas), axis=1)
    elif axis == "lambda":
        if isinstance(obj, BoostTrace):
            raise InputError("boosting traces have no lambda axis")
        keys = obj.lambdas
    else:
        raise InputError(f"unknown axis {axis!r}")
    return [(float(s), b) for s, b in zip(keys, betas)]


def compare(a, b, axis="l1norm"):
    return _compare(points(a, axis), points(b, axis), axis)


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    per_seed: list
    aggregate: dict
    verdicts: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "config": self.config,
            "per_seed": self.per_seed,
            "aggregate": self.aggregate,
            "verdicts": self.verdicts,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)


@dataclass(frozen=True)
class HuberLassoConfig:
    sim: ContaminatedSimConfig = ContaminatedSimConfig()
    delta: float = 1.0
    seeds: tuple = tuple(range(20))
    min_win_rate: float = 0.8
    max_median_b1_error: float = 1.5

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        sim_keys = ContaminatedSimConfig.__dataclass_fields__
        sim = ContaminatedSimConfig(**{k: d.pop(k) for k in list(d) if k in sim_keys})
        if "seeds" in d:
            d["seeds"] = tuple(d["seeds"])
        return cls(sim=sim, **d)

    def to_dict(self):
        d = asdict(self.sim)
        d.pop("seed")
        d.update(delta=self.delta, seeds=list(self.seeds), min_win_rate=self.min_win_rate,
                 max_median_b1_error=self.max_median_b1_error)
        return d


def _oracle_lambda_pick(path, target):
    err = np.linalg.norm(path.betas - target, axis=1)
    k = int(np.argmin(err))
    return k, float(err[k])


def run_huber_vs_lasso(cfg):
    """Per seed: simulate, compute both paths, pick each path's breakpoint
    closest to the true coefficients, and record who got closer."""
    rows = []
    for seed in cfg.seeds:
        sim = replace(cfg.sim, seed=int(seed))
        ds = simulate_contaminated(sim)
        target = np.zeros(sim.p)
        target[0] = sim.signal
        row = {"seed": int(seed)}
        for name, solve in (
            ("huber", lambda: huberized_lasso_path(ds, cfg.delta)),
            ("lasso", lambda: lasso_path(ds)),
        ):
            try:
                path = solve()
            except RegPathError as exc:
                row[f"{name}_error"] = f"{type(exc).__name__}: {exc}"
                continue
            k, err = _oracle_lambda_pick(path, target)
            row[f"{name}_lambda"] = float(path.lambdas[k])
            row[f"{name}_b1"] = float(path.betas[k, 0])
            row[f"{name}_dist"] = err
            row[f"{name}_breakpoints"] = int(path.n_breakpoints)
        if "huber_dist" in row and "lasso_dist" in row:
            row["huber_wins"] = row["huber_dist"] < row["lasso_dist"]
        else:
            row["huber_wins"] = False
        rows.append(row)

    def med(key):
        vals = [abs(r[key] - cfg.sim.signal) for r in rows if key in r]
        return float(np.median(vals)) if vals else float("nan")

    aggregate = {
        "seeds": len(rows),
        "failed": sum(1 for r in rows if "huber_error" in r or "lasso_error" in r),
        "huber_win_rate": float(np.mean([r["huber_wins"] for r in rows])) if rows else 0.0,
        "huber_median_abs_b1_error": med("huber_b1"),
        "lasso_median_abs_b1_error": med("lasso_b1"),
    }
    verdicts = {
        "win_rate_ok": aggregate["huber_win_rate"] >= cfg.min_win_rate,
        "huber_b1_ok": aggregate["huber_median_abs_b1_error"] <= cfg.max_median_b1_error,
    }
    return ExperimentReport(cfg.to_dict(), rows, aggregate, verdicts)


@dataclass(frozen=True)
class BoostEquivConfig:
    sim: BinarySimConfig = BinarySimConfig(300, 5, (1.0, -0.8, 0.6, 0.4, 0.0), seed=7)
    epsilon: float = 0.003
    steps: int = 7000
    n_lambdas: int = 100
    lambda_min_ratio: float = 1e-3
    thin: int = 1

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        sim = BinarySimConfig(
            n=d.pop("n"), p=d.pop("p"), true_beta=tuple(d.pop("true_beta")), seed=d.pop("seed", 0)
        )
        return cls(sim=sim, **d)

    def to_dict(self):
        d = asdict(self.sim)
        d["true_beta"] = list(self.sim.true_beta)
        d.update(epsilon=self.epsilon, steps=self.steps, n_lambdas=self.n_lambdas,
                 lambda_min_ratio=self.lambda_min_ratio, thin=self.thin)
        return d


def boost_equivalence_paths(cfg):
    ds = simulate_binary(cfg.sim)
    loss = BinomialDeviance()
    trace = boost(ds, BoostConfig(cfg.epsilon, cfg.steps, loss, thin=cfg.thin))
    lmax = lambda_max(ds, loss)
    grid = solve_grid(ds, loss, log_grid(lmax, lmax * cfg.lambda_min_ratio, cfg.n_lambdas))
    return ds, trace, grid


def run_boost_equivalence(cfg):
    """Boosting trace vs exact L1-logistic grid, aligned by L1 norm.

    The grid points are the reference side; the dense trace is interpolated
    at each grid norm.
    """
    ds, trace, grid = boost_equivalence_paths(cfg)
    rep = compare(grid, trace, "l1norm")
    bound = max(0.05, 10 * cfg.epsilon)
    row = {
        "seed": cfg.sim.seed,
        "sup": rep.sup,
        "mean": rep.mean,
        "matched": rep.matched,
        "per_coordinate_max": list(rep.per_coordinate_max),
        "boost_final_l1norm": float(trace.l1norms[-1]),
        "grid_max_l1norm": float(np.sum(np.abs(grid.betas[-1]))),
        "grid_kkt_max": float(grid.kkt.max()),
        "boost_loss_increases": trace.loss_increases,
    }
    aggregate = {"sup": rep.sup, "mean": rep.mean, "bound": bound}
    return ExperimentReport(cfg.to_dict(), [row], aggregate, {"sup_within_bound": rep.sup <= bound})


def emit_plot_data(obj, target, fmt="json", axis="lambda"):
    """Write a path, grid or trace as JSON (full, round-trippable) or CSV
    (one row per point, first column ``axis``)."""
    if fmt == "json":
        text = serialize.dumps(obj)
    elif fmt == "csv":
        text = serialize.to_csv(obj, axis)
    else:
        raise InputError(f"unknown format {fmt!r}")
    try:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc}") from exc
