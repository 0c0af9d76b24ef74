"""Command-line entry point.

Exit codes: 0 success, 2 invalid input or flags, 3 numerical failure,
4 I/O failure.
"""

import argparse
import json
import sys

import numpy as np

from . import serialize
from .boosting import BoostConfig, boost
from .data import (
    BINARY,
    REGRESSION,
    BinarySimConfig,
    ContaminatedSimConfig,
    dataset_to_csv,
    load_csv,
    simulate_binary,
    simulate_contaminated,
)
from .errors import InputError, NumericalError
from .experiments import (
    BoostEquivConfig,
    HuberLassoConfig,
    compare,
    run_boost_equivalence,
    run_huber_vs_lasso,
)
from .homotopy import huberized_lasso_path, lasso_path
from .losses import LOSS_TOKENS, kkt_residual, lambda_max, make_loss
from .oracle import log_grid, solve_grid

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def parse_lambdas(spec, lmax=None):
    """``log:START:STOP:COUNT`` or a comma list. START/STOP may be written
    ``max`` or ``max*FACTOR`` to scale the dataset's lambda_max."""

    def value(tok):
        tok = tok.strip()
        if tok.startswith("max"):
            if lmax is None:
                raise InputError("'max' needs a dataset")
            rest = tok[3:]
            return lmax * (float(rest[1:]) if rest.startswith("*") else 1.0)
        return float(tok)

    try:
        if spec.startswith("log:"):
            parts = spec.split(":")
            if len(parts) != 4:
                raise InputError(f"bad grid spec {spec!r}; expected log:START:STOP:COUNT")
            start, stop, count = value(parts[1]), value(parts[2]), int(parts[3])
            if not (start > 0 and stop > 0 and count >= 1):
                raise InputError("log grid needs positive START, STOP and COUNT")
            return log_grid(start, stop, count)
        return np.array([value(t) for t in spec.split(",") if t.strip()])
    except ValueError as exc:
        raise InputError(f"bad lambda spec {spec!r}: {exc}") from None


def _parser():
    ap = argparse.ArgumentParser(prog="regpath", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write a simulated dataset as CSV")
    simsub = sim.add_subparsers(dest="kind", required=True)
    c = simsub.add_parser("contaminated")
    c.add_argument("--n", type=int, default=100)
    c.add_argument("--p", type=int, default=80)
    c.add_argument("--signal", type=float, default=10.0)
    c.add_argument("--inlier-sd", type=float, default=1.0)
    c.add_argument("--outlier-sd", type=float, default=10.0)
    c.add_argument("--outlier-prob", type=float, default=0.1)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--out", required=True)
    b = simsub.add_parser("binary")
    b.add_argument("--n", type=int, default=300)
    b.add_argument("--p", type=int, default=5)
    b.add_argument("--beta", required=True, help="comma-separated true coefficients")
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out", required=True)

    def data_args(p):
        p.add_argument("--data", required=True)
        p.add_argument("--response", default="y")
        p.add_argument("--out", required=True)

    pa = sub.add_parser("path", help="exact Lasso / Huberized Lasso path")
    pa.add_argument("--loss", choices=("squared", "huber"), required=True)
    pa.add_argument("--delta", type=float)
    pa.add_argument("--format", choices=("json", "csv"), default="json")
    data_args(pa)

    bo = sub.add_parser("boost", help="epsilon-boosting trace")
    bo.add_argument("--loss", choices=LOSS_TOKENS, required=True)
    bo.add_argument("--delta", type=float)
    bo.add_argument("--epsilon", type=float, required=True)
    bo.add_argument("--steps", type=int, required=True)
    bo.add_argument("--thin", type=int)
    data_args(bo)

    gr = sub.add_parser("grid", help="fixed-lambda L1 solutions on a grid")
    gr.add_argument("--loss", choices=("squared", "huber", "exp", "logistic"), required=True)
    gr.add_argument("--delta", type=float)
    gr.add_argument("--lambdas", required=True, help="log:START:STOP:COUNT or a,b,c")
    data_args(gr)

    co = sub.add_parser("compare", help="coefficient discrepancy between two outputs")
    co.add_argument("--a", required=True)
    co.add_argument("--b", required=True)
    co.add_argument("--axis", choices=("lambda", "l1norm"), default="l1norm")
    co.add_argument("--out", required=True)

    ex = sub.add_parser("experiment", help="run a packaged experiment")
    ex.add_argument("name", choices=("huber-lasso", "boost-equiv"))
    ex.add_argument("--config", required=True)
    ex.add_argument("--out", required=True)
    return ap


def _loss(args, ap):
    if args.loss == "huber" and args.delta is None:
        ap.error("--loss huber requires --delta")
    return make_loss(args.loss, args.delta)


def _write(text, target):
    with open(target, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _run(args, ap):
    cmd = args.command
    if cmd == "simulate":
        if args.kind == "contaminated":
            cfg = ContaminatedSimConfig(args.n, args.p, args.signal, args.inlier_sd,
                                        args.outlier_sd, args.outlier_prob, args.seed)
            ds = simulate_contaminated(cfg)
        else:
            beta = [float(v) for v in args.beta.split(",")]
            ds = simulate_binary(BinarySimConfig(args.n, args.p, beta, args.seed))
        dataset_to_csv(ds, args.out)
        print(f"simulate {args.kind}: n={ds.n} p={ds.p} seed={args.seed} -> {args.out}")
        return

    if cmd == "path":
        loss = _loss(args, ap)
        ds = load_csv(args.data, args.response, REGRESSION)
        path = lasso_path(ds) if args.loss == "squared" else huberized_lasso_path(ds, args.delta)
        kkt = max(kkt_residual(ds, loss, l, b) for l, b in zip(path.lambdas, path.betas))
        text = serialize.dumps(path) if args.format == "json" else serialize.to_csv(path)
        _write(text, args.out)
        halted = f" halted={path.halted}" if path.halted else ""
        print(f"path {args.loss}: {path.n_breakpoints} breakpoints, kkt max {kkt:.3e}{halted}")
        return

    if cmd == "boost":
        loss = _loss(args, ap)
        ds = load_csv(args.data, args.response, BINARY if loss.margin else REGRESSION)
        trace = boost(ds, BoostConfig(args.epsilon, args.steps, loss, args.thin))
        _write(serialize.dumps(trace), args.out)
        print(f"boost {args.loss}: {int(trace.iterations[-1])} iterations, "
              f"final l1norm {trace.l1norms[-1]:.6g}, loss {trace.losses[-1]:.6g}, "
              f"loss increases {trace.loss_increases}")
        return

    if cmd == "grid":
        loss = _loss(args, ap)
        ds = load_csv(args.data, args.response, BINARY if loss.margin else REGRESSION)
        lams = parse_lambdas(args.lambdas, lambda_max(ds, loss))
        grid = solve_grid(ds, loss, lams)
        _write(serialize.dumps(grid), args.out)
        print(f"grid {args.loss}: {len(grid.lambdas)} points, kkt max {grid.kkt.max():.3e}")
        return

    if cmd == "compare":
        a, b = serialize.load_json(args.a), serialize.load_json(args.b)
        rep = compare(a, b, args.axis)
        _write(json.dumps(rep.to_dict(), indent=1), args.out)
        print(f"compare ({args.axis}): {rep.matched} matched, sup discrepancy {rep.sup:.3e}")
        return

    if cmd == "experiment":
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        if args.name == "huber-lasso":
            rep = run_huber_vs_lasso(HuberLassoConfig.from_dict(raw))
            agg = rep.aggregate
            line = (f"huber-lasso: win rate {agg['huber_win_rate']:.2f}, "
                    f"huber median |b1-signal| {agg['huber_median_abs_b1_error']:.3f}")
        else:
            rep = run_boost_equivalence(BoostEquivConfig.from_dict(raw))
            line = f"boost-equiv: sup discrepancy {rep.aggregate['sup']:.3e}"
        _write(rep.to_json(), args.out)
        print(line)
        return


def main(argv=None):
    ap = _parser()
    try:
        args = ap.parse_args(argv)
        _run(args, ap)
    except SystemExit as exc:
        return exc.code
    except (InputError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
