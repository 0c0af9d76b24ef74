"""JSON and CSV forms of paths, grid solutions and boosting traces.

JSON layout (all kinds)::

    {"kind": "path" | "grid" | "trace",
     "header": {"loss", "delta", "n", "p", "feature_names", ...},
     "records": [{"lambda" | "iteration", "event", "l1norm", "beta": [...], ...}]}

Floats are written with ``repr`` precision, so JSON round-trips exactly.
CSV has one row per record: ``lambda`` (or ``l1norm``), ``event``,
``beta_1 .. beta_p``.
"""

import csv
import io
import json

import numpy as np

from .boosting import BoostTrace
from .errors import InputError
from .homotopy import PiecewisePath, format_events, parse_events
from .oracle import GridPath


def _floats(a):
    return [float(v) for v in a]


def path_to_dict(path):
    header = {
        "loss": path.loss,
        "delta": path.delta,
        "n": path.n,
        "p": path.p,
        "feature_names": list(path.feature_names),
        "halted": path.halted,
        "endpoint": None
        if path.endpoint is None
        else {"lambda": float(path.endpoint[0]), "beta": _floats(path.endpoint[1])},
    }
    records = []
    for k, lam in enumerate(path.lambdas):
        records.append({
            "lambda": float(lam),
            "event": format_events(path.events[k]),
            "l1norm": float(np.sum(np.abs(path.betas[k]))),
            "beta": _floats(path.betas[k]),
            "direction": _floats(path.directions[k]) if k < len(path.directions) else None,
            "active": [int(j) for j in path.active[k]],
        })
    return {"kind": "path", "header": header, "records": records}


def path_from_dict(d):
    h, recs = d["header"], d["records"]
    p = h["p"]
    end = h.get("endpoint")
    return PiecewisePath(
        lambdas=np.array([r["lambda"] for r in recs], dtype=float),
        betas=np.array([r["beta"] for r in recs], dtype=float).reshape(-1, p),
        directions=np.array(
            [r["direction"] for r in recs if r.get("direction") is not None], dtype=float
        ).reshape(-1, p),
        events=tuple(parse_events(r["event"]) for r in recs),
        active=tuple(tuple(r.get("active", ())) for r in recs),
        loss=h["loss"],
        delta=h.get("delta"),
        n=h["n"],
        feature_names=tuple(h["feature_names"]),
        halted=h.get("halted"),
        endpoint=None if end is None else (end["lambda"], np.array(end["beta"], dtype=float)),
    )


def grid_to_dict(grid):
    header = {
        "loss": grid.loss,
        "delta": grid.delta,
        "n": grid.n,
        "p": int(grid.betas.shape[1]),
        "feature_names": list(grid.feature_names),
    }
    records = [
        {
            "lambda": float(lam),
            "event": "grid",
            "l1norm": float(np.sum(np.abs(b))),
            "beta": _floats(b),
            "kkt": float(kkt),
            "iterations": int(it),
        }
        for lam, b, kkt, it in zip(grid.lambdas, grid.betas, grid.kkt, grid.iterations)
    ]
    return {"kind": "grid", "header": header, "records": records}


def grid_from_dict(d):
    h, recs = d["header"], d["records"]
    return GridPath(
        lambdas=np.array([r["lambda"] for r in recs], dtype=float),
        betas=np.array([r["beta"] for r in recs], dtype=float).reshape(-1, h["p"]),
        kkt=np.array([r["kkt"] for r in recs], dtype=float),
        iterations=np.array([r["iterations"] for r in recs], dtype=int),
        loss=h["loss"],
        delta=h.get("delta"),
        n=h["n"],
        feature_names=tuple(h["feature_names"]),
    )


def trace_to_dict(trace):
    header = {
        "loss": trace.loss,
        "epsilon": trace.epsilon,
        "steps": trace.steps,
        "thin": trace.thin,
        "n": trace.n,
        "p": int(trace.betas.shape[1]),
        "feature_names": list(trace.feature_names),
        "stopped_at_stationary": trace.stopped_at_stationary,
        "loss_increases": trace.loss_increases,
        "clamped": trace.clamped,
    }
    records = [
        {
            "iteration": int(t),
            "event": "boost",
            "l1norm": float(np.sum(np.abs(b))),
            "coordinate": int(j),
            "loss": float(l),
            "beta": _floats(b),
        }
        for t, b, j, l in zip(trace.iterations, trace.betas, trace.coords, trace.losses)
    ]
    return {"kind": "trace", "header": header, "records": records}


def trace_from_dict(d):
    h, recs = d["header"], d["records"]
    return BoostTrace(
        iterations=np.array([r["iteration"] for r in recs], dtype=int),
        betas=np.array([r["beta"] for r in recs], dtype=float).reshape(-1, h["p"]),
        coords=np.array([r["coordinate"] for r in recs], dtype=int),
        losses=np.array([r["loss"] for r in recs], dtype=float),
        epsilon=h["epsilon"],
        steps=h["steps"],
        thin=h["thin"],
        loss=h["loss"],
        n=h["n"],
        feature_names=tuple(h["feature_names"]),
        stopped_at_stationary=h["stopped_at_stationary"],
        loss_increases=h["loss_increases"],
        clamped=h["clamped"],
    )


def to_dict(obj):
    if isinstance(obj, PiecewisePath):
        return path_to_dict(obj)
    if isinstance(obj, GridPath):
        return grid_to_dict(obj)
    if isinstance(obj, BoostTrace):
        return trace_to_dict(obj)
    raise InputError(f"cannot serialize {type(obj).__name__}")


def from_dict(d):
    kind = d.get("kind")
    if kind == "path":
        return path_from_dict(d)
    if kind == "grid":
        return grid_from_dict(d)
    if kind == "trace":
        return trace_from_dict(d)
    raise InputError(f"unknown record kind {kind!r}")


def dumps(obj):
    return json.dumps(to_dict(obj), indent=1)


def loads(text):
    return from_dict(json.loads(text))


def save_json(obj, target):
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def load_json(source):
    with open(source, encoding="utf-8") as fh:
        return loads(fh.read())


def to_csv(obj, axis="lambda"):
    """CSV text with one row per breakpoint / grid point / recorded iterate."""
    d = to_dict(obj)
    if axis not in ("lambda", "l1norm"):
        raise InputError(f"unknown axis {axis!r}")
    if axis == "lambda" and d["kind"] == "trace":
        raise InputError("boosting traces have no lambda axis; use l1norm")
    p = d["header"]["p"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([axis, "event"] + [f"beta_{j + 1}" for j in range(p)])
    for r in d["records"]:
        w.writerow([repr(r[axis]), r["event"]] + [repr(b) for b in r["beta"]])
    return buf.getvalue()
