"""Datasets, CSV ingestion and the simulation generators."""

import csv
import io
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConstantColumn, DimensionMismatch, LabelError, ParseError
from .numerics import RandomStream, _box_muller, _words_to_uniform, as_matrix, as_vector

REGRESSION = "regression"
BINARY = "binary"
TASKS = (REGRESSION, BINARY)


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    task: str = REGRESSION
    feature_names: Optional[tuple] = None

    def __post_init__(self):
        X = as_matrix(self.X, "X")
        y = as_vector(self.y, "y")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatch(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise DimensionMismatch("dataset needs n >= 1 and p >= 1")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.task == BINARY and not np.all(np.isin(y, (-1.0, 1.0))):
            raise LabelError("binary task requires labels in {-1, +1}")
        names = self.feature_names
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(X.shape[1]))
        elif len(names) != X.shape[1]:
            raise DimensionMismatch(f"{len(names)} feature names for {X.shape[1]} columns")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(names))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.task == other.task
            and self.feature_names == other.feature_names
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )

    def with_intercept(self, name="intercept"):
        """Append a constant column. It is L1-penalized like any other."""
        warnings.warn("the intercept column will be L1-penalized", stacklevel=2)
        X = np.column_stack([self.X, np.ones(self.n)])
        return Dataset(X, self.y, self.task, self.feature_names + (name,))


def load_csv(source, response_column="y", task=REGRESSION):
    """Read a numeric CSV with a header row into a Dataset.

    ``source`` is a path or an open text stream. Under the binary task,
    0/1 labels are remapped to -1/+1 with a warning.
    """
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    if hasattr(source, "read"):
        rows = list(csv.reader(source))
    else:
        with open(source, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file: no header row")
    header = [h.strip() for h in rows[0]]
    if response_column not in header:
        raise ParseError(f"response column {response_column!r} not in header {header}")
    values = []
    for r, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(row)}", row=r)
        parsed = []
        for name, cell in zip(header, row):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", row=r, column=name) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite cell {cell!r}", row=r, column=name)
            parsed.append(v)
        values.append(parsed)
    if not values:
        raise ParseError("no data rows")
    data = np.array(values)
    k = header.index(response_column)
    y = data[:, k]
    X = np.delete(data, k, axis=1)
    names = tuple(h for i, h in enumerate(header) if i != k)
    if task == BINARY:
        y = _binary_labels(y)
    return Dataset(X, y, task, names)


def _binary_labels(y):
    labels = set(np.unique(y).tolist())
    if labels <= {-1.0, 1.0}:
        return y
    if labels <= {0.0, 1.0}:
        warnings.warn("binary labels 0/1 remapped to -1/+1", stacklevel=3)
        return np.where(y == 1.0, 1.0, -1.0)
    raise LabelError(f"binary task needs labels in {{-1,+1}} or {{0,1}}, found {sorted(labels)}")


def dataset_to_csv(ds, target=None, response_column="y"):
    """Write ``ds`` in the load_csv format. Returns the text if no target."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(ds.feature_names) + [response_column])
    for xi, yi in zip(ds.X, ds.y):
        w.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])
    text = buf.getvalue()
    if target is None:
        return text
    with open(target, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return None


@dataclass(frozen=True)
class ContaminatedSimConfig:
    """Linear model with a two-component Gaussian noise mixture.

    ``outlier_sd`` is a standard deviation: a component written N(0, 100)
    in mean/variance notation has ``outlier_sd=10``.
    """

    n: int = 100
    p: int = 80
    signal: float = 10.0
    inlier_sd: float = 1.0
    outlier_sd: float = 10.0
    outlier_prob: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.outlier_prob <= 1.0:
            raise ValueError("outlier_prob must lie in [0, 1]")
        if self.inlier_sd <= 0 or self.outlier_sd <= 0:
            raise ValueError("standard deviations must be positive")
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")


@dataclass(frozen=True)
class BinarySimConfig:
    n: int
    p: int
    true_beta: tuple
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "true_beta", tuple(float(b) for b in self.true_beta))
        if len(self.true_beta) != self.p:
            raise ValueError(f"true_beta has {len(self.true_beta)} entries, p = {self.p}")


def simulate_contaminated(cfg):
    """y = signal * x_1 + noise, noise from an inlier/outlier normal mixture.

    Draw order: the n x p design row-major, then per observation one
    uniform (component choice) followed by one normal.
    """
    stream = RandomStream(cfg.seed)
    X = stream.normals(cfg.n * cfg.p).reshape(cfg.n, cfg.p)
    w = stream.raw(3 * cfg.n).reshape(cfg.n, 3)
    pick = _words_to_uniform(w[:, 0])
    z = _box_muller(w[:, 1], w[:, 2])
    sd = np.where(pick < cfg.outlier_prob, cfg.outlier_sd, cfg.inlier_sd)
    y = cfg.signal * X[:, 0] + sd * z
    return Dataset(X, y, REGRESSION)


def simulate_binary(cfg):
    """Logistic labels: P(y = +1 | x) = 1 / (1 + exp(-x.beta))."""
    stream = RandomStream(cfg.seed)
    X = stream.normals(cfg.n * cfg.p).reshape(cfg.n, cfg.p)
    u = stream.uniforms(cfg.n)
    prob = 1.0 / (1.0 + np.exp(-np.clip(X @ np.asarray(cfg.true_beta), -500, 500)))
    y = np.where(u < prob, 1.0, -1.0)
    return Dataset(X, y, BINARY)


@dataclass(frozen=True)
class Standardization:
    """Column transform x' = (x - mean) / scale applied by ``standardize``."""

    mean: np.ndarray
    scale: np.ndarray

    def coef_to_original(self, beta):
        """Map coefficients fit on the standardized design back.

        Returns ``(beta_original, intercept)`` such that
        ``X @ beta_original + intercept`` equals the standardized predictions.
        """
        b = np.asarray(beta, dtype=float) / self.scale
        return b, -float(self.mean @ b)


def standardize(ds, center=True, scale=True):
    X = ds.X
    mean = X.mean(axis=0) if center else np.zeros(ds.p)
    if scale:
        if ds.n < 2:
            raise ConstantColumn("scaling needs at least two rows")
        sd = X.std(axis=0, ddof=1)
        bad = np.flatnonzero(sd == 0)
        if bad.size:
            raise ConstantColumn(f"zero-variance columns {[ds.feature_names[j] for j in bad]}")
    else:
        sd = np.ones(ds.p)
    Z = (X - mean) / sd
    return Dataset(Z, ds.y, ds.task, ds.feature_names), Standardization(mean, sd)
