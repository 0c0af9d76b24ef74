"""Per-observation losses in the fit f = x.beta, the L1 penalty, and the
objective, gradient and optimality measures built from them.

All losses are summed over observations (no 1/n factor). Derivatives are
taken with respect to f. Margin losses (hinge, exponential, binomial
deviance) use labels y in {-1, +1}.
"""

from dataclasses import dataclass

import numpy as np

from .data import BINARY
from .errors import DimensionMismatch, InvalidLabel

EXP_CLAMP = 500.0


def _check_margin_labels(y):
    y = np.asarray(y, dtype=float)
    if not np.all((y == 1.0) | (y == -1.0)):
        raise InvalidLabel("margin losses require labels in {-1, +1}")
    return y


def _clamped_exp(z):
    return np.exp(np.clip(z, -EXP_CLAMP, EXP_CLAMP))


def clamp_count(y, f):
    """Number of margins whose exponent hits the +-500 clamp."""
    z = -np.asarray(y, dtype=float) * np.asarray(f, dtype=float)
    return int(np.count_nonzero(np.abs(z) > EXP_CLAMP))


class Loss:
    name = ""
    margin = False
    differentiable = True

    def _prep(self, y, f):
        y = np.asarray(y, dtype=float)
        f = np.asarray(f, dtype=float)
        if self.margin:
            _check_margin_labels(y)
        return y, f

    def value(self, y, f):
        raise NotImplementedError

    def deriv(self, y, f):
        raise NotImplementedError

    def second_deriv(self, y, f):
        raise NotImplementedError

    def kinks(self, y):
        """Fits f at which the loss is not twice differentiable."""
        return ()


@dataclass(frozen=True)
class Squared(Loss):
    name = "squared"

    def value(self, y, f):
        y, f = self._prep(y, f)
        return (y - f) ** 2

    def deriv(self, y, f):
        y, f = self._prep(y, f)
        return -2.0 * (y - f)

    def second_deriv(self, y, f):
        y, f = self._prep(y, f)
        return np.full(np.broadcast(y, f).shape, 2.0)


@dataclass(frozen=True)
class Huber(Loss):
    """Squared inside |y - f| <= delta (knot included), linear outside."""

    delta: float = 1.0
    name = "huber"

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("Huber delta must be positive")

    def value(self, y, f):
        y, f = self._prep(y, f)
        a = np.abs(y - f)
        d = self.delta
        return np.where(a <= d, a * a, d * d + 2.0 * d * (a - d))

    def deriv(self, y, f):
        y, f = self._prep(y, f)
        r = y - f
        return np.where(np.abs(r) <= self.delta, -2.0 * r, -2.0 * self.delta * np.sign(r))

    def second_deriv(self, y, f):
        y, f = self._prep(y, f)
        return np.where(np.abs(y - f) <= self.delta, 2.0, 0.0)

    def kinks(self, y):
        return (y - self.delta, y + self.delta)


@dataclass(frozen=True)
class Hinge(Loss):
    """max(0, 1 - y f); the derivative at the kink y f = 1 is taken as 0."""

    name = "hinge"
    margin = True
    differentiable = False

    def value(self, y, f):
        y, f = self._prep(y, f)
        return np.maximum(0.0, 1.0 - y * f)

    def deriv(self, y, f):
        y, f = self._prep(y, f)
        return np.where(y * f < 1.0, -y, 0.0)

    def second_deriv(self, y, f):
        y, f = self._prep(y, f)
        return np.zeros(np.broadcast(y, f).shape)

    def kinks(self, y):
        return (y,)


@dataclass(frozen=True)
class Exponential(Loss):
    name = "exp"
    margin = True

    def value(self, y, f):
        y, f = self._prep(y, f)
        return _clamped_exp(-y * f)

    def deriv(self, y, f):
        y, f = self._prep(y, f)
        return -y * _clamped_exp(-y * f)

    def second_deriv(self, y, f):
        y, f = self._prep(y, f)
        return _clamped_exp(-y * f)


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


@dataclass(frozen=True)
class BinomialDeviance(Loss):
    """log(1 + exp(-y f)) with natural log."""

    name = "logistic"
    margin = True

    def value(self, y, f):
        y, f = self._prep(y, f)
        return np.logaddexp(0.0, -y * f)

    def deriv(self, y, f):
        y, f = self._prep(y, f)
        return -y * _sigmoid(-y * f)

    def second_deriv(self, y, f):
        y, f = self._prep(y, f)
        m = y * f
        return _sigmoid(m) * _sigmoid(-m)


LOSS_TOKENS = ("squared", "huber", "hinge", "exp", "logistic")


def make_loss(token, delta=None):
    """Loss from its CLI token; ``huber`` requires ``delta``."""
    if token == "squared":
        return Squared()
    if token == "huber":
        if delta is None:
            raise ValueError("huber loss requires delta")
        return Huber(float(delta))
    if token == "hinge":
        return Hinge()
    if token == "exp":
        return Exponential()
    if token == "logistic":
        return BinomialDeviance()
    raise ValueError(f"unknown loss {token!r}; choose from {LOSS_TOKENS}")


def check_task(ds, loss):
    if loss.margin and ds.task != BINARY:
        _check_margin_labels(ds.y)


class L1:
    """The penalty ||beta||_1: subgradient sign(beta), zero curvature."""

    @staticmethod
    def value(beta):
        return float(np.sum(np.abs(beta)))

    @staticmethod
    def subgradient(beta):
        return np.sign(beta)

    @staticmethod
    def curvature(beta):
        return np.zeros((len(beta), len(beta)))


def _beta(ds, beta):
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (ds.p,):
        raise DimensionMismatch(f"beta has shape {beta.shape}, expected ({ds.p},)")
    return beta


def loss_value(loss, y_i, f_i):
    return loss.value(y_i, f_i)


def loss_deriv(loss, y_i, f_i):
    return loss.deriv(y_i, f_i)


def loss_second_deriv(loss, y_i, f_i):
    return loss.second_deriv(y_i, f_i)


def total_loss(ds, loss, beta):
    beta = _beta(ds, beta)
    return float(np.sum(loss.value(ds.y, ds.X @ beta)))


def gradient_beta(ds, loss, beta):
    """Gradient of the summed loss: X.T @ loss'(y, X beta)."""
    beta = _beta(ds, beta)
    return ds.X.T @ loss.deriv(ds.y, ds.X @ beta)


def objective(ds, loss, lam, beta):
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return total_loss(ds, loss, beta) + lam * L1.value(_beta(ds, beta))


def lambda_max(ds, loss):
    """Smallest lambda at which beta = 0 is optimal."""
    return float(np.max(np.abs(gradient_beta(ds, loss, np.zeros(ds.p)))))


def kkt_from_gradient(grad, lam, beta):
    nz = beta != 0
    viol = np.where(nz, np.abs(grad + lam * np.sign(beta)), np.maximum(0.0, np.abs(grad) - lam))
    return float(np.max(viol)) if viol.size else 0.0


def kkt_residual(ds, loss, lam, beta):
    """Largest violation of the L1 stationarity conditions at ``beta``.

    Nonzero coordinates need gradient_j = -lam * sign(beta_j); zero ones
    need |gradient_j| <= lam.
    """
    beta = _beta(ds, beta)
    return kkt_from_gradient(gradient_beta(ds, loss, beta), lam, beta)
