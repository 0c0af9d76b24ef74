import numpy as np
import pytest

from conftest import orthonormal_problem, random_problem
from regpath.data import BinarySimConfig, Dataset, simulate_binary
from regpath.errors import InputError, MaxItersExceeded
from regpath.homotopy import evaluate_path, lasso_path
from regpath.losses import (
    BinomialDeviance,
    Exponential,
    Hinge,
    Huber,
    Squared,
    kkt_residual,
    lambda_max,
    objective,
)
from regpath.numerics import least_squares
from regpath.oracle import OracleConfig, log_grid, solve_grid, solve_l1


def test_zero_above_lambda_max():
    ds = random_problem(1)
    assert not solve_l1(ds, Squared(), lambda_max(ds, Squared()) * 1.0001).any()


def test_lambda_zero_matches_least_squares():
    ds = random_problem(2)
    np.testing.assert_allclose(solve_l1(ds, Squared(), 0.0), least_squares(ds.X, ds.y), atol=1e-6)


@pytest.mark.parametrize("lam", [0.3, 1.0, 4.0])
def test_orthonormal_closed_form(lam):
    ds = orthonormal_problem(7)
    c = ds.X.T @ ds.y
    expected = np.sign(c) * np.maximum(np.abs(c) - lam / 2, 0)
    np.testing.assert_allclose(solve_l1(ds, Squared(), lam), expected, atol=1e-8)


@pytest.mark.parametrize("loss", [Squared(), Huber(0.8), BinomialDeviance(), Exponential()],
                         ids=lambda l: l.name)
def test_kkt_tolerance_met(loss):
    if loss.margin:
        ds = simulate_binary(BinarySimConfig(80, 4, (1.0, -0.5, 0.0, 0.3), seed=3))
    else:
        ds = random_problem(5)
    lm = lambda_max(ds, loss)
    for frac in (0.5, 0.1, 0.01):
        beta, kkt, _ = solve_l1(ds, loss, frac * lm, return_info=True)
        assert kkt <= 1e-8
        assert kkt_residual(ds, loss, frac * lm, beta) == kkt


def test_objective_never_increases():
    ds = random_problem(6)
    loss, lam = Huber(1.0), 5.0
    objs = [objective(ds, loss, lam, np.zeros(ds.p))]
    for iters in range(1, 40):
        try:
            beta = solve_l1(ds, loss, lam, OracleConfig(max_iters=iters))
        except MaxItersExceeded as err:
            beta = err.beta
        objs.append(objective(ds, loss, lam, beta))
    assert np.all(np.diff(objs) <= 1e-12 * abs(objs[0]))


def test_max_iters_returns_best_iterate():
    ds = random_problem(0)
    with pytest.raises(MaxItersExceeded) as err:
        solve_l1(ds, Squared(), 1.0, OracleConfig(max_iters=3))
    assert err.value.beta is not None and err.value.beta.shape == (ds.p,)
    assert err.value.kkt > 0


def test_hinge_rejected():
    ds = Dataset(np.eye(2), [1.0, -1.0], "binary")
    with pytest.raises(InputError):
        solve_l1(ds, Hinge(), 0.1)


def test_grid_single_point_matches_solve_l1():
    ds = random_problem(4)
    g = solve_grid(ds, Squared(), [3.0])
    np.testing.assert_array_equal(g.betas[0], solve_l1(ds, Squared(), 3.0))


def test_grid_above_lambda_max_all_zero():
    ds = random_problem(4)
    lm = lambda_max(ds, Squared())
    g = solve_grid(ds, Squared(), [1.1 * lm, 1.05 * lm])
    assert not g.betas.any()


def test_grid_validates_order():
    ds = random_problem(4)
    with pytest.raises(InputError):
        solve_grid(ds, Squared(), [1.0, 2.0])
    with pytest.raises(InputError):
        solve_grid(ds, Squared(), [2.0, -1.0])


def test_grid_matches_lasso_path():
    ds = random_problem(8)
    path = lasso_path(ds)
    lams = np.linspace(path.lambdas[0], 0.0, 22)[1:-1]
    g = solve_grid(ds, Squared(), lams)
    for lam, beta in zip(lams, g.betas):
        np.testing.assert_allclose(beta, evaluate_path(path, lam), atol=1e-4)
    assert np.all(g.kkt <= 1e-8)


def test_grid_continuity_with_spacing():
    ds = random_problem(10)
    lm = lambda_max(ds, Squared())
    gaps = []
    for count in (11, 21, 41):
        g = solve_grid(ds, Squared(), np.linspace(0.9 * lm, 0.1 * lm, count))
        gaps.append(np.max(np.abs(np.diff(g.betas, axis=0))))
    assert gaps[0] > gaps[1] > gaps[2]


def test_max_iters_in_grid_names_lambda():
    ds = random_problem(0)
    with pytest.raises(MaxItersExceeded) as err:
        solve_grid(ds, Squared(), [2.0, 1.0], OracleConfig(max_iters=2))
    assert err.value.lam == 2.0


def test_log_grid():
    g = log_grid(100.0, 0.1, 4)
    np.testing.assert_allclose(g, [100, 10, 1, 0.1])
