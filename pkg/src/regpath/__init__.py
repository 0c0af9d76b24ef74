"""Piecewise-linear regularization paths, epsilon-boosting and path comparison."""

from .data import (
    BinarySimConfig,
    ContaminatedSimConfig,
    Dataset,
    load_csv,
    simulate_binary,
    simulate_contaminated,
    standardize,
)
from .homotopy import PiecewisePath, evaluate_path, huberized_lasso_path, lasso_path
from .losses import (
    BinomialDeviance,
    Exponential,
    Hinge,
    Huber,
    Squared,
    gradient_beta,
    kkt_residual,
    lambda_max,
    make_loss,
    objective,
)
from .oracle import GridPath, OracleConfig, solve_grid, solve_l1

__version__ = "0.1.0"
