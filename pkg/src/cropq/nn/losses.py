"""Loss functions with analytic gradients.

The log-normal negative log-likelihood takes (mu, log sigma) prediction
pairs; sigma is parametrized through its logarithm so the optimization
stays unconstrained while sigma itself remains strictly positive. The
density uses the standard sqrt(2*pi) normalization, under which it
integrates to one over (0, inf). Per sample, with s = log(sigma):

    nll(y; mu, s) = log y + s + 0.5*log(2*pi) + (log y - mu)^2 / (2 e^{2s})

and the total is the sum over samples.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from ..errors import ConfigurationError, DomainError

LOG_2PI = math.log(2.0 * math.pi)

# Two-sided 95% standard-normal quantile, used for prediction intervals.
Z_95 = 1.959963984540054


class LossKind(enum.Enum):
    MEAN_SQUARED_ERROR = "mse"
    LOG_NORMAL_NLL = "lognormal_nll"


def mse_loss(prediction: np.ndarray, target: np.ndarray):
    """Mean squared residual over all elements and its gradient."""
    prediction = np.asarray(prediction, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if prediction.shape != target.shape:
        raise ConfigurationError(
            f"MSE shape mismatch: {prediction.shape} vs {target.shape}")
    resid = prediction - target
    value = float(np.mean(resid * resid))
    grad = 2.0 * resid / resid.size
    return value, grad


def lognormal_nll(prediction: np.ndarray, target: np.ndarray):
    """Summed log-normal NLL for (mu, log sigma) pairs against targets > 0.

    prediction has shape (n, 2) with columns (mu, log sigma); target has
    shape (n,). Returns (value, gradient) with the gradient shaped like
    prediction.
    """
    prediction = np.asarray(prediction, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    if prediction.ndim == 1:
        prediction = prediction[None, :]
    if prediction.ndim != 2 or prediction.shape[1] != 2:
        raise ConfigurationError(
            f"log-normal NLL expects (n, 2) predictions, got {prediction.shape}")
    if prediction.shape[0] != target.size:
        raise ConfigurationError(
            f"log-normal NLL: {prediction.shape[0]} predictions vs {target.size} targets")
    if np.any(target <= 0.0):
        raise DomainError("log-normal NLL requires strictly positive targets")

    mu = prediction[:, 0]
    log_sigma = prediction[:, 1]
    log_y = np.log(target)
    inv_var = np.exp(-2.0 * log_sigma)
    dev = log_y - mu
    value = float(np.sum(log_y + log_sigma + 0.5 * LOG_2PI + 0.5 * dev * dev * inv_var))
    grad = np.empty_like(prediction)
    grad[:, 0] = -dev * inv_var
    grad[:, 1] = 1.0 - dev * dev * inv_var
    return value, grad


def loss_and_grad(kind: LossKind, prediction: np.ndarray, target: np.ndarray):
    if kind is LossKind.MEAN_SQUARED_ERROR:
        return mse_loss(prediction, target)
    if kind is LossKind.LOG_NORMAL_NLL:
        return lognormal_nll(prediction, target)
    raise ConfigurationError(f"unknown loss kind {kind!r}")


def lognormal_interval(mu: float, sigma: float, z: float = Z_95):
    """Central prediction interval of a log-normal distribution."""
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    return math.exp(mu - z * sigma), math.exp(mu + z * sigma)
