"""Minimal neural-network kernel: dense and GRU layers with hand-written
backward passes, MSE / log-normal NLL losses, Adam, finite-difference
gradient verification, and a checksummed checkpoint format.

Everything runs on float64 numpy arrays. Forward passes are deterministic;
networks hold no global state, so independent instances may be used from
different threads concurrently.
"""

from .layers import MLP, Dense, GruCell, GruLayer, Parameter, dense_forward, gru_step
from .losses import LOG_2PI, LossKind, lognormal_interval, lognormal_nll, loss_and_grad, mse_loss
from .optim import Adam, AdamState, adam_step
from .gradcheck import GradCheckReport, grad_check
from .checkpoint import load_arrays, save_arrays

__all__ = [
    "Parameter",
    "Dense",
    "GruCell",
    "GruLayer",
    "MLP",
    "dense_forward",
    "gru_step",
    "LossKind",
    "LOG_2PI",
    "mse_loss",
    "lognormal_nll",
    "lognormal_interval",
    "loss_and_grad",
    "Adam",
    "AdamState",
    "adam_step",
    "grad_check",
    "GradCheckReport",
    "save_arrays",
    "load_arrays",
]
