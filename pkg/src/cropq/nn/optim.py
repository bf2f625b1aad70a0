"""Adam optimizer (standard update with bias correction)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ConfigurationError
from .layers import Parameter


class AdamState:
    """Optimizer hyperparameters plus per-parameter moment accumulators.

    Moments are allocated lazily on the first step and must keep the same
    shapes afterwards; the step counter increases strictly by one per call.
    """

    def __init__(self, learning_rate: float, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None
        self.step_count = 0


def adam_step(state: AdamState, params: Sequence[np.ndarray],
              grads: Sequence[np.ndarray]) -> list[np.ndarray]:
    """One Adam update; mutates state, returns the updated parameter arrays."""
    if len(params) != len(grads):
        raise ConfigurationError("params/grads length mismatch")
    params = [np.asarray(p, dtype=np.float64) for p in params]
    grads = [np.asarray(g, dtype=np.float64) for g in grads]
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ConfigurationError(f"gradient shape {g.shape} != parameter shape {p.shape}")
    if state.m is None:
        state.m = [np.zeros_like(p) for p in params]
        state.v = [np.zeros_like(p) for p in params]
    elif len(state.m) != len(params) or any(m.shape != p.shape for m, p in zip(state.m, params)):
        raise ConfigurationError("parameter shapes changed between Adam steps")

    state.step_count += 1
    t = state.step_count
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t
    out = []
    for i, (p, g) in enumerate(zip(params, grads)):
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g
        m_hat = state.m[i] / bc1
        v_hat = state.v[i] / bc2
        out.append(p - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon))
    return out


class Adam:
    """Convenience wrapper applying adam_step in place to Parameter objects."""

    def __init__(self, learning_rate: float, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        self.state = AdamState(learning_rate, beta1, beta2, epsilon)

    @property
    def step_count(self) -> int:
        return self.state.step_count

    def step(self, params: Sequence[Parameter]) -> None:
        values = [p.value for p in params]
        grads = [p.grad for p in params]
        updated = adam_step(self.state, values, grads)
        for p, new in zip(params, updated):
            p.value[...] = new
