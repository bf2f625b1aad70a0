"""Finite-difference verification of analytic gradients.

Central differences with step h on every parameter entry, compared to the
backward pass. The relative error uses a scale floor so near-zero gradient
pairs are compared absolutely at that floor rather than blowing up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .losses import LossKind, loss_and_grad

# Gradients smaller than this are compared on an absolute scale.
SCALE_FLOOR = 1e-2


@dataclass
class GradCheckReport:
    max_rel_error: float
    worst_param: str
    rel_tol: float
    passed: bool
    per_param: dict[str, float] = field(default_factory=dict)

    def __str__(self) -> str:  # pragma: no cover
        status = "pass" if self.passed else "FAIL"
        return (f"grad check {status}: max rel err {self.max_rel_error:.3e} "
                f"({self.worst_param}) vs tol {self.rel_tol:.1e}")


def grad_check(network, loss: LossKind, inputs, target,
               rel_tol: float = 1e-4, fd_step: float = 1e-5) -> GradCheckReport:
    """Compare network.backward() gradients to central finite differences.

    network must expose forward(inputs) -> prediction, backward(dprediction),
    parameters() yielding Parameter objects, and zero_grad(). Failures are
    reported, not raised.
    """
    network.zero_grad()
    prediction = network.forward(inputs)
    _, dpred = loss_and_grad(loss, prediction, target)
    network.backward(dpred)
    # Keyed by identity: layer names may repeat across a composite network.
    analytic = {id(p): p.grad.copy() for p in network.parameters()}

    def loss_value() -> float:
        value, _ = loss_and_grad(loss, network.forward(inputs), target)
        return value

    max_err = 0.0
    worst = ""
    per_param: dict[str, float] = {}
    for idx, param in enumerate(network.parameters()):
        label = f"{param.name}[{idx}]"
        a = analytic[id(param)]
        flat = param.value.reshape(-1)
        aflat = a.reshape(-1)
        worst_here = 0.0
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + fd_step
            up = loss_value()
            flat[i] = orig - fd_step
            down = loss_value()
            flat[i] = orig
            numeric = (up - down) / (2.0 * fd_step)
            scale = max(abs(aflat[i]), abs(numeric), SCALE_FLOOR)
            err = abs(aflat[i] - numeric) / scale
            worst_here = max(worst_here, err)
        per_param[label] = worst_here
        if worst_here > max_err:
            max_err = worst_here
            worst = label
    return GradCheckReport(max_rel_error=max_err, worst_param=worst,
                           rel_tol=rel_tol, passed=max_err < rel_tol,
                           per_param=per_param)
