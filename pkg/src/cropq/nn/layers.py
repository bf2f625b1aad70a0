"""Dense and GRU layers with explicit forward caches and backward passes.

Gate convention for the GRU step, given input x and previous hidden h:

    z = sigmoid(Wz x + Uz h + bz)          update gate
    r = sigmoid(Wr x + Ur h + br)          reset gate
    c = tanh(Wc x + Uc (r * h) + bc)       candidate state
    h' = (1 - z) * h + z * c

so z -> 0 carries the old hidden state through unchanged and z -> 1
replaces it with the candidate. Backpropagation through time runs over the
full input window with no truncation.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from ..errors import ConfigurationError
from ..rng import as_generator


class Parameter:
    """A weight array paired with an accumulated gradient of the same shape."""

    __slots__ = ("name", "value", "grad")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)

    def zero_grad(self) -> None:
        self.grad[...] = 0.0

    def __repr__(self) -> str:  # pragma: no cover
        return f"Parameter({self.name}, shape={self.value.shape})"


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign to avoid overflow in exp for large |x|.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def glorot_uniform(rng, out_size: int, in_size: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (in_size + out_size))
    return as_generator(rng).uniform(-limit, limit, size=(out_size, in_size))


class Dense:
    """Fully connected layer y = act(W x + b), W shaped (out, in).

    activation is "relu" or "identity". The forward pass caches its input
    and pre-activation for the subsequent backward call.
    """

    ACTIVATIONS = ("relu", "identity")

    def __init__(self, in_size: int, out_size: int, activation: str = "identity",
                 rng=None, name: str = "dense"):
        if activation not in self.ACTIVATIONS:
            raise ConfigurationError(f"unknown activation {activation!r}")
        if in_size <= 0 or out_size <= 0:
            raise ConfigurationError("layer sizes must be positive")
        if rng is None:
            weights = np.zeros((out_size, in_size))
        else:
            weights = glorot_uniform(rng, out_size, in_size)
        self.name = name
        self.in_size = in_size
        self.out_size = out_size
        self.activation = activation
        self.weights = Parameter(f"{name}.weights", weights)
        self.bias = Parameter(f"{name}.bias", np.zeros(out_size))
        self._cache: tuple[np.ndarray, np.ndarray] | None = None

    def parameters(self) -> Iterator[Parameter]:
        yield self.weights
        yield self.bias

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.in_size:
            raise ConfigurationError(
                f"{self.name}: expected input width {self.in_size}, got shape {x.shape}"
            )
        pre = x @ self.weights.value.T + self.bias.value
        self._cache = (x, pre)
        out = np.maximum(pre, 0.0) if self.activation == "relu" else pre
        return out[0] if squeeze else out

    def backward(self, dout: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise ConfigurationError(f"{self.name}: backward before forward")
        x, pre = self._cache
        dout = np.asarray(dout, dtype=np.float64)
        squeeze = dout.ndim == 1
        if squeeze:
            dout = dout[None, :]
        dpre = dout * (pre > 0.0) if self.activation == "relu" else dout
        self.weights.grad += dpre.T @ x
        self.bias.grad += dpre.sum(axis=0)
        dx = dpre @ self.weights.value
        return dx[0] if squeeze else dx


def dense_forward(layer: Dense, x: np.ndarray) -> np.ndarray:
    """Functional alias for :meth:`Dense.forward` (caches for backward)."""
    return layer.forward(x)


class GruCell:
    """Single GRU step with the gate convention documented at module level."""

    GATES = ("z", "r", "c")

    def __init__(self, input_size: int, hidden_size: int, rng=None,
                 init_scale: float = 0.08, name: str = "gru"):
        if input_size <= 0 or hidden_size <= 0:
            raise ConfigurationError("GRU sizes must be positive")
        self.name = name
        self.input_size = input_size
        self.hidden_size = hidden_size
        gen = None if rng is None else as_generator(rng)

        def init(shape):
            if gen is None:
                return np.zeros(shape)
            return gen.uniform(-init_scale, init_scale, size=shape)

        # Per gate: W (hidden, input), U (hidden, hidden), b (hidden).
        # Gate biases start at zero; the paper-side architecture leaves the
        # initialization unconstrained, so these are documented defaults.
        self.params: dict[str, Parameter] = {}
        for gate in self.GATES:
            self.params[f"W{gate}"] = Parameter(f"{name}.W{gate}", init((hidden_size, input_size)))
            self.params[f"U{gate}"] = Parameter(f"{name}.U{gate}", init((hidden_size, hidden_size)))
            self.params[f"b{gate}"] = Parameter(f"{name}.b{gate}", np.zeros(hidden_size))

    def parameters(self) -> Iterator[Parameter]:
        yield from self.params.values()

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def _check(self, x: np.ndarray, h: np.ndarray) -> None:
        if x.shape[-1] != self.input_size:
            raise ConfigurationError(
                f"{self.name}: expected input width {self.input_size}, got {x.shape}")
        if h.shape[-1] != self.hidden_size:
            raise ConfigurationError(
                f"{self.name}: expected hidden width {self.hidden_size}, got {h.shape}")

    def step(self, x: np.ndarray, h: np.ndarray):
        """One GRU step on a (B, in) batch; returns (h_new, cache)."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        h = np.atleast_2d(np.asarray(h, dtype=np.float64))
        self._check(x, h)
        p = {k: v.value for k, v in self.params.items()}
        z = _sigmoid(x @ p["Wz"].T + h @ p["Uz"].T + p["bz"])
        r = _sigmoid(x @ p["Wr"].T + h @ p["Ur"].T + p["br"])
        rh = r * h
        c = np.tanh(x @ p["Wc"].T + rh @ p["Uc"].T + p["bc"])
        h_new = (1.0 - z) * h + z * c
        cache = (x, h, z, r, rh, c)
        return h_new, cache

    def step_backward(self, dh_new: np.ndarray, cache):
        """Backprop one step; accumulates parameter grads, returns (dx, dh)."""
        x, h, z, r, rh, c = cache
        p = self.params
        dh_new = np.atleast_2d(np.asarray(dh_new, dtype=np.float64))

        dz = dh_new * (c - h)
        dc = dh_new * z
        dh = dh_new * (1.0 - z)

        dcin = dc * (1.0 - c * c)
        p["Wc"].grad += dcin.T @ x
        p["Uc"].grad += dcin.T @ rh
        p["bc"].grad += dcin.sum(axis=0)
        drh = dcin @ p["Uc"].value
        dx = dcin @ p["Wc"].value

        dr = drh * h
        dh += drh * r
        drin = dr * r * (1.0 - r)
        p["Wr"].grad += drin.T @ x
        p["Ur"].grad += drin.T @ h
        p["br"].grad += drin.sum(axis=0)
        dx += drin @ p["Wr"].value
        dh += drin @ p["Ur"].value

        dzin = dz * z * (1.0 - z)
        p["Wz"].grad += dzin.T @ x
        p["Uz"].grad += dzin.T @ h
        p["bz"].grad += dzin.sum(axis=0)
        dx += dzin @ p["Wz"].value
        dh += dzin @ p["Uz"].value
        return dx, dh


def gru_step(cell: GruCell, x: np.ndarray, hidden: np.ndarray) -> np.ndarray:
    """Functional single-vector GRU step (no cache retained)."""
    h_new, _ = cell.step(x, hidden)
    return h_new[0] if np.asarray(x).ndim == 1 else h_new


class GruLayer:
    """Runs a GruCell over a (B, T, in) window and exposes the final hidden
    state. backward() unrolls gradients through every step."""

    def __init__(self, input_size: int, hidden_size: int, rng=None, name: str = "gru"):
        self.cell = GruCell(input_size, hidden_size, rng=rng, name=name)
        self._caches: list | None = None

    @property
    def input_size(self) -> int:
        return self.cell.input_size

    @property
    def hidden_size(self) -> int:
        return self.cell.hidden_size

    def parameters(self) -> Iterator[Parameter]:
        yield from self.cell.parameters()

    def zero_grad(self) -> None:
        self.cell.zero_grad()

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        squeeze = x.ndim == 2
        if squeeze:
            x = x[None, ...]
        if x.ndim != 3 or x.shape[2] != self.cell.input_size:
            raise ConfigurationError(
                f"{self.cell.name}: expected (B, T, {self.cell.input_size}) input, got {x.shape}")
        batch, steps, _ = x.shape
        h = np.zeros((batch, self.cell.hidden_size))
        caches = []
        for t in range(steps):
            h, cache = self.cell.step(x[:, t, :], h)
            caches.append(cache)
        self._caches = caches
        return h[0] if squeeze else h

    def backward(self, dh_final: np.ndarray) -> np.ndarray:
        if not self._caches:
            raise ConfigurationError(f"{self.cell.name}: backward before forward")
        dh = np.atleast_2d(np.asarray(dh_final, dtype=np.float64))
        dxs = []
        for cache in reversed(self._caches):
            dx, dh = self.cell.step_backward(dh, cache)
            dxs.append(dx)
        dxs.reverse()
        return np.stack(dxs, axis=1)


class MLP:
    """A stack of Dense layers; hidden layers use ReLU, the head is linear."""

    def __init__(self, sizes: Iterable[int], rng=None, name: str = "mlp"):
        sizes = list(sizes)
        if len(sizes) < 2:
            raise ConfigurationError("MLP needs at least input and output sizes")
        self.layers: list[Dense] = []
        for i, (a, b) in enumerate(zip(sizes[:-1], sizes[1:])):
            act = "identity" if i == len(sizes) - 2 else "relu"
            self.layers.append(Dense(a, b, activation=act, rng=rng, name=f"{name}.{i}"))

    def parameters(self) -> Iterator[Parameter]:
        for layer in self.layers:
            yield from layer.parameters()

    def zero_grad(self) -> None:
        for layer in self.layers:
            layer.zero_grad()

    def forward(self, x: np.ndarray) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, dout: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            dout = layer.backward(dout)
        return dout
