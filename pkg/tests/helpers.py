"""Small composite networks shared by gradient-check tests."""

import numpy as np

from cropq.nn import Dense, GruLayer, MLP


class GruRegressor:
    """GRU over a window followed by a dense head on the final hidden state."""

    def __init__(self, input_size, hidden_size, out_size, rng):
        self.gru = GruLayer(input_size, hidden_size, rng=rng)
        self.head = Dense(hidden_size, out_size, activation="identity", rng=rng)

    def parameters(self):
        yield from self.gru.parameters()
        yield from self.head.parameters()

    def zero_grad(self):
        self.gru.zero_grad()
        self.head.zero_grad()

    def forward(self, x):
        return self.head.forward(self.gru.forward(x))

    def backward(self, dout):
        return self.gru.backward(self.head.backward(dout))


def make_lognormal_head(rng, in_size=3, hidden=(8,)):
    """MLP whose two outputs are read as (mu, log sigma)."""
    return MLP([in_size, *hidden, 2], rng=rng)


def random_weather_params(gen, months_identical=False):
    """Random but valid generator parameters for round-trip style tests."""
    from cropq.weather import MonthParams, WgenParams

    months = []
    base = None
    for m in range(12):
        if months_identical and base is not None:
            months.append(base)
            continue
        p_wd = float(gen.uniform(0.1, 0.4))
        p_ww = float(gen.uniform(0.3, 0.7))
        shape = float(gen.uniform(0.6, 1.6))
        scale = float(gen.uniform(3.0, 12.0))
        tmax_dry = float(gen.uniform(5.0, 30.0))
        span = float(gen.uniform(8.0, 12.0))
        mp = MonthParams(
            p_wd=p_wd, p_ww=p_ww, gamma_shape=shape, gamma_scale=scale,
            mean_wet=np.array([tmax_dry - 2.0, tmax_dry - span + 1.0, 14.0]),
            mean_dry=np.array([tmax_dry, tmax_dry - span, 20.0]),
            sd_wet=np.array([2.5, 2.0, 4.0]),
            sd_dry=np.array([3.0, 2.5, 5.0]),
        )
        months.append(mp)
        base = mp
    a = np.array([[0.567, 0.086, -0.002],
                  [0.253, 0.504, -0.050],
                  [-0.006, -0.039, 0.244]])
    b = np.array([[0.781, 0.0, 0.0],
                  [0.328, 0.637, 0.0],
                  [0.238, -0.341, 0.873]])
    return WgenParams(months=months, a=a, b=b)
