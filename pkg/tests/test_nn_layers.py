import numpy as np
import pytest

from cropq.errors import ConfigurationError
from cropq.nn import Dense, GruCell, GruLayer, dense_forward, gru_step
from cropq.rng import RngStream


def naive_matmul(w, x):
    # Independent triple-loop oracle.
    out = [0.0] * len(w)
    for i in range(len(w)):
        for j in range(len(w[0])):
            out[i] += w[i][j] * x[j]
    return out


class TestDense:
    def test_identity_weights_relu_clamp(self):
        layer = Dense(2, 2, activation="relu")
        layer.weights.value[:] = np.eye(2)
        assert np.array_equal(dense_forward(layer, [-1.0, 2.0]), [0.0, 2.0])

    def test_direct_substitution(self):
        layer = Dense(1, 1, activation="identity")
        layer.weights.value[:] = [[2.0]]
        layer.bias.value[:] = [1.0]
        assert dense_forward(layer, [3.0]) == pytest.approx([7.0], abs=0)

    def test_matches_naive_matmul_oracle(self):
        rng = RngStream(7)
        layer = Dense(3, 4, activation="identity", rng=rng)
        x = np.ones(3)
        expected = naive_matmul(layer.weights.value.tolist(), x.tolist())
        got = layer.forward(x)
        assert np.max(np.abs(got - np.array(expected))) < 1e-12

    def test_relu_output_nonnegative(self):
        rng = RngStream(3)
        layer = Dense(5, 6, activation="relu", rng=rng)
        x = rng.generator().normal(size=(20, 5))
        assert np.all(layer.forward(x) >= 0.0)

    def test_dimension_mismatch(self):
        layer = Dense(3, 2)
        with pytest.raises(ConfigurationError):
            layer.forward(np.zeros(4))

    def test_forward_deterministic(self):
        layer = Dense(4, 3, rng=RngStream(1))
        x = RngStream(2).generator().normal(size=(8, 4))
        a = layer.forward(x).copy()
        b = layer.forward(x)
        assert np.array_equal(a, b)


def scalar_gru_oracle(cell, xs, h0):
    """Step-by-step scalar-loop GRU, independent of the vectorized layer."""
    import math

    def sig(v):
        return 1.0 / (1.0 + math.exp(-v))

    p = {k: v.value.tolist() for k, v in cell.params.items()}
    nh, ni = cell.hidden_size, cell.input_size
    h = list(h0)
    for x in xs:
        z = [sig(sum(p["Wz"][i][j] * x[j] for j in range(ni))
                 + sum(p["Uz"][i][j] * h[j] for j in range(nh)) + p["bz"][i])
             for i in range(nh)]
        r = [sig(sum(p["Wr"][i][j] * x[j] for j in range(ni))
                 + sum(p["Ur"][i][j] * h[j] for j in range(nh)) + p["br"][i])
             for i in range(nh)]
        c = [math.tanh(sum(p["Wc"][i][j] * x[j] for j in range(ni))
                       + sum(p["Uc"][i][j] * r[j] * h[j] for j in range(nh)) + p["bc"][i])
             for i in range(nh)]
        h = [(1.0 - z[i]) * h[i] + z[i] * c[i] for i in range(nh)]
    return h


class TestGru:
    def test_all_zero_weights_zero_hidden(self):
        cell = GruCell(3, 4)
        h = gru_step(cell, np.zeros(3), np.zeros(4))
        # sigmoid(0)=0.5 and tanh(0)=0, so the blend stays at zero.
        assert np.array_equal(h, np.zeros(4))

    def test_large_negative_update_bias_carries_hidden(self):
        cell = GruCell(2, 3, rng=RngStream(5))
        cell.params["bz"].value[:] = -40.0
        hidden = np.array([0.3, -0.2, 0.7])
        h = gru_step(cell, np.zeros(2), hidden)
        assert np.max(np.abs(h - hidden)) < 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_scalar_oracle_over_sequence(self, seed):
        rng = RngStream(seed, 11)
        layer = GruLayer(3, 4, rng=rng)
        xs = rng.generator().normal(size=(5, 3))
        got = layer.forward(xs)
        expected = scalar_gru_oracle(layer.cell, xs.tolist(), [0.0] * 4)
        assert np.max(np.abs(got - np.array(expected))) < 1e-10

    def test_hidden_state_bounded(self):
        rng = RngStream(9)
        layer = GruLayer(4, 8, rng=rng)
        xs = rng.generator().normal(size=(16, 20, 4)) * 3.0
        h = layer.forward(xs)
        assert np.all(np.abs(h) < 1.0)

    def test_dimension_mismatch(self):
        cell = GruCell(3, 4)
        with pytest.raises(ConfigurationError):
            cell.step(np.zeros((1, 2)), np.zeros((1, 4)))
        with pytest.raises(ConfigurationError):
            cell.step(np.zeros((1, 3)), np.zeros((1, 5)))

    def test_forward_deterministic(self):
        layer = GruLayer(3, 4, rng=RngStream(2))
        xs = RngStream(3).generator().normal(size=(6, 5, 3))
        assert np.array_equal(layer.forward(xs), layer.forward(xs))
