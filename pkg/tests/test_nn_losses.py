import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cropq.errors import DomainError
from cropq.nn import LossKind, lognormal_interval, loss_and_grad
from cropq.rng import RngStream


def density_nll_oracle(y, mu, sigma):
    # Evaluate the log-normal density directly and take -log.
    pdf = (1.0 / (y * sigma * math.sqrt(2.0 * math.pi))
           * math.exp(-((math.log(y) - mu) ** 2) / (2.0 * sigma ** 2)))
    return -math.log(pdf)


class TestLogNormalNll:
    def test_unit_case_reduces_to_half_log_2pi(self):
        value, _ = loss_and_grad(LossKind.LOG_NORMAL_NLL, np.array([[0.0, 0.0]]), [1.0])
        assert value == pytest.approx(0.9189385332046727, abs=1e-12)

    def test_against_density_oracle(self):
        mu, sigma, y = 0.5, 0.8, 2.0
        pred = np.array([[mu, math.log(sigma)]])
        value, _ = loss_and_grad(LossKind.LOG_NORMAL_NLL, pred, [y])
        assert value == pytest.approx(density_nll_oracle(y, mu, sigma), abs=1e-12)

    def test_nonpositive_target_rejected(self):
        with pytest.raises(DomainError):
            loss_and_grad(LossKind.LOG_NORMAL_NLL, np.array([[0.0, 0.0]]), [0.0])
        with pytest.raises(DomainError):
            loss_and_grad(LossKind.LOG_NORMAL_NLL, np.array([[0.0, 0.0]]), [-1.0])

    def test_reorder_invariance(self):
        gen = RngStream(21).generator()
        pred = np.column_stack([gen.normal(size=12), gen.normal(size=12) * 0.3])
        target = gen.lognormal(0.0, 0.7, size=12)
        v1, _ = loss_and_grad(LossKind.LOG_NORMAL_NLL, pred, target)
        perm = gen.permutation(12)
        v2, _ = loss_and_grad(LossKind.LOG_NORMAL_NLL, pred[perm], target[perm])
        assert v1 == pytest.approx(v2, rel=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_density_integrates_to_one(self, seed):
        # Quadrature over (0, inf) via a dense log-spaced grid.
        gen = RngStream(seed, 5).generator()
        mu = gen.normal() * 1.5
        sigma = float(gen.uniform(0.2, 2.0))
        y = np.exp(np.linspace(mu - 12 * sigma, mu + 12 * sigma, 200_001))
        pdf = (1.0 / (y * sigma * math.sqrt(2 * math.pi))
               * np.exp(-((np.log(y) - mu) ** 2) / (2 * sigma ** 2)))
        integral = np.trapezoid(pdf, y)
        assert integral == pytest.approx(1.0, abs=1e-3)


class TestMse:
    def test_zero_residual(self):
        value, grad = loss_and_grad(LossKind.MEAN_SQUARED_ERROR, [1.0, 2.0], [1.0, 2.0])
        assert value == 0.0
        assert np.array_equal(grad, [0.0, 0.0])

    def test_matches_hand_mean(self):
        value, _ = loss_and_grad(LossKind.MEAN_SQUARED_ERROR, [1.0, 3.0], [0.0, 0.0])
        assert value == pytest.approx((1.0 + 9.0) / 2.0)


@given(mu=st.floats(-3, 3), sigma=st.floats(0.05, 3))
@settings(max_examples=50, deadline=None)
def test_interval_brackets_median(mu, sigma):
    lo, hi = lognormal_interval(mu, sigma)
    assert lo < math.exp(mu) < hi
