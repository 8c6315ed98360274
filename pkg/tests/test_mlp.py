"""Network forward/backward tests: finite-difference oracle, Adam oracle,
and agreement between the compiled and python kernel backends."""

import numpy as np
import pytest

from rollerr import kernels
from rollerr.kernels import available_backends
from rollerr.models import LOGVAR_HI, LOGVAR_LO, AdamState, adam_step, init_mlp, mlp_forward
from rollerr.models.mlp import MlpParams
from rollerr.numerics import Rng

BACKENDS = available_backends()


def fd_check(backend, params, x, t, loss_fn, rng, n_coords=6, h=1e-6):
    """Compare analytic gradients to central finite differences on a random
    subset of coordinates in every parameter array. Returns max relative
    error, with |a - b| / max(|a|, |b|, 1) as the metric."""

    def loss_only():
        return loss_fn(params.weights, params.biases, x, t)[0]

    _, gw, gb = loss_fn(params.weights, params.biases, x, t)
    analytic = gw + gb
    arrays = params.weights + params.biases
    worst = 0.0
    for arr, grad in zip(arrays, analytic):
        flat = arr.reshape(-1)
        gflat = np.asarray(grad).reshape(-1)
        coords = rng.permutation(flat.size)[:n_coords]
        for c in coords:
            keep = flat[c]
            flat[c] = keep + h
            up = loss_only()
            flat[c] = keep - h
            down = loss_only()
            flat[c] = keep
            fd = (up - down) / (2.0 * h)
            err = abs(fd - gflat[c]) / max(abs(fd), abs(gflat[c]), 1.0)
            worst = max(worst, err)
    return worst


def make_problem(rng, sizes, n=12, prob=False):
    params = init_mlp(sizes, rng)
    x = np.ascontiguousarray(rng.uniform(-1.5, 1.5, size=(n, sizes[0])))
    d_out = sizes[-1] // 2 if prob else sizes[-1]
    t = np.ascontiguousarray(rng.normal(size=(n, d_out)))
    return params, x, t


class TestForward:
    def test_zero_weights_give_bias(self):
        params = init_mlp([3, 4, 2], Rng(1))
        for w in params.weights:
            w[:] = 0.0
        params.biases[-1][:] = [5.0, -1.0]
        out = mlp_forward(params, np.array([9.0, 9.0, 9.0]))
        assert np.array_equal(out, [5.0, -1.0])

    def test_single_layer_is_affine(self):
        rng = Rng(2)
        params = init_mlp([3, 2], rng)
        x = rng.normal(size=3)
        want = params.weights[0].T @ x + params.biases[0]
        assert np.allclose(mlp_forward(params, x), want, atol=1e-12)

    def test_batch_matches_single(self):
        rng = Rng(3)
        params = init_mlp([4, 8, 3], rng)
        xs = rng.normal(size=(5, 4))
        batched = mlp_forward(params, xs)
        for i in range(5):
            assert np.allclose(batched[i], mlp_forward(params, xs[i]), atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.NAME)
class TestGradients:
    def test_mse_gradients(self, backend):
        rng = Rng(10)
        for trial in range(3):
            params, x, t = make_problem(rng.derive(trial), [4, 16, 16, 3])
            err = fd_check(backend, params, x, t, backend.mse_loss_and_grads,
                           rng.derive(100 + trial))
            assert err < 1e-5

    def test_nll_gradients(self, backend):
        rng = Rng(11)

        def loss_fn(ws, bs, xb, tb):
            return backend.nll_loss_and_grads(ws, bs, xb, tb, LOGVAR_LO, LOGVAR_HI)

        for trial in range(3):
            params, x, t = make_problem(rng.derive(trial), [4, 16, 16, 6], prob=True)
            err = fd_check(backend, params, x, t, loss_fn, rng.derive(100 + trial))
            assert err < 1e-5

    def test_nll_clamped_region_has_zero_variance_gradient(self, backend):
        rng = Rng(12)
        params, x, t = make_problem(rng, [2, 8, 4], prob=True)
        params.biases[-1][2:] = -50.0  # push raw log-variance far below the clamp

        def loss_fn(ws, bs, xb, tb):
            return backend.nll_loss_and_grads(ws, bs, xb, tb, LOGVAR_LO, LOGVAR_HI)

        err = fd_check(backend, params, x, t, loss_fn, rng.derive(1))
        assert err < 1e-5
        # the variance-head bias gets exactly zero gradient while clamped
        _, _, gb = loss_fn(params.weights, params.biases, x, t)
        assert np.array_equal(gb[-1][2:], [0.0, 0.0])


class TestBackendAgreement:
    @pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
    def test_forward_and_grads_agree(self):
        a, b = BACKENDS[0], BACKENDS[1]
        rng = Rng(20)
        params, x, t = make_problem(rng, [5, 32, 32, 4], n=16)
        ya = a.forward(params.weights, params.biases, x)
        yb = b.forward(params.weights, params.biases, x)
        assert np.allclose(ya, yb, rtol=1e-12, atol=1e-12)

        la, gwa, gba = a.mse_loss_and_grads(params.weights, params.biases, x, t)
        lb, gwb, gbb = b.mse_loss_and_grads(params.weights, params.biases, x, t)
        assert la == pytest.approx(lb, rel=1e-12)
        for u, v in zip(gwa + gba, gwb + gbb):
            assert np.allclose(u, v, rtol=1e-10, atol=1e-12)

    @pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
    def test_nll_agree(self):
        a, b = BACKENDS[0], BACKENDS[1]
        rng = Rng(21)
        params, x, t = make_problem(rng, [3, 16, 4], n=8, prob=True)
        la, gwa, gba = a.nll_loss_and_grads(params.weights, params.biases, x, t,
                                            LOGVAR_LO, LOGVAR_HI)
        lb, gwb, gbb = b.nll_loss_and_grads(params.weights, params.biases, x, t,
                                            LOGVAR_LO, LOGVAR_HI)
        assert la == pytest.approx(lb, rel=1e-12)
        for u, v in zip(gwa + gba, gwb + gbb):
            assert np.allclose(u, v, rtol=1e-10, atol=1e-12)


class TestAdam:
    def test_zero_gradient_is_a_no_op(self):
        params = init_mlp([2, 3, 1], Rng(30))
        before = params.flat()
        state = AdamState.for_params(params)
        zeros_w = [np.zeros_like(w) for w in params.weights]
        zeros_b = [np.zeros_like(b) for b in params.biases]
        adam_step(params, zeros_w, zeros_b, state, lr=0.1)
        assert np.array_equal(params.flat(), before)

    def test_first_step_magnitude_is_about_lr(self):
        params = init_mlp([1, 1], Rng(31))
        before = params.weights[0].copy()
        state = AdamState.for_params(params)
        g = np.array([[0.7]])
        adam_step(params, [g], [np.zeros(1)], state, lr=1e-3)
        delta = abs(params.weights[0][0, 0] - before[0, 0])
        # bias-corrected first step: lr * |g| / (|g| + eps) ~ lr
        assert delta == pytest.approx(1e-3, rel=1e-6)

    def test_hundred_steps_match_scalar_oracle(self):
        # independent scalar Adam walking down a quadratic
        b1, b2, eps, lr = 0.9, 0.999, 1e-8, 0.05
        p_oracle, m, v = 4.0, 0.0, 0.0
        oracle_path = []
        for t in range(1, 101):
            g = 2.0 * (p_oracle - 3.0)
            m = b1 * m + (1 - b1) * g
            v = b2 * v + (1 - b2) * g * g
            p_oracle -= lr * (m / (1 - b1**t)) / (np.sqrt(v / (1 - b2**t)) + eps)
            oracle_path.append(p_oracle)

        params = MlpParams([np.array([[4.0]])], [np.zeros(1)])
        state = AdamState.for_params(params)
        for t in range(100):
            g = 2.0 * (params.weights[0][0, 0] - 3.0)
            adam_step(params, [np.array([[g]])], [np.zeros(1)], state, lr=lr)
            assert params.weights[0][0, 0] == pytest.approx(oracle_path[t], abs=1e-12)
