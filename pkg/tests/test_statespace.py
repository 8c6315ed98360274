"""Tests for the pole-parameterized linear system family."""

import numpy as np
import pytest

from rollerr.numerics import Rng, infinity_norm
from rollerr.systems import (
    LinearSystem,
    TransientNotDecayed,
    closed_form_state,
    sample_state_space,
    step,
    transient_decay_steps,
)


def make_system(a, b, pole, noise_scale=0.0):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).reshape(a.shape[0], -1)
    return LinearSystem(a=a, b=b, pole=pole, noise_scale=noise_scale,
                        dim=a.shape[0], regularized=False, zero_inputs=False,
                        seed=0)


class TestSampling:
    def test_diagonal_is_the_pole(self):
        sys = sample_state_space(0.5, 3, rng=Rng(1))
        assert np.array_equal(np.diag(sys.a), [0.5, 0.5, 0.5])
        # triangular matrix: the eigenvalues are the diagonal
        assert np.allclose(np.linalg.eigvals(sys.a), 0.5, atol=1e-12)

    def test_entry_bounds(self):
        sys = sample_state_space(0.9, 9, rng=Rng(2))
        upper = sys.a[np.triu_indices(9, k=1)]
        assert np.all(np.abs(upper) <= 1.0)
        assert np.all(np.abs(sys.b) <= 1.0)
        assert np.all(np.tril(sys.a, k=-1) == 0.0)

    def test_default_dim3_row_bound(self):
        # rows sum to at most pole + 2 by construction
        for seed in range(100):
            sys = sample_state_space(0.95, 3, rng=Rng(seed))
            assert infinity_norm(sys.a) <= 3.0

    def test_regularized_dim81_sample_and_check(self):
        rng = Rng(3)
        for i in range(1000):
            sys = sample_state_space(0.5, 81, regularized=True, rng=rng.derive(i))
            assert infinity_norm(sys.a) <= 3.0 + 1e-12

    @pytest.mark.parametrize("dim", [3, 9, 27, 81])
    def test_regularization_preserves_diagonal(self, dim):
        rng = Rng(4)
        for i in range(20):
            sys = sample_state_space(0.75, dim, regularized=True, rng=rng.derive(i))
            assert np.array_equal(np.diag(sys.a), np.full(dim, 0.75))

    def test_zero_inputs(self):
        sys = sample_state_space(0.5, 5, zero_inputs=True, rng=Rng(5))
        assert np.array_equal(sys.b, np.zeros((5, 1)))

    def test_rejects_dim_zero(self):
        with pytest.raises(ValueError):
            sample_state_space(0.5, 0, rng=Rng(0))

    def test_matrices_are_immutable(self):
        sys = sample_state_space(0.5, 3, rng=Rng(6))
        with pytest.raises(ValueError):
            sys.a[0, 0] = 99.0


class TestStep:
    def test_hand_example(self):
        sys = make_system([[0.5, 1, 0], [0, 0.5, 0], [0, 0, 0.5]], [0, 0, 1], 0.5)
        out = step(sys, [1.0, 0.0, 0.0], [0.3], Rng(0))
        assert np.allclose(out, [0.5, 0.0, 0.3], atol=1e-15)

    def test_zero_fixed_point(self):
        sys = make_system(np.eye(3) * 0.7, [0, 0, 0], 0.7)
        out = step(sys, np.zeros(3), [0.0], Rng(0))
        assert np.array_equal(out, np.zeros(3))

    def test_matches_closed_form_over_50_steps(self):
        rng = Rng(7)
        for trial in range(5):
            sys = sample_state_space(0.8, 4, noise_mult=0.0, rng=rng.derive(trial))
            s0 = rng.derive(100 + trial).normal(size=4)
            actions = rng.derive(200 + trial).uniform(-1, 1, size=(50, 1))
            s = s0
            noise_rng = Rng(0)
            for t in range(50):
                s = step(sys, s, actions[t], noise_rng)
            ref = closed_form_state(sys, s0, actions, 50)
            assert np.max(np.abs(s - ref)) / max(1.0, np.max(np.abs(ref))) < 1e-10

    def test_rejects_nonfinite_state(self):
        sys = make_system(np.eye(2), [0, 0], 1.0)
        with pytest.raises(ValueError):
            step(sys, [np.inf, 0.0], [0.0], Rng(0))

    def test_noise_scale_zero_is_exact(self):
        sys = make_system(np.eye(2) * 0.5, [1, 1], 0.5, noise_scale=0.0)
        out = step(sys, [2.0, 2.0], [1.0], Rng(3))
        assert np.array_equal(out, [2.0, 2.0])


class TestClosedForm:
    def test_t0_returns_s0(self):
        sys = sample_state_space(0.5, 3, rng=Rng(8))
        s0 = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(closed_form_state(sys, s0, np.zeros((5, 1)), 0), s0)

    def test_zero_actions_transient_only(self):
        sys = sample_state_space(0.6, 3, rng=Rng(9))
        s0 = Rng(10).normal(size=3)
        got = closed_form_state(sys, s0, np.zeros((12, 1)), 12)
        want = np.linalg.matrix_power(sys.a, 12) @ s0
        assert np.allclose(got, want, atol=1e-12)

    def test_rejects_t_beyond_actions(self):
        sys = sample_state_space(0.5, 2, rng=Rng(11))
        with pytest.raises(ValueError):
            closed_form_state(sys, np.zeros(2), np.zeros((3, 1)), 4)


class TestTransientDecay:
    def test_scalar_half(self):
        sys = make_system([[0.5]], [0], 0.5)
        assert transient_decay_steps(sys, [1.0]) == 14

    def test_scalar_tenth_boundary(self):
        # 0.1^4 lands just above 1e-4 in floating point, so strict < gives 5
        sys = make_system([[0.1]], [0], 0.1)
        assert transient_decay_steps(sys, [1.0]) == 5

    def test_tiny_start_is_zero_steps(self):
        sys = make_system([[0.5]], [0], 0.5)
        assert transient_decay_steps(sys, [1e-6]) == 0

    def test_mean_decay_matches_reference(self):
        # dim-3 systems at pole 0.5 with standard-normal starts decay in
        # about 22 steps on average
        rng = Rng(12)
        ks = []
        for i in range(300):
            sys = sample_state_space(0.5, 3, rng=rng.derive(2 * i))
            s0 = rng.derive(2 * i + 1).normal(size=3)
            ks.append(transient_decay_steps(sys, s0))
        assert 21.8 * 0.7 < np.mean(ks) < 21.8 * 1.3

    def test_unstable_pole_raises(self):
        sys = make_system([[1.0]], [0], 1.0)
        with pytest.raises(TransientNotDecayed):
            transient_decay_steps(sys, [1.0])

    def test_cap_raises(self):
        sys = make_system([[0.9999999]], [0], 0.9999999)
        with pytest.raises(TransientNotDecayed):
            transient_decay_steps(sys, [1.0], cap=10)


class TestInvariants:
    def test_noise_free_step_composition_equals_closed_form(self):
        # 100 random systems across dims and poles
        rng = Rng(13)
        for i in range(100):
            dim = [2, 3, 5, 9][i % 4]
            pole = [0.1, 0.5, 0.9, 0.95][(i // 4) % 4]
            sys = sample_state_space(pole, dim, noise_mult=0.0, rng=rng.derive(i))
            s0 = rng.derive(1000 + i).normal(size=dim)
            actions = rng.derive(2000 + i).uniform(-1, 1, size=(20, 1))
            s = s0
            nr = Rng(0)
            for t in range(20):
                s = step(sys, s, actions[t], nr)
            ref = closed_form_state(sys, s0, actions, 20)
            assert np.max(np.abs(s - ref)) / max(1.0, np.max(np.abs(ref))) < 1e-10
