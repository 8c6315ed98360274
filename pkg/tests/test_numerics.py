"""Oracle and property tests for the numerical substrate."""

import numpy as np
import pytest

from rollerr.numerics import (
    Rng,
    derive_seed,
    infinity_norm,
    matrix_power_apply,
    percentiles,
    solve_least_squares,
)


class TestRng:
    def test_same_seed_same_stream(self):
        a = Rng(1234).uniform(size=1000)
        b = Rng(1234).uniform(size=1000)
        assert np.array_equal(a, b)

    def test_batching_does_not_change_stream(self):
        r1 = Rng(7)
        whole = r1.uniform(size=10)
        r2 = Rng(7)
        parts = np.concatenate([r2.uniform(size=3), r2.uniform(size=7)])
        assert np.array_equal(whole, parts)

    def test_uniform_bounds(self):
        u = Rng(5).uniform(-2.0, 3.0, size=10000)
        assert u.min() >= -2.0 and u.max() < 3.0
        # roughly uniform: mean near center, spread near (hi-lo)/sqrt(12)
        assert abs(u.mean() - 0.5) < 0.1
        assert abs(u.std() - 5.0 / np.sqrt(12.0)) < 0.05

    def test_normal_moments(self):
        z = Rng(6).normal(2.0, 3.0, size=200000)
        assert abs(z.mean() - 2.0) < 0.05
        assert abs(z.std() - 3.0) < 0.05

    def test_normal_rejects_negative_sigma(self):
        with pytest.raises(ValueError):
            Rng(0).normal(0.0, -1.0)

    def test_derived_streams_differ(self):
        root = Rng(42)
        kids = [root.derive(i).uniform(size=8) for i in range(50)]
        flat = {tuple(k) for k in kids}
        assert len(flat) == 50
        assert derive_seed(42, 0) != derive_seed(42, 1)
        assert derive_seed(42, 0, 1) != derive_seed(42, 1, 0)

    def test_permutation_is_a_permutation(self):
        p = Rng(9).permutation(257)
        assert sorted(p) == list(range(257))

    def test_scalar_draws(self):
        r = Rng(3)
        x = r.uniform(0.0, 1.0)
        assert isinstance(x, float) and 0.0 <= x < 1.0
        y = r.normal()
        assert isinstance(y, float)


class TestPercentiles:
    def test_constant_sample(self):
        s = percentiles([4.2] * 17)
        assert s.p50 == s.p65 == s.p95 == 4.2

    def test_uniform_grid(self):
        s = percentiles(np.arange(101.0))
        assert s.p50 == pytest.approx(50.0, abs=1e-12)
        assert s.p95 == pytest.approx(95.0, abs=1e-12)

    def test_against_sort_oracle(self):
        rng = Rng(11)
        v = rng.normal(0.0, 5.0, size=1000)

        def oracle(vals, q):
            srt = np.sort(np.asarray(vals, dtype=float))
            rank = q / 100.0 * (len(srt) - 1)
            lo = int(np.floor(rank))
            hi = int(np.ceil(rank))
            frac = rank - lo
            return srt[lo] * (1.0 - frac) + srt[hi] * frac

        s = percentiles(v)
        assert s.p50 == pytest.approx(oracle(v, 50), abs=1e-12)
        assert s.p65 == pytest.approx(oracle(v, 65), abs=1e-12)
        assert s.p95 == pytest.approx(oracle(v, 95), abs=1e-12)

    def test_translation_property(self):
        rng = Rng(12)
        v = rng.uniform(-3, 3, size=500)
        base = percentiles(v)
        shifted = percentiles(v + 17.5)
        assert shifted.p50 == pytest.approx(base.p50 + 17.5, abs=1e-12)
        assert shifted.p65 == pytest.approx(base.p65 + 17.5, abs=1e-12)
        assert shifted.p95 == pytest.approx(base.p95 + 17.5, abs=1e-12)

    def test_ordering_invariant(self):
        for seed in range(20):
            v = Rng(seed).normal(size=37)
            s = percentiles(v)
            assert s.p50 <= s.p65 <= s.p95

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            percentiles([])
        with pytest.raises(ValueError):
            percentiles([1.0, np.nan])


class TestLeastSquares:
    def test_identity_system(self):
        w = solve_least_squares(np.eye(2), np.array([2.0, 3.0]))
        assert np.allclose(w, [2.0, 3.0], atol=1e-14)

    def test_exact_affine_fit(self):
        x = np.array([[1.0, 1.0], [1.0, 2.0], [1.0, 3.0]])
        b = np.array([3.0, 5.0, 7.0])
        w = solve_least_squares(x, b)
        assert np.allclose(w, [1.0, 2.0], atol=1e-12)

    def test_against_normal_equations_oracle(self):
        rng = Rng(21)
        x = rng.normal(size=(50, 5))
        w_true = rng.normal(size=5)
        b = x @ w_true
        w = solve_least_squares(x, b)
        w_oracle = np.linalg.inv(x.T @ x) @ (x.T @ b)
        assert np.max(np.abs(w - w_oracle)) / max(1.0, np.max(np.abs(w_oracle))) < 1e-9

    def test_residual_orthogonality(self):
        rng = Rng(22)
        x = rng.normal(size=(40, 6))
        b = rng.normal(size=(40, 2))
        w = solve_least_squares(x, b)
        assert np.max(np.abs(x.T @ (x @ w - b))) < 1e-8

    def test_rank_deficient_uses_ridge(self):
        # duplicate column: plain QR solve would divide by ~0
        col = Rng(23).normal(size=30)
        x = np.stack([col, col], axis=1)
        b = 2.0 * col
        w = solve_least_squares(x, b)
        assert np.all(np.isfinite(w))
        # ridge splits the weight evenly across the duplicated columns
        assert np.allclose(w, [1.0, 1.0], atol=1e-4)

    def test_all_zero_design(self):
        w = solve_least_squares(np.zeros((5, 3)), np.ones(5))
        assert np.array_equal(w, np.zeros(3))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            solve_least_squares(np.eye(3), np.ones(4))


class TestMatrixPowerApply:
    def test_zeroth_power(self):
        a = Rng(31).normal(size=(4, 4))
        x = Rng(32).normal(size=4)
        assert np.array_equal(matrix_power_apply(a, x, 0), x)

    def test_scalar_scaling(self):
        a = 0.5 * np.eye(2)
        out = matrix_power_apply(a, np.array([1.0, 1.0]), 2)
        assert np.allclose(out, [0.25, 0.25], atol=1e-15)

    def test_against_naive_oracle(self):
        rng = Rng(33)
        a = rng.normal(size=(3, 3))
        x = rng.normal(size=3)
        # naive oracle: explicit per-entry sums
        y = x.copy()
        for _ in range(7):
            y_next = np.zeros(3)
            for i in range(3):
                for j in range(3):
                    y_next[i] += a[i, j] * y[j]
            y = y_next
        assert np.allclose(matrix_power_apply(a, x, 7), y, atol=1e-12)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            matrix_power_apply(np.ones((2, 3)), np.ones(3), 1)


class TestInfinityNorm:
    def test_identity(self):
        assert infinity_norm(np.eye(7)) == 1.0

    def test_hand_rowsum(self):
        assert infinity_norm(np.array([[1.0, -2.0], [0.0, 3.0]])) == 3.0

    def test_against_rowsum_oracle(self):
        a = Rng(41).normal(size=(27, 27))
        best = 0.0
        for i in range(27):
            s = 0.0
            for j in range(27):
                s += abs(a[i, j])
            best = max(best, s)
        assert infinity_norm(a) == best
