"""Prediction interface tests across the model zoo, plus angles and
serialization."""

import numpy as np
import pytest

from rollerr.models import (
    EnsembleModel,
    LinearModel,
    MlpModel,
    Normalizer,
    TrainConfig,
    ZeroModel,
    collapse_angles,
    expand_angles,
    fit_linear_model,
    fit_normalizer,
    init_mlp,
    load_model,
    predict,
    save_model,
    train_deterministic,
    train_probabilistic,
)
from rollerr.numerics import Rng
from rollerr.systems import Dataset, RandomUniform, generate_dataset, sample_state_space


def small_dataset(seed, noise=0.0, pole=0.5):
    sys = sample_state_space(pole, 3, noise_mult=noise, rng=Rng(seed))
    trajs = generate_dataset(sys, RandomUniform(), 10, 60, Rng(seed + 1))
    return sys, Dataset.from_trajectories(trajs)


class TestZeroModel:
    @pytest.mark.parametrize("dim", [3, 9, 81])
    def test_zero_vector_of_matching_width(self, dim):
        m = ZeroModel(dim)
        out = predict(m, np.ones(dim), np.array([0.5]))
        assert np.array_equal(out, np.zeros(dim))

    def test_persistence_variant(self):
        m = ZeroModel(3, persistence=True)
        s = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(predict(m, s, [0.0]), s)

    def test_rejects_nonfinite_input(self):
        with pytest.raises(ValueError):
            predict(ZeroModel(2), [np.inf, 0.0], [0.0])


class TestLinearModel:
    def test_identity_system_gives_zero_coefficients(self):
        rng = Rng(1)
        s = rng.normal(size=(500, 3))
        ds = Dataset(s, rng.uniform(-1, 1, size=(500, 1)), s.copy())
        m = fit_linear_model(ds)
        assert np.max(np.abs(m.a_hat)) < 1e-10
        assert np.max(np.abs(m.b_hat)) < 1e-10
        s0 = np.array([1.0, 2.0, 3.0])
        assert np.allclose(predict(m, s0, [0.3]), s0, atol=1e-9)

    def test_recovers_true_dynamics(self):
        sys, ds = small_dataset(2)
        m = fit_linear_model(ds)
        assert np.max(np.abs(m.a_hat - (sys.a - np.eye(3)))) < 1e-6
        assert np.max(np.abs(m.b_hat - sys.b)) < 1e-6

    def test_pure_noise_coefficients_shrink_with_data(self):
        def coeff_size(n, seed):
            rng = Rng(seed)
            s = rng.normal(size=(n, 2))
            ns = s + rng.normal(0.0, 0.5, size=(n, 2))  # delta is pure noise
            ds = Dataset(s, rng.uniform(-1, 1, size=(n, 1)), ns)
            m = fit_linear_model(ds)
            return float(np.max(np.abs(m.a_hat)))

        small = np.median([coeff_size(100, 10 + i) for i in range(5)])
        big = np.median([coeff_size(10000, 20 + i) for i in range(5)])
        assert big < small

    def test_requires_enough_transitions(self):
        ds = Dataset(np.zeros((2, 3)), np.zeros((2, 1)), np.zeros((2, 3)))
        with pytest.raises(ValueError):
            fit_linear_model(ds)


class TestFormulationConsistency:
    def test_zero_network_delta_predicts_persistence(self):
        params = init_mlp([4, 8, 3], Rng(3))
        for w in params.weights:
            w[:] = 0.0
        m = MlpModel(params, Normalizer.identity(3, 1), formulation="delta")
        s = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(predict(m, s, [0.5]), s)

    def test_zero_network_state_predicts_target_mean(self):
        _, ds = small_dataset(4, noise=1.0)
        norm = fit_normalizer(ds, "state")
        params = init_mlp([4, 8, 3], Rng(5))
        for w in params.weights:
            w[:] = 0.0
        m = MlpModel(params, norm, formulation="state")
        out = predict(m, np.zeros(3), [0.0])
        assert np.allclose(out, norm.target_mean, atol=1e-12)


class TestEnsemble:
    def test_identical_members_equal_single(self):
        _, ds = small_dataset(6)
        model = train_deterministic(ds, TrainConfig(epochs=2), Rng(7))
        ens = EnsembleModel([model, model, model])
        s, a = np.array([0.1, 0.2, 0.3]), np.array([0.5])
        assert np.allclose(predict(ens, s, a), predict(model, s, a), atol=1e-15)

    def test_mean_matches_member_loop_oracle(self):
        _, ds = small_dataset(8, noise=1.0)
        members = [train_deterministic(ds, TrainConfig(epochs=2), Rng(9).derive(k))
                   for k in range(4)]
        ens = EnsembleModel(members)
        s, a = np.array([0.4, -0.2, 0.9]), np.array([-0.3])
        acc = np.zeros(3)
        for m in members:
            acc += predict(m, s, a)
        assert np.allclose(predict(ens, s, a), acc / 4.0, atol=1e-12)

    def test_mixed_formulations_rejected(self):
        _, ds = small_dataset(10)
        a = train_deterministic(ds, TrainConfig(epochs=1), Rng(11))
        b = train_deterministic(ds, TrainConfig(epochs=1, formulation="state"), Rng(12))
        with pytest.raises(ValueError):
            EnsembleModel([a, b])


class TestGaussianPrediction:
    def test_mean_matches_predict(self):
        _, ds = small_dataset(13, noise=1.0)
        m = train_probabilistic(ds, TrainConfig(epochs=2), Rng(14))
        s, a = np.array([0.1, 0.1, 0.1]), np.array([0.2])
        gp = m.predict_gaussian(s, a)
        assert np.allclose(gp.mean, predict(m, s, a), atol=1e-14)
        assert np.all(gp.log_var >= -10.0) and np.all(gp.log_var <= 5.0)

    def test_deterministic_model_has_no_variance(self):
        _, ds = small_dataset(15)
        m = train_deterministic(ds, TrainConfig(epochs=1), Rng(16))
        with pytest.raises(ValueError):
            m.predict_gaussian(np.zeros(3), [0.0])


class TestAngles:
    def test_zero_angle(self):
        out = expand_angles(np.array([0.0]), [0])
        assert np.allclose(out, [1.0, 0.0], atol=1e-15)

    def test_right_angle(self):
        out = expand_angles(np.array([np.pi / 2]), [0])
        assert np.allclose(out, [0.0, 1.0], atol=1e-12)

    def test_round_trip_sweep(self):
        thetas = Rng(17).uniform(-10.0, 10.0, size=10000)
        vecs = thetas[:, None]
        back = collapse_angles(expand_angles(vecs, [0]), [0])[:, 0]
        want = np.mod(thetas, 2.0 * np.pi)
        err = np.minimum(np.abs(back - want), 2 * np.pi - np.abs(back - want))
        assert np.max(err) < 1e-12

    def test_mixed_coordinates(self):
        s = np.array([1.0, 0.5, 2.0, -0.7])
        out = expand_angles(s, [1, 3])
        assert out.shape == (6,)
        assert out[0] == 1.0 and out[3] == 2.0
        back = collapse_angles(out, [1, 3])
        assert back[0] == 1.0 and back[2] == 2.0
        assert back[1] == pytest.approx(0.5, abs=1e-12)
        assert back[3] == pytest.approx(-0.7 % (2 * np.pi), abs=1e-12)

    def test_degenerate_pair_rejected(self):
        with pytest.raises(ValueError):
            collapse_angles(np.array([0.0, 0.0]), [0])

    def test_unsorted_indices_rejected(self):
        with pytest.raises(ValueError):
            expand_angles(np.zeros(3), [2, 0])


class TestSerialization:
    def assert_same_predictions(self, a, b, dim, adim=1):
        rng = Rng(18)
        for _ in range(5):
            s = rng.normal(size=dim)
            act = rng.uniform(-1, 1, size=adim)
            assert np.array_equal(predict(a, s, act), predict(b, s, act))

    def test_zero_round_trip(self, tmp_path):
        m = ZeroModel(4, persistence=True)
        save_model(m, tmp_path / "m.json")
        back = load_model(tmp_path / "m.json")
        self.assert_same_predictions(m, back, 4)

    def test_linear_round_trip(self, tmp_path):
        _, ds = small_dataset(19)
        m = fit_linear_model(ds)
        save_model(m, tmp_path / "m.json")
        self.assert_same_predictions(m, load_model(tmp_path / "m.json"), 3)

    def test_mlp_round_trip_bit_exact(self, tmp_path):
        _, ds = small_dataset(20, noise=1.0)
        m = train_deterministic(ds, TrainConfig(epochs=2), Rng(21))
        save_model(m, tmp_path / "m.json")
        self.assert_same_predictions(m, load_model(tmp_path / "m.json"), 3)

    def test_ensemble_round_trip(self, tmp_path):
        _, ds = small_dataset(22, noise=1.0)
        members = [train_probabilistic(ds, TrainConfig(epochs=1), Rng(23).derive(k))
                   for k in range(2)]
        m = EnsembleModel(members)
        save_model(m, tmp_path / "m.json")
        self.assert_same_predictions(m, load_model(tmp_path / "m.json"), 3)

    def test_rejects_foreign_files(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text('{"something": "else"}')
        with pytest.raises(ValueError):
            load_model(p)
