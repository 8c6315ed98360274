"""The model zoo behind one next-state prediction interface.

Every model answers ``predict(state, action) -> next state``. Variants:

* ZeroModel          -- predicts the zero vector (or persistence, by flag)
* LinearModel        -- least-squares linear delta dynamics
* MlpModel           -- trained network, deterministic or probabilistic head,
                        delta or true-state formulation
* EnsembleModel      -- mean over member predictions (expectation propagation)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mlp import LOGVAR_HI, LOGVAR_LO, MlpParams, mlp_forward
from .normalizer import Normalizer


@dataclass(frozen=True)
class GaussianPrediction:
    """Diagonal Gaussian over the next state.

    ``mean`` is in state units; ``log_var`` is per-coordinate in normalized
    target units, already clamped to the training bounds.
    """

    mean: np.ndarray
    log_var: np.ndarray


def _check_inputs(s, a, state_dim):
    s = np.asarray(s, dtype=np.float64)
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    if s.shape != (state_dim,):
        raise ValueError(f"expected state of dim {state_dim}, got {s.shape}")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(a))):
        raise ValueError("non-finite prediction input (diverged rollout?)")
    return s, a


class DynamicsModel:
    """Common interface; subclasses implement _predict."""

    kind = "base"
    formulation = "delta"

    @property
    def state_dim(self):
        raise NotImplementedError

    def predict(self, s, a):
        s, a = _check_inputs(s, a, self.state_dim)
        return self._predict(s, a)

    def _predict(self, s, a):
        raise NotImplementedError


def predict(model: DynamicsModel, s, a):
    """Functional spelling of model.predict."""
    return model.predict(s, a)


class ZeroModel(DynamicsModel):
    """Predicts the zero vector as the absolute next state.

    With ``persistence`` the prediction is the current state instead (the
    zero-delta reading); the absolute-zero reading is the default.
    """

    kind = "zero"

    def __init__(self, dim, persistence=False):
        self._dim = int(dim)
        self.persistence = bool(persistence)
        self.formulation = "delta" if persistence else "state"

    @property
    def state_dim(self):
        return self._dim

    def _predict(self, s, a):
        return s.copy() if self.persistence else np.zeros(self._dim)


class LinearModel(DynamicsModel):
    """s' = s + A s + B a with least-squares coefficients on the delta."""

    kind = "linear"
    formulation = "delta"

    def __init__(self, a_hat, b_hat):
        self.a_hat = np.asarray(a_hat, dtype=np.float64)
        self.b_hat = np.asarray(b_hat, dtype=np.float64)

    @property
    def state_dim(self):
        return self.a_hat.shape[0]

    def _predict(self, s, a):
        return s + self.a_hat @ s + self.b_hat @ a


class MlpModel(DynamicsModel):
    """A trained network plus the normalizer it was fitted with."""

    kind = "mlp"

    def __init__(self, params: MlpParams, normalizer: Normalizer,
                 formulation="delta", probabilistic=False, loss_history=None):
        self.params = params
        self.normalizer = normalizer
        self.formulation = formulation
        self.probabilistic = bool(probabilistic)
        self.loss_history = list(loss_history) if loss_history else []

    @property
    def state_dim(self):
        return self.normalizer.state_dim

    def _network_output(self, s, a):
        x = np.concatenate([self.normalizer.norm_state(s),
                            self.normalizer.norm_action(a)])
        return mlp_forward(self.params, x)

    def _predict(self, s, a):
        y = self._network_output(s, a)
        if self.probabilistic:
            y = y[:self.state_dim]
        t = self.normalizer.denorm_target(y)
        return s + t if self.formulation == "delta" else t

    def predict_gaussian(self, s, a) -> GaussianPrediction:
        """Mean next state plus the clamped per-coordinate log variance."""
        if not self.probabilistic:
            raise ValueError("deterministic model has no variance head")
        s, a = _check_inputs(s, a, self.state_dim)
        y = self._network_output(s, a)
        d = self.state_dim
        mean = self.normalizer.denorm_target(y[:d])
        if self.formulation == "delta":
            mean = s + mean
        return GaussianPrediction(mean, np.clip(y[d:], LOGVAR_LO, LOGVAR_HI))


class TrueSystemModel(DynamicsModel):
    """The noise-free true dynamics as a predictor: s' = A s + B a.

    A perfect-model oracle for rollout tests; not something training can
    produce.
    """

    kind = "oracle"
    formulation = "state"

    def __init__(self, a, b):
        self.a = np.asarray(a, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)

    @property
    def state_dim(self):
        return self.a.shape[0]

    def _predict(self, s, a):
        return self.a @ s + self.b @ a


class EnsembleModel(DynamicsModel):
    """Arithmetic mean of member next-state predictions."""

    kind = "ensemble"

    def __init__(self, members):
        if not members:
            raise ValueError("ensemble needs at least one member")
        forms = {m.formulation for m in members}
        if len(forms) != 1:
            raise ValueError(f"members disagree on formulation: {forms}")
        self.members = list(members)
        self.formulation = forms.pop()

    @property
    def state_dim(self):
        return self.members[0].state_dim

    def _predict(self, s, a):
        acc = self.members[0]._predict(s, a).copy()
        for m in self.members[1:]:
            acc += m._predict(s, a)
        return acc / len(self.members)
