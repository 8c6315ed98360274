"""Input/target normalization fitted on training data.

States and targets map to zero-mean unit-variance coordinates; actions map
to [-1, 1] from their observed bounds. The fitted statistics ride along with
every trained model so predictions denormalize transparently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

STD_FLOOR = 1e-8


@dataclass(frozen=True)
class Normalizer:
    state_mean: np.ndarray
    state_std: np.ndarray
    target_mean: np.ndarray
    target_std: np.ndarray
    action_lo: np.ndarray
    action_hi: np.ndarray

    @property
    def state_dim(self):
        return self.state_mean.shape[0]

    @property
    def action_dim(self):
        return self.action_lo.shape[0]

    @classmethod
    def identity(cls, state_dim, action_dim):
        """No-op normalizer (normalization disabled)."""
        zero = np.zeros(state_dim)
        one = np.ones(state_dim)
        return cls(zero, one, zero.copy(), one.copy(),
                   -np.ones(action_dim), np.ones(action_dim))

    def norm_state(self, s):
        return (np.asarray(s, dtype=np.float64) - self.state_mean) / self.state_std

    def norm_action(self, a):
        span = np.maximum(self.action_hi - self.action_lo, STD_FLOOR)
        return 2.0 * (np.asarray(a, dtype=np.float64) - self.action_lo) / span - 1.0

    def norm_target(self, t):
        return (np.asarray(t, dtype=np.float64) - self.target_mean) / self.target_std

    def denorm_target(self, z):
        return np.asarray(z, dtype=np.float64) * self.target_std + self.target_mean


def fit_normalizer(dataset, formulation="delta") -> Normalizer:
    """Per-coordinate statistics of states and training targets.

    Targets are next-state deltas or absolute next states depending on the
    formulation. Standard deviations are floored at 1e-8 so constant
    coordinates normalize to zero instead of dividing by zero.
    """
    if len(dataset) < 2:
        raise ValueError("need at least 2 transitions to fit a normalizer")
    if formulation == "delta":
        targets = dataset.next_states - dataset.states
    elif formulation == "state":
        targets = dataset.next_states
    else:
        raise ValueError(f"unknown formulation: {formulation!r}")
    if dataset.action_dim:
        lo = dataset.actions.min(axis=0)
        hi = dataset.actions.max(axis=0)
    else:
        lo = np.zeros(0)
        hi = np.zeros(0)
    return Normalizer(
        state_mean=dataset.states.mean(axis=0),
        state_std=np.maximum(dataset.states.std(axis=0), STD_FLOOR),
        target_mean=targets.mean(axis=0),
        target_std=np.maximum(targets.std(axis=0), STD_FLOOR),
        action_lo=lo,
        action_hi=hi,
    )
