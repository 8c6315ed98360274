"""Multi-step rollout composition and normalized per-step error profiles.

A one-step model is applied recursively from an initial state, either
replaying the logged action sequence or recomputing actions from predicted
states. Errors at each step are squared, scaled per dimension by the range
that dimension spans over the evaluation set, and averaged over dimensions:
an error of 1.0 means every coordinate is off by its full observed range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import DynamicsModel, ZeroModel
from .numerics import PercentileSummary, percentiles
from .systems.trajectory import DIVERGENCE_GUARD, Trajectory

ERROR_CAP = 1e6


@dataclass
class RolloutResult:
    """Predicted states (horizon+1, d_s), NaN-filled from diverged_at on."""

    predicted_states: np.ndarray
    diverged_at: int | None = None


@dataclass
class ErrorProfile:
    """Per-step percentile summaries of normalized MSE over an evaluation set."""

    steps: list  # PercentileSummary per rollout step, index 0 <-> step 1
    n_trajectories: int
    range_lo: np.ndarray
    range_hi: np.ndarray

    @property
    def p50(self):
        return np.array([s.p50 for s in self.steps])

    @property
    def p65(self):
        return np.array([s.p65 for s in self.steps])

    @property
    def p95(self):
        return np.array([s.p95 for s in self.steps])

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("step,p50,p65,p95,n\n")
            for i, s in enumerate(self.steps, start=1):
                fh.write(f"{i},{s.p50!r},{s.p65!r},{s.p95!r},{self.n_trajectories}\n")

    @classmethod
    def from_csv(cls, path):
        steps = []
        n = 0
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "step,p50,p65,p95,n":
                raise ValueError(f"unexpected profile header: {header!r}")
            for line in fh:
                _, p50, p65, p95, n = line.strip().split(",")
                steps.append(PercentileSummary(float(p50), float(p65), float(p95)))
        return cls(steps, int(n), np.zeros(0), np.zeros(0))


def compute_ranges(trajectories):
    """Per-dimension (lo, hi) over every state of the evaluation set."""
    stacked = np.concatenate([tr.states for tr in trajectories])
    return stacked.min(axis=0), stacked.max(axis=0)


def rollout_logged(model: DynamicsModel, s0, actions, horizon) -> RolloutResult:
    """Recursively apply the model from s0 replaying a logged action sequence.

    Divergence (non-finite prediction or magnitude beyond 1e12) truncates:
    diverged_at records the first bad step index and later entries are NaN.
    """
    actions = np.atleast_2d(np.asarray(actions, dtype=np.float64))
    if horizon > len(actions):
        raise ValueError(f"horizon {horizon} exceeds {len(actions)} logged actions")
    s = np.asarray(s0, dtype=np.float64)
    states = np.full((horizon + 1, s.shape[0]), np.nan)
    states[0] = s
    for t in range(horizon):
        nxt = model.predict(s, actions[t])
        if not np.all(np.isfinite(nxt)) or np.max(np.abs(nxt)) > DIVERGENCE_GUARD:
            return RolloutResult(states, diverged_at=t + 1)
        states[t + 1] = nxt
        s = nxt
    return RolloutResult(states)


def rollout_recomputed(model: DynamicsModel, policy, s0, horizon,
                       rng=None) -> RolloutResult:
    """Like rollout_logged but with actions recomputed from predicted states."""
    s = np.asarray(s0, dtype=np.float64)
    states = np.full((horizon + 1, s.shape[0]), np.nan)
    states[0] = s
    for t in range(horizon):
        a = np.atleast_1d(policy(s, rng) if rng is not None else policy(s))
        nxt = model.predict(s, a)
        if not np.all(np.isfinite(nxt)) or np.max(np.abs(nxt)) > DIVERGENCE_GUARD:
            return RolloutResult(states, diverged_at=t + 1)
        states[t + 1] = nxt
        s = nxt
    return RolloutResult(states)


def _valid_dims(range_lo, range_hi):
    valid = range_hi > range_lo
    if not np.any(valid):
        raise ValueError("every dimension is degenerate (max <= min)")
    return valid


def per_step_mse(predicted: RolloutResult, truth: Trajectory, range_lo, range_hi):
    """Normalized MSE at steps 1..H.

    Each dimension's error is divided by its range over the evaluation set,
    squared, then averaged across the non-degenerate dimensions. Values
    saturate at the 1e6 cap; steps at or after a divergence report exactly
    the cap.
    """
    valid = _valid_dims(np.asarray(range_lo), np.asarray(range_hi))
    span = (np.asarray(range_hi) - np.asarray(range_lo))[valid]
    horizon = len(predicted.predicted_states) - 1
    if len(truth.states) < horizon + 1:
        raise ValueError("truth trajectory shorter than the rollout")
    out = np.empty(horizon)
    for t in range(1, horizon + 1):
        if predicted.diverged_at is not None and t >= predicted.diverged_at:
            out[t - 1] = ERROR_CAP
            continue
        diff = (predicted.predicted_states[t] - truth.states[t])[valid] / span
        out[t - 1] = min(float(np.mean(diff * diff)), ERROR_CAP)
    return out


def one_step_error_profile(model: DynamicsModel, trajectories,
                           range_lo=None, range_hi=None):
    """Normalized error of single predictions from true states, per time index.

    Index t summarizes, across trajectories, the error of predicting
    s_{t+1} from the true (s_t, a_t) -- no composition. Trajectories must
    share a horizon.
    """
    horizons = {tr.horizon for tr in trajectories}
    if len(horizons) != 1:
        raise ValueError(f"trajectories must share a horizon, got {horizons}")
    horizon = horizons.pop()
    if range_lo is None:
        range_lo, range_hi = compute_ranges(trajectories)
    valid = _valid_dims(np.asarray(range_lo), np.asarray(range_hi))
    span = (np.asarray(range_hi) - np.asarray(range_lo))[valid]

    profile = []
    for t in range(horizon):
        errs = np.empty(len(trajectories))
        for i, tr in enumerate(trajectories):
            pred = model.predict(tr.states[t], tr.actions[t])
            diff = (pred - tr.states[t + 1])[valid] / span
            errs[i] = min(float(np.mean(diff * diff)), ERROR_CAP)
        profile.append(percentiles(errs))
    return profile


def evaluate(model: DynamicsModel, trajectories, mode="logged",
             policies=None, rng=None) -> ErrorProfile:
    """Roll the model out from every trajectory's initial state and summarize
    normalized per-step error percentiles across the set.

    Ranges are computed once over the whole evaluation set. In recomputed
    mode, ``policies`` is one policy for all trajectories or a sequence
    aligned with them (each episode replayed under its own controller).
    """
    if not trajectories:
        raise ValueError("no evaluation trajectories")
    horizon = min(tr.horizon for tr in trajectories)
    range_lo, range_hi = compute_ranges(trajectories)

    errors = np.empty((len(trajectories), horizon))
    for i, tr in enumerate(trajectories):
        if mode == "logged":
            result = rollout_logged(model, tr.states[0], tr.actions, horizon)
        elif mode == "recomputed":
            if policies is None:
                raise ValueError("recomputed mode needs policies")
            policy = policies[i] if isinstance(policies, (list, tuple)) else policies
            sub_rng = rng.derive(i) if rng is not None else None
            result = rollout_recomputed(model, policy, tr.states[0], horizon, sub_rng)
        else:
            raise ValueError(f"unknown mode: {mode!r}")
        errors[i] = per_step_mse(result, tr, range_lo, range_hi)

    steps = [percentiles(errors[:, t]) for t in range(horizon)]
    return ErrorProfile(steps, len(trajectories), range_lo, range_hi)


def zero_profile_closed_form(trajectories):
    """The Zero model's evaluate() result without running any rollouts.

    Predicting the zero vector leaves an error equal to each true state, so
    the per-step normalized MSE is the per-dimension normalized second
    moment of the true states -- computable in closed form.
    """
    horizon = min(tr.horizon for tr in trajectories)
    range_lo, range_hi = compute_ranges(trajectories)
    valid = _valid_dims(range_lo, range_hi)
    span = (range_hi - range_lo)[valid]
    errors = np.empty((len(trajectories), horizon))
    for i, tr in enumerate(trajectories):
        for t in range(1, horizon + 1):
            diff = (np.zeros(tr.state_dim) - tr.states[t])[valid] / span
            errors[i, t - 1] = min(float(np.mean(diff * diff)), ERROR_CAP)
    steps = [percentiles(errors[:, t]) for t in range(horizon)]
    return ErrorProfile(steps, len(trajectories), range_lo, range_hi)
