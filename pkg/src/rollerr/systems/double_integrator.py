"""Double integrator with noisy observations, for sampling-rate studies.

Slower sampling means a larger true state change per step against the same
measurement noise: the per-transition signal-to-noise ratio improves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import Rng


@dataclass(frozen=True)
class DoubleIntegrator:
    dt: float = 0.25
    measurement_noise_sigma: float = 0.0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.measurement_noise_sigma < 0:
            raise ValueError("noise sigma must be >= 0")


def double_integrator_trajectory(di: DoubleIntegrator, u, horizon,
                                 rng: Rng, x0=(0.0, 0.0)):
    """Exact zero-order-hold rollout under a constant input.

    Returns (true_states, observations), both (horizon+1, 2); observations
    add i.i.d. Gaussian noise per coordinate on top of the true states.
    """
    if horizon < 2:
        raise ValueError(f"need horizon >= 2, got {horizon}")
    dt = di.dt
    a = np.array([[1.0, dt], [0.0, 1.0]])
    b = np.array([0.5 * dt * dt, dt])
    x = np.asarray(x0, dtype=np.float64)
    states = np.empty((horizon + 1, 2))
    states[0] = x
    for t in range(horizon):
        x = a @ x + b * u
        states[t + 1] = x
    noise = rng.normal(0.0, di.measurement_noise_sigma, size=(horizon + 1, 2))
    return states, states + noise


def snr_estimate(true_states, observations):
    """Mean over steps of ||true state change|| / ||observed state change||.

    Equals 1 exactly for noise-free observations; shrinks toward 0 as the
    measurement noise dominates the per-step signal. Steps whose observed
    change is exactly zero are skipped.
    """
    s = np.asarray(true_states, dtype=np.float64)
    o = np.asarray(observations, dtype=np.float64)
    if len(s) < 2 or s.shape != o.shape:
        raise ValueError("need >= 2 aligned states and observations")
    ds = np.linalg.norm(np.diff(s, axis=0), axis=1)
    do = np.linalg.norm(np.diff(o, axis=0), axis=1)
    keep = do > 0.0
    if not np.any(keep):
        raise ValueError("every observed delta is zero; SNR undefined")
    return float(np.mean(ds[keep] / do[keep]))
