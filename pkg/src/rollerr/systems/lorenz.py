"""Lorenz system integrated with fixed-step RK4.

The chaotic benchmark: no actions, no noise; difficulty comes entirely from
sensitive dependence on initial conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import Rng
from .trajectory import Trajectory


@dataclass(frozen=True)
class LorenzParams:
    sigma: float = 10.0
    eta: float = 28.0        # usually written rho; renamed to keep rho for poles
    beta: float = 8.0 / 3.0
    dt: float = 0.01

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")


def _vector_field(s, p: LorenzParams):
    x, y, z = s
    return np.array([
        p.sigma * (y - x),
        x * (p.eta - z) - y,
        x * y - p.beta * z,
    ])


def lorenz_step(state, params: LorenzParams):
    """One classical RK4 step of size params.dt."""
    s = np.asarray(state, dtype=np.float64)
    h = params.dt
    k1 = _vector_field(s, params)
    k2 = _vector_field(s + 0.5 * h * k1, params)
    k3 = _vector_field(s + 0.5 * h * k2, params)
    k4 = _vector_field(s + h * k3, params)
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def generate_lorenz_dataset(init_lo, init_hi, n_traj, length,
                            params: LorenzParams, rng: Rng):
    """Trajectories of ``length`` transitions from a box of initial states.

    Each coordinate of the initial state is drawn independently from
    U(init_lo, init_hi). Trajectories carry no actions (action dim 0).
    """
    if init_lo >= init_hi:
        raise ValueError(f"empty initial box [{init_lo}, {init_hi})")
    out = []
    for i in range(n_traj):
        s = rng.derive(i).uniform(init_lo, init_hi, size=3)
        states = np.empty((length + 1, 3))
        states[0] = s
        for t in range(length):
            s = lorenz_step(s, params)
            states[t + 1] = s
        out.append(Trajectory(states, np.zeros((length, 0)),
                              system_seed=rng.seed, policy_seed=0))
    return out
