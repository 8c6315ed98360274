"""Cart-pole balancing environment with a state-feedback regulator.

A nonlinear stabilization task standing between the linear study systems and
the chaotic Lorenz case: Euler-integrated cart-pole dynamics, uniform state
noise, and per-episode linear-quadratic regulator gains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import Rng
from .policies import LinearFeedback
from .trajectory import Trajectory


class RiccatiNotConverged(Exception):
    pass


@dataclass(frozen=True)
class Cartpole:
    cart_mass: float = 1.0
    pole_mass: float = 0.1
    half_length: float = 0.5
    gravity: float = 9.81
    dt: float = 0.02
    state_noise_halfwidth: float = 0.1

    def __post_init__(self):
        for name in ("cart_mass", "pole_mass", "half_length", "gravity", "dt"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    def quiet(self):
        """Same physics without process noise."""
        return Cartpole(self.cart_mass, self.pole_mass, self.half_length,
                        self.gravity, self.dt, 0.0)


def cartpole_step(cp: Cartpole, s, force, rng: Rng | None = None):
    """One Euler step. State is (cart pos, cart vel, pole angle, pole rate);
    angle 0 is upright. Adds uniform noise per coordinate when configured."""
    s = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite cartpole state")
    f = float(np.asarray(force).reshape(-1)[0])
    x, x_dot, theta, theta_dot = s

    total = cp.cart_mass + cp.pole_mass
    sin, cos = np.sin(theta), np.cos(theta)
    temp = (f + cp.pole_mass * cp.half_length * theta_dot**2 * sin) / total
    theta_acc = (cp.gravity * sin - cos * temp) / (
        cp.half_length * (4.0 / 3.0 - cp.pole_mass * cos**2 / total))
    x_acc = temp - cp.pole_mass * cp.half_length * theta_acc * cos / total

    out = np.array([
        x + cp.dt * x_dot,
        x_dot + cp.dt * x_acc,
        theta + cp.dt * theta_dot,
        theta_dot + cp.dt * theta_acc,
    ])
    if cp.state_noise_halfwidth > 0.0:
        if rng is None:
            raise ValueError("noisy cartpole step needs an Rng")
        out = out + rng.uniform(-cp.state_noise_halfwidth,
                                cp.state_noise_halfwidth, size=4)
    return out


def linearized_discrete(cp: Cartpole):
    """(A, B) of the noise-free step about the upright equilibrium, by
    central differences."""
    quiet = cp.quiet()
    h = 1e-6
    a = np.empty((4, 4))
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        a[:, j] = (cartpole_step(quiet, e, 0.0) - cartpole_step(quiet, -e, 0.0)) / (2 * h)
    b = ((cartpole_step(quiet, np.zeros(4), h) - cartpole_step(quiet, np.zeros(4), -h))
         / (2 * h))
    return a, b.reshape(4, 1)


def lqr_gains(cp: Cartpole, q_scale=1.0, r_scale=1.0, tol=1e-10, cap=10**4):
    """Regulator gain K (1, 4) from iterating the discrete Riccati recursion
    to its fixed point on the linearized upright dynamics.

    The stabilizing control is force = -K @ state.
    """
    if q_scale <= 0 or r_scale <= 0:
        raise ValueError("q_scale and r_scale must be > 0")
    a, b = linearized_discrete(cp)
    q = q_scale * np.eye(4)
    r = np.array([[r_scale]])
    p = q.copy()
    for _ in range(cap):
        btp = b.T @ p
        gain = np.linalg.solve(r + btp @ b, btp @ a)
        p_next = q + a.T @ p @ a - a.T @ p @ b @ gain
        if np.max(np.abs(p_next - p)) < tol:
            return np.linalg.solve(r + b.T @ p_next @ b, b.T @ p_next @ a)
        p = p_next
    raise RiccatiNotConverged(f"no fixed point within {cap} iterations")


def riccati_fixed_point(cp: Cartpole, q_scale=1.0, r_scale=1.0,
                        tol=1e-10, cap=10**4):
    """The converged cost-to-go matrix P (used by the test oracles)."""
    a, b = linearized_discrete(cp)
    q = q_scale * np.eye(4)
    r = np.array([[r_scale]])
    p = q.copy()
    for _ in range(cap):
        btp = b.T @ p
        gain = np.linalg.solve(r + btp @ b, btp @ a)
        p_next = q + a.T @ p @ a - a.T @ p @ b @ gain
        if np.max(np.abs(p_next - p)) < tol:
            return p_next
        p = p_next
    raise RiccatiNotConverged(f"no fixed point within {cap} iterations")


def generate_cartpole_dataset(cp: Cartpole, n_traj, horizon, rng: Rng,
                              scale_lo=0.25, scale_hi=4.0, s0_halfwidth=0.2):
    """Episodes under per-episode regulator gains.

    Every episode draws its own LQR weights (log-uniform in
    [scale_lo, scale_hi]) and starts near upright. Returns (trajectories,
    policies) with the policies aligned to the trajectories so evaluation
    can recompute actions with each episode's own controller.
    """
    trajectories = []
    policies = []
    for i in range(n_traj):
        traj_rng = rng.derive(i)
        w_rng = traj_rng.derive(0)
        log_lo, log_hi = np.log(scale_lo), np.log(scale_hi)
        q_scale = float(np.exp(w_rng.uniform(log_lo, log_hi)))
        r_scale = float(np.exp(w_rng.uniform(log_lo, log_hi)))
        policy = LinearFeedback(-lqr_gains(cp, q_scale, r_scale))

        s = traj_rng.derive(1).uniform(-s0_halfwidth, s0_halfwidth, size=4)
        noise_rng = traj_rng.derive(2)
        states = np.empty((horizon + 1, 4))
        actions = np.empty((horizon, 1))
        states[0] = s
        for t in range(horizon):
            a = policy(s)
            s = cartpole_step(cp, s, a, noise_rng)
            actions[t] = a
            states[t + 1] = s
        trajectories.append(Trajectory(states, actions, system_seed=rng.seed,
                                       policy_seed=w_rng.seed))
        policies.append(policy)
    return trajectories, policies
