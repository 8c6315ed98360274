"""Pole-parameterized discrete-time linear systems.

The study system: an upper-triangular state matrix whose diagonal pins every
eigenvalue to a chosen pole, with uniformly sampled coupling entries and an
input matrix of the same scale. Process noise is uniform per coordinate with
half-width 0.01 times a configurable multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..numerics import Rng, matrix_power_apply

NOISE_HALFWIDTH = 0.01
ROW_NORM_BOUND = 3.0


class TransientNotDecayed(Exception):
    """The transient term did not fall below the threshold within the cap."""


@dataclass(frozen=True)
class LinearSystem:
    """One sampled system: x' = a x + b u + noise.

    ``a`` is (dim, dim) upper triangular with every diagonal entry equal to
    ``pole``; ``b`` is (dim, action_dim). ``noise_scale`` multiplies the base
    process-noise half-width. Instances are immutable and safe to share.
    """

    a: np.ndarray
    b: np.ndarray
    pole: float
    noise_scale: float
    dim: int
    regularized: bool
    zero_inputs: bool
    seed: int

    def __post_init__(self):
        self.a.flags.writeable = False
        self.b.flags.writeable = False

    @property
    def action_dim(self):
        return self.b.shape[1]


def sample_state_space(pole, dim, noise_mult=1.0, regularized=False,
                       zero_inputs=False, rng: Rng | None = None,
                       action_dim=1) -> LinearSystem:
    """Draw one system with all eigenvalues at ``pole``.

    Strict upper-triangular entries of the state matrix and all input-matrix
    entries are U(-1, 1). With ``regularized``, any row whose absolute sum
    exceeds 3 has its off-diagonal entries scaled down uniformly until the
    row sum equals 3; the diagonal (and therefore the poles) is untouched.
    With ``zero_inputs`` the input matrix is identically zero.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if noise_mult < 0:
        raise ValueError(f"noise_mult must be >= 0, got {noise_mult}")
    if rng is None:
        raise ValueError("sample_state_space needs an Rng")

    a = np.zeros((dim, dim))
    np.fill_diagonal(a, pole)
    n_upper = dim * (dim - 1) // 2
    if n_upper:
        upper = rng.uniform(-1.0, 1.0, size=n_upper)
        a[np.triu_indices(dim, k=1)] = upper

    if zero_inputs:
        b = np.zeros((dim, action_dim))
    else:
        b = rng.uniform(-1.0, 1.0, size=(dim, action_dim))

    if regularized:
        for i in range(dim - 1):
            off = np.abs(a[i, i + 1:]).sum()
            row = abs(pole) + off
            if row > ROW_NORM_BOUND:
                a[i, i + 1:] *= (ROW_NORM_BOUND - abs(pole)) / off

    return LinearSystem(a=a, b=b, pole=float(pole), noise_scale=float(noise_mult),
                        dim=int(dim), regularized=bool(regularized),
                        zero_inputs=bool(zero_inputs), seed=rng.seed)


def step(sys: LinearSystem, s, a, rng: Rng):
    """One transition: a s + b u plus uniform process noise per coordinate.

    The noise stream is consumed even at noise_scale 0 (the draw scales to
    exactly 0.0), so runs differing only in noise level stay stream-aligned.
    """
    s = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite state fed to step(); upstream divergence")
    u = np.atleast_1d(np.asarray(a, dtype=np.float64))
    half = NOISE_HALFWIDTH * sys.noise_scale
    noise = rng.uniform(-half, half, size=sys.dim)
    return sys.a @ s + sys.b @ u + noise


def closed_form_state(sys: LinearSystem, s0, actions, t):
    """Noise-free state at time t from the explicit solution.

    Computes A^t s0 plus the forced response sum over A^{t-l-1} B u_l using
    accumulated matrix powers -- a different computational path from
    iterating step(), which is what the tests compare it against.
    """
    actions = np.atleast_2d(np.asarray(actions, dtype=np.float64))
    if actions.size == 0:
        actions = actions.reshape(0, sys.action_dim)
    if t > len(actions):
        raise ValueError(f"t={t} exceeds the {len(actions)} supplied actions")
    s0 = np.asarray(s0, dtype=np.float64)
    out = matrix_power_apply(sys.a, s0, t)
    power = np.eye(sys.dim)  # A^(t-1-l), starting from l = t-1
    for l in range(t - 1, -1, -1):
        out = out + power @ (sys.b @ actions[l])
        power = sys.a @ power
    return out


def transient_decay_steps(sys: LinearSystem, s0, threshold=1e-4, cap=10**6):
    """Smallest k with ||A^k s0||_2 < threshold.

    Raises TransientNotDecayed when the cap is reached, or immediately when
    |pole| >= 1 makes decay provably impossible (the last state coordinate
    evolves as pole^k * s0[-1], which never shrinks).
    """
    s0 = np.asarray(s0, dtype=np.float64)
    if abs(sys.pole) >= 1.0 and abs(s0[-1]) >= threshold:
        raise TransientNotDecayed(
            f"|pole|={abs(sys.pole)} >= 1: transient cannot decay")
    x = s0.copy()
    for k in range(cap + 1):
        if np.linalg.norm(x) < threshold:
            return k
        x = sys.a @ x
    raise TransientNotDecayed(f"no decay below {threshold} within {cap} steps")
