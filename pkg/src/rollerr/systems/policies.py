"""Control policies used when generating data and when recomputing actions."""

from __future__ import annotations

import numpy as np


class RandomUniform:
    """I.i.d. uniform action on [lo, hi) per coordinate; ignores the state."""

    def __init__(self, lo=-1.0, hi=1.0, dim=1):
        self.lo = float(lo)
        self.hi = float(hi)
        self.dim = int(dim)

    def __call__(self, state, rng):
        return rng.uniform(self.lo, self.hi, size=self.dim)


class LinearFeedback:
    """Action = gain @ state. Build with a negated regulator gain to stabilize."""

    def __init__(self, gain):
        self.gain = np.asarray(gain, dtype=np.float64)
        if self.gain.ndim != 2:
            raise ValueError(f"gain must be (action_dim, state_dim), got {self.gain.shape}")
        self.dim = self.gain.shape[0]

    def __call__(self, state, rng=None):
        return self.gain @ np.asarray(state, dtype=np.float64)


class Constant:
    """Always the same action."""

    def __init__(self, action):
        self.action = np.atleast_1d(np.asarray(action, dtype=np.float64))
        self.dim = self.action.shape[0]

    def __call__(self, state, rng=None):
        return self.action
