"""Least-squares linear baseline."""

from __future__ import annotations

import numpy as np

from ..numerics import solve_least_squares
from .zoo import LinearModel


def fit_linear_model(dataset) -> LinearModel:
    """Least-squares fit of the state delta on stacked [states actions].

    The fitted coefficients predict s' = s + A s + B a (the delta-consistent
    reading). Rank-deficient designs fall back to the solver's ridge.
    """
    ds, da = dataset.state_dim, dataset.action_dim
    if len(dataset) < ds + da:
        raise ValueError(
            f"need at least {ds + da} transitions to fit, got {len(dataset)}")
    x = np.hstack([dataset.states, dataset.actions])
    b = dataset.next_states - dataset.states
    w = solve_least_squares(x, b)
    return LinearModel(a_hat=w[:ds].T, b_hat=w[ds:].T)
