"""Feedforward network parameters, forward pass, and the Adam optimizer.

The heavy lifting lives in rollerr.kernels; this module owns parameter
initialization and the optimizer state. Hidden layers are ReLU, the output
layer is linear. Probabilistic heads double the output width to carry a log
variance per target coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..numerics import Rng

LOGVAR_LO = -10.0
LOGVAR_HI = 5.0

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class MlpParams:
    """Layer weights (fan_in, fan_out) and biases, hidden ReLU activations."""

    weights: list
    biases: list
    activation: str = "relu"

    @property
    def layer_sizes(self):
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    def copy(self):
        return MlpParams([w.copy() for w in self.weights],
                         [b.copy() for b in self.biases], self.activation)

    def flat(self):
        return np.concatenate([a.reshape(-1) for a in self.weights + self.biases])


def init_mlp(layer_sizes, rng: Rng) -> MlpParams:
    """Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases."""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(np.ascontiguousarray(
            rng.uniform(-bound, bound, size=(fan_in, fan_out))))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)


def mlp_forward(params: MlpParams, x):
    """Forward pass for a single input vector or a batch (n, d_in)."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    out = kernels.forward(params.weights, params.biases,
                          np.ascontiguousarray(np.atleast_2d(x)))
    return out[0] if single else out


@dataclass
class AdamState:
    """First/second moment accumulators and the shared step counter."""

    m: list
    v: list
    step: int = 0

    @classmethod
    def for_params(cls, params: MlpParams):
        arrays = params.weights + params.biases
        return cls([np.zeros_like(a) for a in arrays],
                   [np.zeros_like(a) for a in arrays])


def adam_step(params: MlpParams, grads_w, grads_b, state: AdamState, lr,
              beta1=ADAM_BETA1, beta2=ADAM_BETA2, eps=ADAM_EPS) -> MlpParams:
    """One bias-corrected Adam update over every parameter array, in place."""
    state.step += 1
    arrays = params.weights + params.biases
    grads = list(grads_w) + list(grads_b)
    for a, g, m, v in zip(arrays, grads, state.m, state.v):
        kernels.adam_update(a, g, m, v, state.step, lr, beta1, beta2, eps)
    return params
