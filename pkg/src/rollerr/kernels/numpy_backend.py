"""Vectorized numpy implementation of the training kernels.

This is the fallback backend: same contract as the compiled extension in
``_speedups.pyx``, selected at import time by ``rollerr.kernels``. Both
backends implement identical arithmetic; results agree to floating-point
accumulation order (the compiled kernels sum in loop order, BLAS may not).

Conventions shared by both backends:

* networks are affine layers with ReLU on hidden layers, identity output;
* weights[l] has shape (fan_in, fan_out), biases[l] has shape (fan_out,);
* losses are means over the batch of per-sample sums over output dims;
* ReLU passes gradient only where the pre-activation is strictly positive;
* the log-variance clamp passes gradient only strictly inside its bounds.
"""

import numpy as np

NAME = "python"


def forward(weights, biases, x):
    """Batched forward pass: x (n, d_in) -> (n, d_out)."""
    a = x
    last = len(weights) - 1
    for l, (w, b) in enumerate(zip(weights, biases)):
        a = a @ w + b
        if l < last:
            a = np.maximum(a, 0.0)
    return a


def _forward_cached(weights, biases, x):
    """Forward pass keeping pre-activations and activations for backprop."""
    acts = [x]          # a_0 .. a_{L-1}: layer inputs
    zs = []             # z_1 .. z_L: pre-activations
    a = x
    last = len(weights) - 1
    for l, (w, b) in enumerate(zip(weights, biases)):
        z = a @ w + b
        zs.append(z)
        a = np.maximum(z, 0.0) if l < last else z
        if l < last:
            acts.append(a)
    return zs, acts, a


def _backprop(weights, zs, acts, d_out):
    """Push d(loss)/d(output) back through the layers."""
    grad_w = [None] * len(weights)
    grad_b = [None] * len(weights)
    dz = d_out
    for l in range(len(weights) - 1, -1, -1):
        grad_w[l] = acts[l].T @ dz
        grad_b[l] = dz.sum(axis=0)
        if l > 0:
            dz = (dz @ weights[l].T) * (zs[l - 1] > 0.0)
    return grad_w, grad_b


def mse_loss_and_grads(weights, biases, x, targets):
    """Mean-over-batch squared-error loss and its parameter gradients."""
    n = x.shape[0]
    zs, acts, y = _forward_cached(weights, biases, x)
    resid = y - targets
    loss = float(np.sum(resid * resid)) / n
    grad_w, grad_b = _backprop(weights, zs, acts, (2.0 / n) * resid)
    return loss, grad_w, grad_b


def nll_loss_and_grads(weights, biases, x, targets, logvar_lo, logvar_hi):
    """Diagonal-Gaussian negative log likelihood loss and gradients.

    The network's output splits into (mean, raw log variance); the raw log
    variance is clamped to [logvar_lo, logvar_hi] before entering the loss.
    """
    n = x.shape[0]
    d = targets.shape[1]
    zs, acts, y = _forward_cached(weights, biases, x)
    mean = y[:, :d]
    raw = y[:, d:]
    logvar = np.clip(raw, logvar_lo, logvar_hi)
    inv_var = np.exp(-logvar)
    resid = mean - targets
    loss = float(np.sum(resid * resid * inv_var + logvar)) / n

    d_out = np.empty_like(y)
    d_out[:, :d] = (2.0 / n) * resid * inv_var
    inside = (raw > logvar_lo) & (raw < logvar_hi)
    d_out[:, d:] = ((1.0 - resid * resid * inv_var) / n) * inside
    grad_w, grad_b = _backprop(weights, zs, acts, d_out)
    return loss, grad_w, grad_b


def adam_update(param, grad, m, v, step, lr, beta1, beta2, eps):
    """One bias-corrected Adam update, in place. step is 1-based."""
    m *= beta1
    m += (1.0 - beta1) * grad
    v *= beta2
    v += (1.0 - beta2) * grad * grad
    m_hat = m / (1.0 - beta1 ** step)
    v_hat = v / (1.0 - beta2 ** step)
    param -= lr * m_hat / (np.sqrt(v_hat) + eps)
