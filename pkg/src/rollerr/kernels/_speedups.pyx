# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of numpy_backend: fused loops for the training hot path.

Same contract as rollerr.kernels.numpy_backend (see its module docstring for
the shared conventions). The win over numpy is avoiding per-op dispatch and
temporaries on the small matrices this package trains (widths 32-512,
batches 32-64).
"""

from libc.math cimport sqrt, exp

import numpy as np

NAME = "compiled"


cdef void _affine(double[:, ::1] a, double[:, ::1] w, double[::1] b,
                  double[:, ::1] out) noexcept nogil:
    # out[n, o] = sum_i a[n, i] * w[i, o] + b[o]
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = w.shape[1]
    cdef Py_ssize_t i, j, o
    cdef double aij
    for i in range(n):
        for o in range(m):
            out[i, o] = b[o]
        for j in range(k):
            aij = a[i, j]
            for o in range(m):
                out[i, o] += aij * w[j, o]


cdef void _relu_inplace(double[:, ::1] z) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in range(z.shape[0]):
        for j in range(z.shape[1]):
            if z[i, j] < 0.0:
                z[i, j] = 0.0


cdef void _grad_wb(double[:, ::1] a, double[:, ::1] dz,
                   double[:, ::1] gw, double[::1] gb) noexcept nogil:
    # gw[i, o] = sum_n a[n, i] * dz[n, o];  gb[o] = sum_n dz[n, o]
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = dz.shape[1]
    cdef Py_ssize_t i, j, o
    cdef double aij
    for j in range(k):
        for o in range(m):
            gw[j, o] = 0.0
    for o in range(m):
        gb[o] = 0.0
    for i in range(n):
        for j in range(k):
            aij = a[i, j]
            for o in range(m):
                gw[j, o] += aij * dz[i, o]
        for o in range(m):
            gb[o] += dz[i, o]


cdef void _grad_input(double[:, ::1] dz, double[:, ::1] w,
                      double[:, ::1] z_prev, double[:, ::1] da) noexcept nogil:
    # da[n, i] = (sum_o dz[n, o] * w[i, o]) masked by relu'(z_prev)
    cdef Py_ssize_t n = dz.shape[0], m = dz.shape[1], k = w.shape[0]
    cdef Py_ssize_t i, j, o
    cdef double acc
    for i in range(n):
        for j in range(k):
            if z_prev[i, j] > 0.0:
                acc = 0.0
                for o in range(m):
                    acc += dz[i, o] * w[j, o]
                da[i, j] = acc
            else:
                da[i, j] = 0.0


def _as2d(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


def _forward_cached(weights, biases, x):
    zs = []
    acts = [x]
    a = x
    last = len(weights) - 1
    for l in range(len(weights)):
        w = weights[l]
        z = np.empty((a.shape[0], w.shape[1]))
        _affine(a, w, biases[l], z)
        zs.append(z)
        if l < last:
            a = z.copy()
            _relu_inplace(a)
            acts.append(a)
        else:
            a = z
    return zs, acts, a


def forward(weights, biases, x):
    """Batched forward pass: x (n, d_in) -> (n, d_out)."""
    x = _as2d(x)
    a = x
    last = len(weights) - 1
    for l in range(len(weights)):
        w = weights[l]
        z = np.empty((a.shape[0], w.shape[1]))
        _affine(a, w, biases[l], z)
        if l < last:
            _relu_inplace(z)
        a = z
    return a


def _backprop(weights, zs, acts, d_out):
    grad_w = [None] * len(weights)
    grad_b = [None] * len(weights)
    dz = d_out
    cdef Py_ssize_t l
    for l in range(len(weights) - 1, -1, -1):
        gw = np.empty_like(weights[l])
        gb = np.empty(weights[l].shape[1])
        _grad_wb(acts[l], dz, gw, gb)
        grad_w[l] = gw
        grad_b[l] = gb
        if l > 0:
            da = np.empty_like(acts[l])
            _grad_input(dz, weights[l], zs[l - 1], da)
            dz = da
    return grad_w, grad_b


def mse_loss_and_grads(weights, biases, x, targets):
    """Mean-over-batch squared-error loss and its parameter gradients."""
    x = _as2d(x)
    targets = _as2d(targets)
    cdef Py_ssize_t n = x.shape[0]
    zs, acts, y = _forward_cached(weights, biases, x)

    cdef double[:, ::1] yv = y
    cdef double[:, ::1] tv = targets
    resid = np.empty_like(y)
    cdef double[:, ::1] rv = resid
    cdef Py_ssize_t i, j
    cdef double loss = 0.0, r
    with nogil:
        for i in range(yv.shape[0]):
            for j in range(yv.shape[1]):
                r = yv[i, j] - tv[i, j]
                rv[i, j] = (2.0 / n) * r
                loss += r * r
    grad_w, grad_b = _backprop(weights, zs, acts, resid)
    return loss / n, grad_w, grad_b


def nll_loss_and_grads(weights, biases, x, targets, double logvar_lo,
                       double logvar_hi):
    """Diagonal-Gaussian negative log likelihood loss and gradients."""
    x = _as2d(x)
    targets = _as2d(targets)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t d = targets.shape[1]
    zs, acts, y = _forward_cached(weights, biases, x)

    cdef double[:, ::1] yv = y
    cdef double[:, ::1] tv = targets
    d_out = np.empty_like(y)
    cdef double[:, ::1] dv = d_out
    cdef Py_ssize_t i, j
    cdef double loss = 0.0, r, raw, lv, iv
    with nogil:
        for i in range(yv.shape[0]):
            for j in range(d):
                r = yv[i, j] - tv[i, j]
                raw = yv[i, j + d]
                lv = raw
                if lv < logvar_lo:
                    lv = logvar_lo
                elif lv > logvar_hi:
                    lv = logvar_hi
                iv = exp(-lv)
                loss += r * r * iv + lv
                dv[i, j] = (2.0 / n) * r * iv
                if logvar_lo < raw < logvar_hi:
                    dv[i, j + d] = (1.0 - r * r * iv) / n
                else:
                    dv[i, j + d] = 0.0
    grad_w, grad_b = _backprop(weights, zs, acts, d_out)
    return loss / n, grad_w, grad_b


def adam_update(param, grad, m, v, step, double lr, double beta1,
                double beta2, double eps):
    """One bias-corrected Adam update, in place. step is 1-based."""
    cdef double[::1] p1 = param.reshape(-1)
    cdef double[::1] g1 = np.ascontiguousarray(grad, dtype=np.float64).reshape(-1)
    cdef double[::1] m1 = m.reshape(-1)
    cdef double[::1] v1 = v.reshape(-1)
    cdef double c1 = 1.0 - beta1 ** step
    cdef double c2 = 1.0 - beta2 ** step
    cdef Py_ssize_t i
    cdef double g
    with nogil:
        for i in range(p1.shape[0]):
            g = g1[i]
            m1[i] = beta1 * m1[i] + (1.0 - beta1) * g
            v1[i] = beta2 * v1[i] + (1.0 - beta2) * g * g
            p1[i] -= lr * (m1[i] / c1) / (sqrt(v1[i] / c2) + eps)
