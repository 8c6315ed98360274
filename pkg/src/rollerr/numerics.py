"""Deterministic numerical substrate: seeded sampling, least squares, percentiles.

Everything downstream (system simulation, model training, error statistics)
builds on these few primitives, so they are kept deliberately small and easy
to audit. All arithmetic is float64; the random generator is counter-based so
that seeds are portable and independent streams can be derived by hashing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

__all__ = [
    "Rng",
    "derive_seed",
    "PercentileSummary",
    "percentiles",
    "solve_least_squares",
    "matrix_power_apply",
    "infinity_norm",
]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1
_INV_2_53 = 2.0 ** -53


def _mix64(z):
    """SplitMix64 finalizer; accepts scalar or array uint64, wraps mod 2^64."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def derive_seed(seed, *indices):
    """Hash a root seed and one or more integer indices into a child seed.

    Used to give every experiment cell, trajectory, and ensemble member its
    own independent stream: ``derive_seed(root, cell)`` never collides with
    the parent stream or with siblings in practice.
    """
    with np.errstate(over="ignore"):
        key = np.uint64(int(seed) & _MASK)
        for ix in indices:
            key = _mix64(key ^ _mix64(np.uint64(int(ix) & _MASK) + _GOLDEN))
    return int(key)


class Rng:
    """Counter-based pseudo-random generator (SplitMix64 stream).

    Sample ``i`` of a stream is a pure function of ``(seed, i)``, so equal
    seeds reproduce equal sequences regardless of how draws are batched.
    Uniform draws are exact integer arithmetic and bit-portable; normal draws
    go through Box-Muller and are as portable as the platform's libm.

    Not thread-safe: each concurrent task should own its own ``derive()``-d
    instance.
    """

    def __init__(self, seed):
        self.seed = int(seed) & _MASK
        self._key = np.uint64(self.seed)
        self.counter = 0

    def derive(self, *indices):
        """Independent child stream keyed by this seed and the indices."""
        return Rng(derive_seed(self.seed, *indices))

    def _raw(self, n):
        idx = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            return _mix64(self._key + idx * _GOLDEN)

    def _unit(self, n):
        # 53-bit mantissa -> [0, 1)
        return (self._raw(n) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def uniform(self, lo=0.0, hi=1.0, size=None):
        """Samples in [lo, hi). Scalar when size is None."""
        if hi < lo:
            raise ValueError(f"uniform bounds reversed: [{lo}, {hi})")
        n = 1 if size is None else int(np.prod(size))
        u = lo + (hi - lo) * self._unit(n)
        if size is None:
            return float(u[0])
        return u.reshape(size)

    def normal(self, mu=0.0, sigma=1.0, size=None):
        """Gaussian samples via Box-Muller; sigma must be >= 0."""
        if sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {sigma}")
        n = 1 if size is None else int(np.prod(size))
        pairs = (n + 1) // 2
        # u1 in (0, 1] so log() is finite
        u1 = ((self._raw(pairs) >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
        u2 = self._unit(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * np.pi) * u2
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]
        out = mu + sigma * z
        if size is None:
            return float(out[0])
        return out.reshape(size)

    def permutation(self, n):
        """Uniform random permutation of range(n)."""
        return np.argsort(self._unit(n), kind="stable")


@dataclass(frozen=True)
class PercentileSummary:
    """Median / 65th / 95th percentile of one sample of values."""

    p50: float
    p65: float
    p95: float


def percentiles(values) -> PercentileSummary:
    """Linear-interpolation percentiles (the common plotting convention).

    Rank r = q/100 * (n - 1) over the sorted sample; fractional ranks
    interpolate linearly between the two closest order statistics.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("percentiles of an empty sample")
    if not np.all(np.isfinite(v)):
        raise ValueError("percentiles require finite values")
    p50, p65, p95 = np.percentile(v, [50.0, 65.0, 95.0], method="linear")
    return PercentileSummary(float(p50), float(p65), float(p95))


def solve_least_squares(x, b):
    """Least-squares solve: the w minimizing ||x @ w - b||^2.

    Uses Householder QR. If R's diagonal is (near-)singular the problem is
    rank deficient and a small ridge is added instead,
    lambda = 1e-10 * trace(x.T x) / k, so degenerate designs (e.g. all-zero
    targets with collinear columns) never crash a fit.

    x is (n, k), b is (n,) or (n, m); returns (k,) or (k, m) to match b.
    """
    x = np.asarray(x, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"design matrix must be 2-D, got shape {x.shape}")
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != x.shape[0]:
        raise ValueError(f"shape mismatch: x is {x.shape}, b is {b.shape}")
    n, k = x.shape
    if n < 1 or k < 1:
        raise ValueError(f"empty least-squares problem: x is {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("design matrix contains non-finite entries")

    q, r = np.linalg.qr(x, mode="reduced")
    diag = np.abs(np.diag(r))
    scale = diag.max(initial=0.0)
    if scale > 0.0 and diag.min() > 1e-12 * scale:
        w = solve_triangular(r, q.T @ b, lower=False)
    else:
        lam = 1e-10 * float(np.trace(x.T @ x)) / k
        if lam == 0.0:
            # x is identically zero; every w has equal residual, return 0
            w = np.zeros((k, b.shape[1]))
        else:
            w = np.linalg.solve(x.T @ x + lam * np.eye(k), x.T @ b)
    return w[:, 0] if squeeze else w


def matrix_power_apply(a, x, k):
    """Return A^k @ x by k sequential matrix-vector products."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix power needs a square matrix, got {a.shape}")
    if k < 0:
        raise ValueError(f"power must be >= 0, got {k}")
    y = np.asarray(x, dtype=np.float64).copy()
    for _ in range(int(k)):
        y = a @ y
    return y


def infinity_norm(a):
    """Max over rows of the sum of absolute entries.

    Row sums accumulate left to right (cumsum) so the result is bit-equal to
    a naive per-entry loop, not to numpy's pairwise reduction.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"infinity norm needs a matrix, got shape {a.shape}")
    return float(np.cumsum(np.abs(a), axis=1)[:, -1].max())
