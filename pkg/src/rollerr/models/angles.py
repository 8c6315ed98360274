"""Angle coordinates expanded to (cos, sin) pairs and back.

Wrap-around at 2*pi breaks regression targets; expanding each angle into its
cosine and sine gives the model a smooth representation, at the cost of one
extra state dimension per angle.
"""

from __future__ import annotations

import numpy as np


def _check_indices(dim, angle_indices):
    idx = list(angle_indices)
    if idx != sorted(idx) or len(set(idx)) != len(idx):
        raise ValueError("angle indices must be sorted and unique")
    if idx and (idx[0] < 0 or idx[-1] >= dim):
        raise ValueError(f"angle index out of range for dim {dim}")
    return idx


def expand_angles(s, angle_indices):
    """Replace each flagged coordinate theta with the pair (cos, sin).

    Works on a single state vector or a batch (n, d); expanded width is
    d + len(angle_indices).
    """
    s = np.asarray(s, dtype=np.float64)
    single = s.ndim == 1
    s2 = np.atleast_2d(s)
    idx = _check_indices(s2.shape[1], angle_indices)
    cols = []
    for j in range(s2.shape[1]):
        if j in idx:
            cols.append(np.cos(s2[:, j]))
            cols.append(np.sin(s2[:, j]))
        else:
            cols.append(s2[:, j])
    out = np.stack(cols, axis=1)
    return out[0] if single else out


def collapse_angles(expanded, angle_indices):
    """Invert expand_angles: (cos, sin) pairs back to angles in [0, 2*pi).

    Rejects pairs of norm below 1e-6, whose direction is meaningless.
    """
    e = np.asarray(expanded, dtype=np.float64)
    single = e.ndim == 1
    e2 = np.atleast_2d(e)
    # angle indices refer to the original (collapsed) coordinates
    collapsed_dim = e2.shape[1] - len(list(angle_indices))
    idx = set(_check_indices(collapsed_dim, angle_indices))
    cols = []
    src = 0
    j = 0
    while src < e2.shape[1]:
        if j in idx:
            c, s = e2[:, src], e2[:, src + 1]
            norm = np.hypot(c, s)
            if np.any(norm < 1e-6):
                raise ValueError("degenerate (cos, sin) pair: norm < 1e-6")
            cols.append(np.mod(np.arctan2(s, c), 2.0 * np.pi))
            src += 2
        else:
            cols.append(e2[:, src])
            src += 1
        j += 1
    out = np.stack(cols, axis=1)
    return out[0] if single else out
