"""Training kernels with a compiled fast path and a numpy fallback.

The compiled Cython extension is preferred when it built successfully;
otherwise the numpy backend is used. ``ROLLERR_KERNELS=python`` or
``ROLLERR_KERNELS=compiled`` forces one (forcing an unavailable backend is
an error, silently falling back would make benchmark numbers lie).

Both backends implement the same arithmetic; see
``benchmarks/bench_backends.py`` for a speed comparison.
"""

import os

from . import numpy_backend

try:
    from . import _speedups
except ImportError:
    _speedups = None

_forced = os.environ.get("ROLLERR_KERNELS", "").strip().lower()
if _forced == "python":
    backend = numpy_backend
elif _forced == "compiled":
    if _speedups is None:
        raise ImportError(
            "ROLLERR_KERNELS=compiled but the compiled kernels are not built"
        )
    backend = _speedups
elif _forced == "":
    backend = _speedups if _speedups is not None else numpy_backend
else:
    raise ImportError(f"unknown ROLLERR_KERNELS value: {_forced!r}")


def backend_name():
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return backend.NAME


def available_backends():
    """All importable backends, fallback last."""
    out = []
    if _speedups is not None:
        out.append(_speedups)
    out.append(numpy_backend)
    return out


forward = backend.forward
mse_loss_and_grads = backend.mse_loss_and_grads
nll_loss_and_grads = backend.nll_loss_and_grads
adam_update = backend.adam_update
