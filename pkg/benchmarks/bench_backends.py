"""Benchmark the compiled kernels against the numpy fallback.

Times the operations that dominate sweep runtime: fused training steps
(loss + gradients + Adam) and batched forward passes, at the network sizes
and batch sizes the experiments actually use.

Run:  python benchmarks/bench_backends.py [--repeats 200]
"""

import argparse
import time

import numpy as np

from rollerr.kernels import available_backends
from rollerr.models import LOGVAR_HI, LOGVAR_LO, init_mlp
from rollerr.numerics import Rng

CASES = [
    # (label, layer sizes, batch, probabilistic)
    ("width 32, batch 32, mse", [4, 32, 3], 32, False),
    ("2x256, batch 32, mse", [4, 256, 256, 3], 32, False),
    ("2x256, batch 64, nll", [4, 256, 256, 6], 64, True),
    ("3x512, batch 32, mse", [4, 512, 512, 512, 3], 32, False),
    ("2x256, batch 1, forward", [4, 256, 256, 3], 1, None),
]


def time_case(backend, sizes, batch, prob, repeats):
    rng = Rng(1234)
    params = init_mlp(sizes, rng)
    d_out = sizes[-1] // 2 if prob else sizes[-1]
    x = np.ascontiguousarray(rng.uniform(-1, 1, size=(batch, sizes[0])))
    t = np.ascontiguousarray(rng.normal(size=(batch, d_out)))
    m = [np.zeros_like(a) for a in params.weights + params.biases]
    v = [np.zeros_like(a) for a in params.weights + params.biases]

    def train_step(step):
        if prob is None:
            backend.forward(params.weights, params.biases, x)
            return
        if prob:
            _, gw, gb = backend.nll_loss_and_grads(
                params.weights, params.biases, x, t, LOGVAR_LO, LOGVAR_HI)
        else:
            _, gw, gb = backend.mse_loss_and_grads(
                params.weights, params.biases, x, t)
        for a, g, mm, vv in zip(params.weights + params.biases, gw + gb, m, v):
            backend.adam_update(a, g, mm, vv, step, 3e-4, 0.9, 0.999, 1e-8)

    for i in range(3):  # warmup
        train_step(i + 1)
    start = time.perf_counter()
    for i in range(repeats):
        train_step(i + 10)
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    backends = available_backends()
    names = [b.NAME for b in backends]
    print(f"backends: {', '.join(names)}")
    header = f"{'case':32s}" + "".join(f"{n:>14s}" for n in names)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, sizes, batch, prob in CASES:
        times = [time_case(b, sizes, batch, prob, args.repeats) for b in backends]
        row = f"{label:32s}" + "".join(f"{t * 1e6:>11.1f} us" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
