"""Fast built-in oracle checks, runnable from the CLI without pytest.

Each check recomputes an expected value through an independent route
(normal equations, naive loops, finite differences, closed forms) and
compares. Covers the numerical substrate end to end in a few seconds.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..models import (
    LOGVAR_HI,
    LOGVAR_LO,
    TrainConfig,
    ZeroModel,
    fit_linear_model,
    init_mlp,
)
from ..numerics import Rng, percentiles, solve_least_squares
from ..rollout import evaluate, zero_profile_closed_form
from ..systems import (
    Dataset,
    LorenzParams,
    RandomUniform,
    closed_form_state,
    generate_dataset,
    lorenz_step,
    sample_state_space,
    step,
)
from ..systems.statespace import LinearSystem


def _scalar_system(rho):
    return LinearSystem(a=np.array([[rho]]), b=np.zeros((1, 1)), pole=rho,
                        noise_scale=0.0, dim=1, regularized=False,
                        zero_inputs=True, seed=0)


def check_rng_determinism():
    a = Rng(99).uniform(size=64)
    b = Rng(99).uniform(size=64)
    c = Rng(99).derive(1).uniform(size=64)
    return np.array_equal(a, b) and not np.array_equal(a, c)


def check_percentiles_oracle():
    v = Rng(1).normal(size=501)
    srt = np.sort(v)
    rank = 0.65 * 500
    lo = int(np.floor(rank))
    want = srt[lo] + (rank - lo) * (srt[lo + 1] - srt[lo])
    return abs(percentiles(v).p65 - want) < 1e-12


def check_least_squares_oracle():
    rng = Rng(2)
    x = rng.normal(size=(40, 4))
    b = rng.normal(size=40)
    w = solve_least_squares(x, b)
    w_ne = np.linalg.solve(x.T @ x, x.T @ b)
    return np.max(np.abs(w - w_ne)) < 1e-9


def check_closed_form_equivalence():
    rng = Rng(3)
    for i in range(20):
        sys = sample_state_space(0.7, 4, noise_mult=0.0, rng=rng.derive(i))
        s0 = rng.derive(100 + i).normal(size=4)
        actions = rng.derive(200 + i).uniform(-1, 1, size=(30, 1))
        s = s0
        nr = Rng(0)
        for t in range(30):
            s = step(sys, s, actions[t], nr)
        ref = closed_form_state(sys, s0, actions, 30)
        if np.max(np.abs(s - ref)) > 1e-10 * max(1.0, np.max(np.abs(ref))):
            return False
    return True


def check_transient_decay_boundaries():
    from ..systems import transient_decay_steps
    return (transient_decay_steps(_scalar_system(0.5), [1.0]) == 14
            and transient_decay_steps(_scalar_system(0.1), [1.0]) == 5)


def check_gradients():
    rng = Rng(4)
    for prob in (False, True):
        sizes = [3, 12, 6 if prob else 3]
        params = init_mlp(sizes, rng.derive(int(prob)))
        x = np.ascontiguousarray(rng.derive(10 + int(prob)).uniform(-1, 1, size=(8, 3)))
        t = np.ascontiguousarray(rng.derive(20 + int(prob)).normal(size=(8, 3)))
        if prob:
            def loss_fn(ws, bs, xb, tb):
                return kernels.nll_loss_and_grads(ws, bs, xb, tb,
                                                  LOGVAR_LO, LOGVAR_HI)
        else:
            loss_fn = kernels.mse_loss_and_grads
        _, gw, gb = loss_fn(params.weights, params.biases, x, t)
        w = params.weights[0]
        h = 1e-6
        for c in [(0, 0), (1, 2), (2, 1)]:
            keep = w[c]
            w[c] = keep + h
            up = loss_fn(params.weights, params.biases, x, t)[0]
            w[c] = keep - h
            down = loss_fn(params.weights, params.biases, x, t)[0]
            w[c] = keep
            fd = (up - down) / (2 * h)
            if abs(fd - gw[0][c]) / max(abs(fd), abs(gw[0][c]), 1.0) > 1e-5:
                return False
    return True


def check_adam_oracle():
    b1, b2, eps, lr = 0.9, 0.999, 1e-8, 0.02
    p, m, v = 1.5, 0.0, 0.0
    arr = np.array([1.5])
    am, av = np.zeros(1), np.zeros(1)
    for t in range(1, 51):
        g = 2 * (p - 0.5)
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        p -= lr * (m / (1 - b1**t)) / (np.sqrt(v / (1 - b2**t)) + eps)
        kernels.adam_update(arr, np.array([2 * (arr[0] - 0.5)]), am, av,
                            t, lr, b1, b2, eps)
        if abs(arr[0] - p) > 1e-12:
            return False
    return True


def check_linear_recovery():
    sys = sample_state_space(0.5, 3, noise_mult=0.0, rng=Rng(5))
    trajs = generate_dataset(sys, RandomUniform(), 10, 50, Rng(6))
    model = fit_linear_model(Dataset.from_trajectories(trajs))
    return (np.max(np.abs(model.a_hat - (sys.a - np.eye(3)))) < 1e-6
            and np.max(np.abs(model.b_hat - sys.b)) < 1e-6)


def check_zero_profile_closed_form():
    sys = sample_state_space(0.5, 3, rng=Rng(7))
    trajs = generate_dataset(sys, RandomUniform(), 5, 20, Rng(8),
                             resample_system=True)
    a = evaluate(ZeroModel(3), trajs)
    b = zero_profile_closed_form(trajs)
    return np.max(np.abs(a.p50 - b.p50)) < 1e-12


def check_lorenz_equilibrium():
    p = LorenzParams()
    c = np.sqrt(p.beta * (p.eta - 1))
    fixed = np.array([c, c, p.eta - 1])
    return np.max(np.abs(lorenz_step(fixed, p) - fixed)) < 1e-9


CHECKS = [
    ("rng determinism and stream independence", check_rng_determinism),
    ("percentile sort-and-interpolate oracle", check_percentiles_oracle),
    ("least squares vs normal equations", check_least_squares_oracle),
    ("iterated step vs closed-form solution", check_closed_form_equivalence),
    ("transient decay boundary cases", check_transient_decay_boundaries),
    ("analytic gradients vs finite differences", check_gradients),
    ("adam vs scalar oracle", check_adam_oracle),
    ("linear model recovers true dynamics", check_linear_recovery),
    ("zero-model profile closed form", check_zero_profile_closed_form),
    ("lorenz nontrivial equilibrium", check_lorenz_equilibrium),
]


def run_selftest():
    """Run every check; prints one line each, returns True if all passed."""
    print(f"kernel backend: {kernels.backend_name()}")
    ok = True
    for name, fn in CHECKS:
        try:
            passed = fn()
        except Exception as exc:  # a crash is a failure, keep going
            passed = False
            print(f"FAIL {name}: {exc!r}")
            ok = False
            continue
        print(f"{'PASS' if passed else 'FAIL'} {name}")
        ok = ok and passed
    return ok
