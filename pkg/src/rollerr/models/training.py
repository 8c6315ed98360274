"""Mini-batch trainers for the network models.

Both trainers shuffle per epoch with the supplied stream, keep the last
short batch, and abort with diagnostics if the loss goes non-finite. Losses
are means over the batch (sums over output coordinates), so gradient scale
is independent of batch size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..numerics import Rng
from .mlp import (
    LOGVAR_HI,
    LOGVAR_LO,
    AdamState,
    MlpParams,
    adam_step,
    init_mlp,
)
from .normalizer import Normalizer, fit_normalizer
from .zoo import EnsembleModel, MlpModel

DETERMINISTIC_LR = 3e-4
DETERMINISTIC_BATCH = 32
PROBABILISTIC_LR = 2.5e-5
PROBABILISTIC_BATCH = 64


class TrainingDiverged(Exception):
    pass


@dataclass
class TrainConfig:
    """Knobs for one training run.

    learning_rate and batch_size left as None resolve to the per-trainer
    defaults (3e-4/32 deterministic, 2.5e-5/64 probabilistic).
    """

    formulation: str = "delta"
    epochs: int = 20
    learning_rate: float | None = None
    batch_size: int | None = None
    hidden_sizes: tuple = (256, 256)
    ensemble_size: int = 5
    normalization_enabled: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.formulation not in ("delta", "state"):
            raise ValueError(f"unknown formulation: {self.formulation!r}")
        if self.learning_rate is not None and self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


def _prepare(dataset, cfg: TrainConfig):
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    if cfg.normalization_enabled:
        norm = fit_normalizer(dataset, cfg.formulation)
    else:
        norm = Normalizer.identity(dataset.state_dim, dataset.action_dim)
    raw_targets = (dataset.next_states - dataset.states
                   if cfg.formulation == "delta" else dataset.next_states)
    x = np.ascontiguousarray(np.hstack([norm.norm_state(dataset.states),
                                        norm.norm_action(dataset.actions)]))
    t = np.ascontiguousarray(norm.norm_target(raw_targets))
    return norm, x, t


def _run_epochs(params, x, t, cfg, rng, lr, batch, loss_fn):
    state = AdamState.for_params(params)
    n = len(x)
    history = []
    for epoch in range(cfg.epochs):
        perm = rng.permutation(n)
        total = 0.0
        for start in range(0, n, batch):
            idx = perm[start:start + batch]
            loss, gw, gb = loss_fn(params.weights, params.biases,
                                   np.ascontiguousarray(x[idx]),
                                   np.ascontiguousarray(t[idx]))
            if not np.isfinite(loss):
                raise TrainingDiverged(
                    f"non-finite loss at epoch {epoch}, step {state.step} "
                    f"(lr={lr}); lower the learning rate or check the data")
            adam_step(params, gw, gb, state, lr)
            total += loss * len(idx)
        history.append(total / n)
    return history


def train_deterministic(dataset, cfg: TrainConfig, rng: Rng) -> MlpModel:
    """Squared-error training of a deterministic next-state network."""
    norm, x, t = _prepare(dataset, cfg)
    lr = cfg.learning_rate if cfg.learning_rate is not None else DETERMINISTIC_LR
    batch = cfg.batch_size if cfg.batch_size is not None else DETERMINISTIC_BATCH
    sizes = [x.shape[1], *cfg.hidden_sizes, t.shape[1]]
    params = init_mlp(sizes, rng)
    history = _run_epochs(params, x, t, cfg, rng, lr, batch,
                          kernels.mse_loss_and_grads)
    return MlpModel(params, norm, cfg.formulation, probabilistic=False,
                    loss_history=history)


def train_probabilistic(dataset, cfg: TrainConfig, rng: Rng) -> MlpModel:
    """Gaussian negative-log-likelihood training with a diagonal variance
    head, log variances clamped to [-10, 5]."""
    norm, x, t = _prepare(dataset, cfg)
    lr = cfg.learning_rate if cfg.learning_rate is not None else PROBABILISTIC_LR
    batch = cfg.batch_size if cfg.batch_size is not None else PROBABILISTIC_BATCH
    sizes = [x.shape[1], *cfg.hidden_sizes, 2 * t.shape[1]]
    params = init_mlp(sizes, rng)

    def loss_fn(ws, bs, xb, tb):
        return kernels.nll_loss_and_grads(ws, bs, xb, tb, LOGVAR_LO, LOGVAR_HI)

    history = _run_epochs(params, x, t, cfg, rng, lr, batch, loss_fn)
    return MlpModel(params, norm, cfg.formulation, probabilistic=True,
                    loss_history=history)


def train_ensemble(dataset, cfg: TrainConfig, rng: Rng,
                   probabilistic=True) -> EnsembleModel:
    """Train cfg.ensemble_size members on streams derived per member index.

    Member k trains exactly as a standalone model seeded with rng.derive(k),
    so ensembles are reproducible member by member.
    """
    trainer = train_probabilistic if probabilistic else train_deterministic
    members = [trainer(dataset, cfg, rng.derive(k))
               for k in range(cfg.ensemble_size)]
    return EnsembleModel(members)
