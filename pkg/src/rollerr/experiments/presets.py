"""Named experiment presets, one per study the harness reproduces.

Each preset is a full config; ``--seed`` and output directory come from the
caller. Sweep presets emit results.csv; the snr preset emits snr.csv; the
data-table preset emits table.csv/table.txt.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .config import SweepConfig

STUDY_POLES = [0.1, 0.5, 0.75, 0.95]


@dataclass(frozen=True)
class Preset:
    kind: str  # "sweep" | "snr" | "table"
    description: str
    config: SweepConfig


def _sweep(name, description, **kw):
    return Preset("sweep", description, SweepConfig(name=name, **kw))


PRESETS = {
    "compound": _sweep(
        "compound",
        "per-step error of the four network variants across eight poles",
        poles=[0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0],
        models=["det_delta", "det_state", "prob_ens_delta", "prob_ens_state"],
    ),
    "compare_noise": _sweep(
        "compare_noise",
        "process-noise multiples 0x/10x/100x across representative poles",
        poles=STUDY_POLES,
        noise_mults=[0.0, 10.0, 100.0],
    ),
    "no_inputs": _sweep(
        "no_inputs",
        "input matrix zeroed: how much error the random actions contribute",
        poles=STUDY_POLES,
        zero_inputs=True,
    ),
    "state_dim": _sweep(
        "state_dim",
        "regularized dimension scaling at fixed poles",
        poles=[0.1, 0.5, 0.75, 0.9],
        dims=[9, 27, 81],
        regularized=True,
    ),
    "dim_diverge": _sweep(
        "dim_diverge",
        "unregularized dimension growth at pole 0.5",
        poles=[0.5],
        dims=[3, 9, 27, 81],
    ),
    "simple_models": _sweep(
        "simple_models",
        "zero and linear baselines against the default network",
        poles=STUDY_POLES,
        models=["zero", "linear", "det_delta"],
    ),
    "training_set": _sweep(
        "training_set",
        "training-set size 1/5/10/100 trajectories",
        poles=[0.1, 0.5, 0.9],
        train_trajs=[1, 5, 10, 100],
    ),
    "capacity": _sweep(
        "capacity",
        "hidden width 32 and 3x512 against the default 2x256",
        poles=STUDY_POLES,
        hidden_sizes=[[32], [256, 256], [512, 512, 512]],
    ),
    "no_norm": _sweep(
        "no_norm",
        "normalization disabled",
        poles=STUDY_POLES,
        normalization=False,
    ),
    "one_step_profile": _sweep(
        "one_step_profile",
        "per-time-index single-step error from true states",
        poles=[0.1, 0.5, 0.9],
        modes=["one_step"],
    ),
    "recompute": _sweep(
        "recompute",
        "cartpole: logged actions vs actions recomputed from predictions",
        system="cartpole",
        poles=[0.0], noise_mults=[1.0], dims=[4],
        modes=["logged", "recomputed"],
        horizon=200,
        n_test=50,
    ),
    "angle_expand": _sweep(
        "angle_expand",
        "cartpole angle as radians vs (cos, sin) pair",
        system="cartpole",
        poles=[0.0], noise_mults=[1.0], dims=[4],
        angle_expansions=[False, True],
        models=["det_delta", "det_state"],
        horizon=200,
        n_test=50,
    ),
    "lorenz_narrow": _sweep(
        "lorenz_narrow",
        "chaotic prediction, initial coordinates in [5, 10]",
        system="lorenz",
        poles=[0.0], noise_mults=[1.0], dims=[3],
        models=["det_delta", "zero"],
        horizon=500,
        lorenz_init=[5.0, 10.0],
        lorenz_test_length=200,
    ),
    "lorenz_broad": _sweep(
        "lorenz_broad",
        "chaotic prediction, initial coordinates in [-10, 10]",
        system="lorenz",
        poles=[0.0], noise_mults=[1.0], dims=[3],
        models=["det_delta", "zero"],
        horizon=500,
        lorenz_init=[-10.0, 10.0],
        lorenz_test_length=200,
    ),
    "snr": Preset(
        "snr",
        "double-integrator signal-to-noise ratio vs sampling step",
        SweepConfig(name="snr"),
    ),
    "data_table": Preset(
        "table",
        "transient-decay and label-statistics table across poles",
        SweepConfig(name="data_table"),
    ),
    "smoke": _sweep(
        "smoke",
        "tiny fast sweep for determinism and plumbing checks",
        poles=[0.5],
        models=["det_delta", "zero"],
        train_trajs=[5],
        n_test=5,
        horizon=20,
        epochs=2,
        hidden_sizes=[[16]],
    ),
}


def get_preset(name, seed=None) -> Preset:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    preset = PRESETS[name]
    if seed is not None:
        preset = dataclasses.replace(
            preset, config=dataclasses.replace(preset.config, seed=seed))
    return preset
