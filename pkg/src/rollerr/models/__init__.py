"""Model zoo: normalization, trainers, baselines, one prediction interface."""

from .angles import collapse_angles, expand_angles
from .linear import fit_linear_model
from .mlp import (
    LOGVAR_HI,
    LOGVAR_LO,
    AdamState,
    MlpParams,
    adam_step,
    init_mlp,
    mlp_forward,
)
from .normalizer import Normalizer, fit_normalizer
from .serialize import load_model, save_model
from .training import (
    TrainConfig,
    TrainingDiverged,
    train_deterministic,
    train_ensemble,
    train_probabilistic,
)
from .zoo import (
    DynamicsModel,
    TrueSystemModel,
    EnsembleModel,
    GaussianPrediction,
    LinearModel,
    MlpModel,
    ZeroModel,
    predict,
)

__all__ = [
    "AdamState",
    "DynamicsModel",
    "EnsembleModel",
    "GaussianPrediction",
    "LOGVAR_HI",
    "LOGVAR_LO",
    "LinearModel",
    "MlpModel",
    "MlpParams",
    "Normalizer",
    "TrainConfig",
    "TrainingDiverged",
    "TrueSystemModel",
    "ZeroModel",
    "adam_step",
    "collapse_angles",
    "expand_angles",
    "fit_linear_model",
    "fit_normalizer",
    "init_mlp",
    "load_model",
    "mlp_forward",
    "predict",
    "save_model",
    "train_deterministic",
    "train_ensemble",
    "train_probabilistic",
]
