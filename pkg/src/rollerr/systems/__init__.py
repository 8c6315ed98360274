"""Synthetic dynamical systems, policies, and trajectory datasets."""

from .cartpole import (
    Cartpole,
    RiccatiNotConverged,
    cartpole_step,
    generate_cartpole_dataset,
    linearized_discrete,
    lqr_gains,
    riccati_fixed_point,
)
from .double_integrator import (
    DoubleIntegrator,
    double_integrator_trajectory,
    snr_estimate,
)
from .lorenz import LorenzParams, generate_lorenz_dataset, lorenz_step
from .policies import Constant, LinearFeedback, RandomUniform
from .statespace import (
    LinearSystem,
    TransientNotDecayed,
    closed_form_state,
    sample_state_space,
    step,
    transient_decay_steps,
)
from .trajectory import (
    Dataset,
    Trajectory,
    generate_dataset,
    load_trajectories,
    save_trajectories,
)

__all__ = [
    "Cartpole",
    "Constant",
    "Dataset",
    "DoubleIntegrator",
    "LinearFeedback",
    "LinearSystem",
    "LorenzParams",
    "RandomUniform",
    "RiccatiNotConverged",
    "Trajectory",
    "TransientNotDecayed",
    "cartpole_step",
    "closed_form_state",
    "double_integrator_trajectory",
    "generate_cartpole_dataset",
    "generate_dataset",
    "generate_lorenz_dataset",
    "linearized_discrete",
    "load_trajectories",
    "lorenz_step",
    "lqr_gains",
    "riccati_fixed_point",
    "sample_state_space",
    "save_trajectories",
    "snr_estimate",
    "step",
    "transient_decay_steps",
]
