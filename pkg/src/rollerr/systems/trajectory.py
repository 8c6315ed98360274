"""Trajectories, flattened transition datasets, and their CSV format."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import Rng
from .statespace import LinearSystem, sample_state_space, step

DIVERGENCE_GUARD = 1e12


@dataclass
class Trajectory:
    """One episode: states (H+1, d_s), actions (H, d_a), and provenance.

    ``truncated`` marks episodes cut short by the divergence guard; the
    states/actions length contract still holds after truncation.
    """

    states: np.ndarray
    actions: np.ndarray
    system_seed: int = 0
    policy_seed: int = 0
    truncated: bool = False

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.float64)
        self.actions = np.asarray(self.actions, dtype=np.float64)
        if self.actions.ndim == 1:
            self.actions = self.actions[:, None]
        if len(self.states) != len(self.actions) + 1:
            raise ValueError(
                f"{len(self.states)} states need {len(self.states) - 1} actions, "
                f"got {len(self.actions)}")

    @property
    def horizon(self):
        return len(self.actions)

    @property
    def state_dim(self):
        return self.states.shape[1]

    @property
    def action_dim(self):
        return self.actions.shape[1]


class Dataset:
    """Flattened (s, a, s') transitions pooled from many trajectories."""

    def __init__(self, states, actions, next_states):
        self.states = np.asarray(states, dtype=np.float64)
        self.actions = np.asarray(actions, dtype=np.float64)
        self.next_states = np.asarray(next_states, dtype=np.float64)
        if not (len(self.states) == len(self.actions) == len(self.next_states)):
            raise ValueError("misaligned transition arrays")

    def __len__(self):
        return len(self.states)

    @property
    def state_dim(self):
        return self.states.shape[1]

    @property
    def action_dim(self):
        return self.actions.shape[1]

    @classmethod
    def from_trajectories(cls, trajectories):
        if not trajectories:
            raise ValueError("no trajectories")
        s, a, sn = [], [], []
        for tr in trajectories:
            s.append(tr.states[:-1])
            a.append(tr.actions)
            sn.append(tr.states[1:])
        return cls(np.concatenate(s), np.concatenate(a), np.concatenate(sn))


def _run_episode(system, policy, horizon, s0, action_rng, noise_rng):
    states = [np.asarray(s0, dtype=np.float64)]
    actions = []
    truncated = False
    for _ in range(horizon):
        a = np.atleast_1d(policy(states[-1], action_rng))
        s_next = step(system, states[-1], a, noise_rng)
        if not np.all(np.isfinite(s_next)) or np.max(np.abs(s_next)) > DIVERGENCE_GUARD:
            truncated = True
            break
        actions.append(a)
        states.append(s_next)
    return np.asarray(states), np.asarray(actions).reshape(len(actions), -1), truncated


def generate_dataset(system: LinearSystem, policy, n_traj, horizon,
                     rng: Rng, resample_system=False, s0_scale=1.0):
    """Roll out ``n_traj`` episodes of ``horizon`` steps each.

    With ``resample_system`` every trajectory gets a freshly drawn (A, B)
    pair sharing the template system's pole and settings. Initial states are
    standard normal scaled by ``s0_scale``. Episodes whose state magnitude
    passes the divergence guard are truncated and flagged rather than
    aborting the dataset.

    Each trajectory consumes only streams derived from (rng, index), so the
    result is independent of generation order.
    """
    if n_traj < 1 or horizon < 1:
        raise ValueError("need n_traj >= 1 and horizon >= 1")
    out = []
    for i in range(n_traj):
        traj_rng = rng.derive(i)
        sys_rng = traj_rng.derive(0)
        if resample_system:
            sys_i = sample_state_space(
                system.pole, system.dim, noise_mult=system.noise_scale,
                regularized=system.regularized, zero_inputs=system.zero_inputs,
                rng=sys_rng, action_dim=system.action_dim)
        else:
            sys_i = system
        s0 = traj_rng.derive(1).normal(sigma=s0_scale, size=system.dim)
        action_rng = traj_rng.derive(2)
        noise_rng = traj_rng.derive(3)
        states, actions, truncated = _run_episode(
            sys_i, policy, horizon, s0, action_rng, noise_rng)
        out.append(Trajectory(states, actions, system_seed=sys_i.seed,
                              policy_seed=action_rng.seed, truncated=truncated))
    return out


def save_trajectories(trajectories, path):
    """Write trajectories as CSV: traj_id,t,s_0..s_{ds-1},a_0..a_{da-1}.

    The final row of each trajectory has empty action fields. Floats carry
    17 significant digits so the round trip is exact.
    """
    ds = trajectories[0].state_dim
    da = trajectories[0].action_dim
    cols = (["traj_id", "t"] + [f"s_{i}" for i in range(ds)]
            + [f"a_{i}" for i in range(da)])
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for tid, tr in enumerate(trajectories):
            for t in range(len(tr.states)):
                row = [str(tid), str(t)]
                row += [f"{x:.17g}" for x in tr.states[t]]
                if t < tr.horizon:
                    row += [f"{x:.17g}" for x in tr.actions[t]]
                else:
                    row += [""] * da
                fh.write(",".join(row) + "\n")


def load_trajectories(path):
    """Inverse of save_trajectories."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        ds = sum(1 for c in header if c.startswith("s_"))
        da = sum(1 for c in header if c.startswith("a_"))
        rows = {}
        for line in fh:
            parts = line.rstrip("\n").split(",")
            tid = int(parts[0])
            state = [float(x) for x in parts[2:2 + ds]]
            act_fields = parts[2 + ds:2 + ds + da]
            action = None
            if act_fields and act_fields[0] != "":
                action = [float(x) for x in act_fields]
            rows.setdefault(tid, []).append((int(parts[1]), state, action))
    out = []
    for tid in sorted(rows):
        entries = sorted(rows[tid])
        states = np.asarray([e[1] for e in entries])
        if da == 0:
            actions = np.zeros((len(entries) - 1, 0))
        else:
            acts = [e[2] for e in entries if e[2] is not None]
            actions = np.asarray(acts).reshape(len(acts), da)
        out.append(Trajectory(states, actions))
    return out
