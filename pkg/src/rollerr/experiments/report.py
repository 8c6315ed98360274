"""Dataset-property table: transient decay and label statistics per pole.

Freshly generates action-free datasets at each pole and reports how fast
initial-state transients die out and how large the training labels are --
the knobs that make near-unstable poles hard to learn.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

import numpy as np

from .. import __version__
from ..numerics import Rng, derive_seed
from ..systems import (
    Constant,
    Dataset,
    TransientNotDecayed,
    generate_dataset,
    sample_state_space,
    transient_decay_steps,
)
from .config import SweepConfig

TABLE_POLES = (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0, 1.1)
TABLE_HORIZON = 200  # label statistics use longer action-free episodes


@dataclass
class TableRow:
    pole: float
    decay_mean: float | None  # None renders as N.A.
    delta_mean: float
    delta_std: float
    true_mean: float
    true_std: float


def mean_transient_decay(pole, n_systems, rng: Rng, dim=3, threshold=1e-4):
    """Mean steps until ||A^k s0|| < threshold, or None if any sampled
    system never decays (unstable poles)."""
    ks = []
    for i in range(n_systems):
        sys = sample_state_space(pole, dim, rng=rng.derive(2 * i))
        s0 = rng.derive(2 * i + 1).normal(size=dim)
        try:
            ks.append(transient_decay_steps(sys, s0, threshold=threshold))
        except TransientNotDecayed:
            return None
    return float(np.mean(ks))


def label_statistics(pole, n_traj, rng: Rng, dim=3, horizon=TABLE_HORIZON):
    """Mean/std of delta-state and next-state label norms on action-free data."""
    template = sample_state_space(pole, dim, rng=rng.derive(0))
    trajs = generate_dataset(template, Constant([0.0]), n_traj, horizon,
                             rng.derive(1), resample_system=True)
    ds = Dataset.from_trajectories(trajs)
    delta = np.linalg.norm(ds.next_states - ds.states, axis=1)
    true = np.linalg.norm(ds.next_states, axis=1)
    return (float(delta.mean()), float(delta.std()),
            float(true.mean()), float(true.std()))


def build_table(seed, poles=TABLE_POLES, n_systems=1000, n_traj=100):
    rows = []
    for j, pole in enumerate(poles):
        decay_rng = Rng(derive_seed(seed, j, 0))
        label_rng = Rng(derive_seed(seed, j, 1))
        decay = mean_transient_decay(pole, n_systems, decay_rng)
        dm, dstd, tm, tstd = label_statistics(pole, n_traj, label_rng)
        rows.append(TableRow(pole, decay, dm, dstd, tm, tstd))
    return rows


def render_table(rows):
    lines = [
        f"{'pole':>6} | {'transient decay':>15} | {'delta labels':>21} | "
        f"{'next-state labels':>21}",
        "-" * 74,
    ]
    for r in rows:
        decay = "N.A." if r.decay_mean is None else f"{r.decay_mean:.1f}"
        lines.append(
            f"{r.pole:>6} | {decay:>15} | "
            f"{r.delta_mean:>9.3g} +- {r.delta_std:<8.3g} | "
            f"{r.true_mean:>9.3g} +- {r.true_std:<8.3g}")
    return "\n".join(lines)


def table_to_csv(rows, path):
    tmp = str(path) + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("pole,decay_mean,delta_mean,delta_std,true_mean,true_std\n")
        for r in rows:
            decay = "" if r.decay_mean is None else repr(r.decay_mean)
            fh.write(f"{r.pole!r},{decay},{r.delta_mean!r},{r.delta_std!r},"
                     f"{r.true_mean!r},{r.true_std!r}\n")
    os.replace(tmp, path)


def run_table_report(cfg: SweepConfig, out_dir):
    """The data-table preset: builds, renders, and writes the table."""
    os.makedirs(out_dir, exist_ok=True)
    started = time.time()
    rows = build_table(cfg.seed, n_systems=cfg.table_systems)
    table_to_csv(rows, os.path.join(out_dir, "table.csv"))
    text = render_table(rows)
    with open(os.path.join(out_dir, "table.txt"), "w") as fh:
        fh.write(text + "\n")
    manifest = {
        "kind": "table",
        "tool_version": __version__,
        "config": cfg.to_dict(),
        "root_seed": cfg.seed,
        "results_csv": "table.csv",
        "duration_seconds": round(time.time() - started, 3),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    return rows, text
