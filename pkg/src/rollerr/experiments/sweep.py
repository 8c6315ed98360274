"""Sweep execution: seeded cells, CSV fragments, manifest, reassembly.

Every cell derives its own seed from (root seed, cell index) and writes its
rows to ``cells/cell_NNNN.csv``; the results CSV is the header plus the
fragments concatenated in cell order. Re-running any single cell therefore
reproduces its exact bytes, and two runs with the same root seed produce
byte-identical results files regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .. import __version__
from ..models import (
    TrainConfig,
    ZeroModel,
    expand_angles,
    fit_linear_model,
    train_deterministic,
    train_ensemble,
)
from ..numerics import Rng, derive_seed, percentiles
from ..rollout import evaluate, one_step_error_profile
from ..systems import (
    Cartpole,
    Dataset,
    DoubleIntegrator,
    RandomUniform,
    Trajectory,
    double_integrator_trajectory,
    generate_cartpole_dataset,
    generate_dataset,
    generate_lorenz_dataset,
    sample_state_space,
    snr_estimate,
)
from ..systems.lorenz import LorenzParams
from .config import CellParams, SweepConfig

RESULTS_HEADER = ("experiment,pole,noise_mult,dim,regularized,model,"
                  "formulation,train_trajs,mode,step,p50,p65,p95,n")


class CellFailed(Exception):
    pass


def build_model(tag, dataset: Dataset, hidden, cfg: SweepConfig, rng: Rng):
    """Instantiate or train the model a cell asks for."""
    if tag == "zero":
        return ZeroModel(dataset.state_dim)
    if tag == "zero_persist":
        return ZeroModel(dataset.state_dim, persistence=True)
    if tag == "linear":
        return fit_linear_model(dataset)
    formulation = "state" if tag.endswith("_state") else "delta"
    tc = TrainConfig(formulation=formulation, epochs=cfg.epochs,
                     hidden_sizes=tuple(hidden),
                     ensemble_size=cfg.ensemble_size,
                     normalization_enabled=cfg.normalization)
    if tag.startswith("det_ens"):
        return train_ensemble(dataset, tc, rng, probabilistic=False)
    if tag.startswith("prob_ens"):
        return train_ensemble(dataset, tc, rng, probabilistic=True)
    if tag.startswith("det"):
        return train_deterministic(dataset, tc, rng)
    raise ValueError(f"unknown model tag {tag!r}")


def _expand_trajectories(trajectories, angle_index):
    out = []
    for tr in trajectories:
        out.append(Trajectory(expand_angles(tr.states, [angle_index]),
                              tr.actions, system_seed=tr.system_seed,
                              policy_seed=tr.policy_seed, truncated=tr.truncated))
    return out


def _profile_rows(cfg, cell, formulation, steps, n, start_step=1):
    base = _row_prefix(cfg, cell, formulation)
    rows = []
    for i, s in enumerate(steps, start=start_step):
        rows.append(f"{base},{i},{s.p50!r},{s.p65!r},{s.p95!r},{n}")
    return rows


def _row_prefix(cfg: SweepConfig, cell: CellParams, formulation):
    if cfg.system == "statespace":
        pole, noise, dim = repr(cell.pole), repr(cell.noise_mult), str(cell.dim)
        reg = "true" if cfg.regularized else "false"
    else:
        pole = noise = dim = reg = ""
    return (f"{cfg.name},{pole},{noise},{dim},{reg},{cell.model},"
            f"{formulation},{cell.train_trajs},{cell.mode}")


def run_cell(cfg: SweepConfig, cell: CellParams):
    """Generate data, train, evaluate; returns this cell's CSV rows."""
    rng = Rng(derive_seed(cfg.seed, cell.index))

    if cfg.system == "statespace":
        template = sample_state_space(
            cell.pole, cell.dim, noise_mult=cell.noise_mult,
            regularized=cfg.regularized, zero_inputs=cfg.zero_inputs,
            rng=rng.derive(0))
        policy = RandomUniform(-1.0, 1.0, dim=1)
        train = generate_dataset(template, policy, cell.train_trajs,
                                 cfg.horizon, rng.derive(1), resample_system=True)
        test = generate_dataset(template, policy, cfg.n_test, cfg.horizon,
                                rng.derive(2), resample_system=True)
        test_policies = None
    elif cfg.system == "cartpole":
        cp = Cartpole()
        train, _ = generate_cartpole_dataset(cp, cell.train_trajs, cfg.horizon,
                                             rng.derive(1))
        test, test_policies = generate_cartpole_dataset(cp, cfg.n_test,
                                                        cfg.horizon, rng.derive(2))
        if cell.expand_angles:
            if cell.mode == "recomputed":
                raise CellFailed("angle expansion and recomputed actions "
                                 "cannot combine: policies act on raw states")
            train = _expand_trajectories(train, 2)
            test = _expand_trajectories(test, 2)
    elif cfg.system == "lorenz":
        params = LorenzParams()
        lo, hi = cfg.lorenz_init
        train = generate_lorenz_dataset(lo, hi, cell.train_trajs, cfg.horizon,
                                        params, rng.derive(1))
        test = generate_lorenz_dataset(lo, hi, cfg.n_test,
                                       cfg.lorenz_test_length, params,
                                       rng.derive(2))
        test_policies = None
    else:
        raise CellFailed(f"unknown system {cfg.system!r}")

    dataset = Dataset.from_trajectories(train)
    model = build_model(cell.model, dataset, cell.hidden, cfg, rng.derive(3))

    if cell.mode == "one_step":
        profile = one_step_error_profile(model, test)
        return _profile_rows(cfg, cell, model.formulation, profile,
                             len(test), start_step=0)
    if cell.mode == "recomputed":
        result = evaluate(model, test, mode="recomputed",
                          policies=test_policies, rng=rng.derive(4))
    else:
        result = evaluate(model, test, mode="logged")
    return _profile_rows(cfg, cell, model.formulation, result.steps,
                         result.n_trajectories)


def _fragment_name(index):
    return f"cell_{index:04d}.csv"


def _run_cell_to_fragment(args):
    cfg, cell, out_dir = args
    path = os.path.join(out_dir, "cells", _fragment_name(cell.index))
    try:
        rows = run_cell(cfg, cell)
    except Exception:
        return cell.index, traceback.format_exc()
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        for row in rows:
            fh.write(row + "\n")
    os.replace(tmp, path)
    return cell.index, None


def config_hash(cfg: SweepConfig):
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def run_sweep(cfg: SweepConfig, out_dir, workers=1, only_cells=None):
    """Execute a sweep; returns the manifest dict (also written to disk).

    Failed cells are recorded in the manifest and do not stop other cells.
    ``only_cells`` re-runs a subset, leaving other fragments untouched.
    """
    cfg.validate()
    started = time.time()
    cells = cfg.cells()
    if only_cells is not None:
        chosen = set(only_cells)
        todo = [c for c in cells if c.index in chosen]
    else:
        todo = cells
    print(f"sweep {cfg.name}: {len(cells)} cells "
          f"({len(todo)} to run), seed {cfg.seed}")

    os.makedirs(os.path.join(out_dir, "cells"), exist_ok=True)
    jobs = [(cfg, cell, out_dir) for cell in todo]
    errors = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, err in pool.map(_run_cell_to_fragment, jobs):
                if err:
                    errors[index] = err
    else:
        for job in jobs:
            index, err = _run_cell_to_fragment(job)
            if err:
                errors[index] = err

    results_path = os.path.join(out_dir, "results.csv")
    tmp = results_path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for cell in cells:
            frag = os.path.join(out_dir, "cells", _fragment_name(cell.index))
            if os.path.exists(frag):
                with open(frag) as f2:
                    fh.write(f2.read())
    os.replace(tmp, results_path)

    manifest = {
        "kind": "sweep",
        "tool_version": __version__,
        "config": cfg.to_dict(),
        "config_hash": config_hash(cfg),
        "root_seed": cfg.seed,
        "cells": [
            {
                "index": c.index,
                "seed": derive_seed(cfg.seed, c.index),
                "params": {"pole": c.pole, "noise_mult": c.noise_mult,
                           "dim": c.dim, "model": c.model,
                           "train_trajs": c.train_trajs,
                           "hidden": list(c.hidden), "mode": c.mode,
                           "expand_angles": c.expand_angles},
                "fragment": os.path.join("cells", _fragment_name(c.index)),
                "status": "failed" if c.index in errors else "ok",
                **({"error": errors[c.index]} if c.index in errors else {}),
            }
            for c in cells
        ],
        "results_csv": "results.csv",
        "duration_seconds": round(time.time() - started, 3),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest


def run_snr_study(cfg: SweepConfig, out_dir):
    """SNR percentiles per step size for the double integrator."""
    os.makedirs(out_dir, exist_ok=True)
    started = time.time()
    rows = []
    for j, dt in enumerate(cfg.snr_dts):
        di = DoubleIntegrator(dt=dt, measurement_noise_sigma=cfg.snr_sigma)
        horizon = max(2, int(round(15.0 / dt)))
        rng = Rng(derive_seed(cfg.seed, j))
        vals = np.array([
            snr_estimate(*double_integrator_trajectory(di, 1.0, horizon,
                                                       rng.derive(i)))
            for i in range(cfg.snr_trajectories)
        ])
        p = percentiles(vals)
        rows.append(f"{dt!r},{p.p50!r},{p.p65!r},{p.p95!r},{len(vals)}")

    path = os.path.join(out_dir, "snr.csv")
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("dt,p50,p65,p95,n\n")
        for row in rows:
            fh.write(row + "\n")
    os.replace(tmp, path)

    manifest = {
        "kind": "snr",
        "tool_version": __version__,
        "config": cfg.to_dict(),
        "config_hash": config_hash(cfg),
        "root_seed": cfg.seed,
        "results_csv": "snr.csv",
        "duration_seconds": round(time.time() - started, 3),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest
