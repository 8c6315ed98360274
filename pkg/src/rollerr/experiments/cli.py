"""Command-line interface.

Subcommands: generate, train, eval, sweep, plot, report, selftest.
Exit code 0 only when everything requested succeeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..models import TrainConfig, load_model, save_model
from ..numerics import Rng
from ..rollout import evaluate
from ..systems import (
    Cartpole,
    Constant,
    Dataset,
    RandomUniform,
    generate_cartpole_dataset,
    generate_dataset,
    generate_lorenz_dataset,
    load_trajectories,
    sample_state_space,
    save_trajectories,
)
from ..systems.lorenz import LorenzParams
from .config import ConfigError, SweepConfig, load_config
from .presets import PRESETS, get_preset
from .report import run_table_report
from .selftest import run_selftest
from .svgplot import PlotSpec, emit_plot
from .sweep import build_model, run_snr_study, run_sweep


def _cmd_generate(args):
    rng = Rng(args.seed)
    if args.system == "statespace":
        template = sample_state_space(
            args.pole, args.dim, noise_mult=args.noise_mult,
            regularized=args.regularized, zero_inputs=args.zero_inputs,
            rng=rng.derive(0))
        policy = (Constant([0.0]) if args.policy == "zero"
                  else RandomUniform(-1.0, 1.0, dim=1))
        trajs = generate_dataset(template, policy, args.n_traj, args.horizon,
                                 rng.derive(1),
                                 resample_system=args.resample_systems)
    elif args.system == "lorenz":
        trajs = generate_lorenz_dataset(args.init_lo, args.init_hi,
                                        args.n_traj, args.horizon,
                                        LorenzParams(), rng)
    elif args.system == "cartpole":
        trajs, _ = generate_cartpole_dataset(Cartpole(), args.n_traj,
                                             args.horizon, rng)
    else:
        raise ConfigError(f"unknown system {args.system!r}")
    save_trajectories(trajs, args.out)
    print(f"wrote {len(trajs)} trajectories to {args.out}")
    return 0


def _cmd_train(args):
    trajs = load_trajectories(args.data)
    dataset = Dataset.from_trajectories(trajs)
    hidden = tuple(int(w) for w in args.hidden.split(",")) if args.hidden else (256, 256)
    cfg = SweepConfig(epochs=args.epochs, ensemble_size=args.ensemble_size,
                      normalization=not args.no_normalization)
    model = build_model(args.model, dataset, hidden, cfg, Rng(args.seed))
    save_model(model, args.out)
    print(f"trained {args.model} on {len(dataset)} transitions -> {args.out}")
    return 0


def _cmd_eval(args):
    model = load_model(args.model)
    trajs = load_trajectories(args.data)
    profile = evaluate(model, trajs, mode="logged")
    profile.to_csv(args.out)
    print(f"evaluated on {len(trajs)} trajectories -> {args.out}")
    return 0


def _cmd_sweep(args):
    if args.list_presets:
        for name, preset in sorted(PRESETS.items()):
            print(f"{name:18s} {preset.description}")
        return 0
    if bool(args.preset) == bool(args.config):
        print("pick exactly one of --preset or --config", file=sys.stderr)
        return 2
    if args.preset:
        preset = get_preset(args.preset, seed=args.seed)
        kind, cfg = preset.kind, preset.config
    else:
        cfg = load_config(args.config)
        if args.seed is not None:
            import dataclasses
            cfg = dataclasses.replace(cfg, seed=args.seed)
        kind = "sweep"

    os.makedirs(args.out, exist_ok=True)
    if kind == "snr":
        run_snr_study(cfg, args.out)
        print(f"snr study -> {os.path.join(args.out, 'snr.csv')}")
        return 0
    if kind == "table":
        _, text = run_table_report(cfg, args.out)
        print(text)
        return 0

    only = None
    if args.cells:
        only = [int(c) for c in args.cells.split(",")]
    manifest = run_sweep(cfg, args.out, workers=args.workers, only_cells=only)
    failed = [c for c in manifest["cells"] if c["status"] == "failed"]
    for cell in failed:
        print(f"cell {cell['index']} failed:\n{cell['error']}", file=sys.stderr)
    print(f"results -> {os.path.join(args.out, 'results.csv')} "
          f"({len(failed)} failed cells)")
    return 1 if failed else 0


def _cmd_plot(args):
    filters = {}
    for f in args.filter or []:
        if "=" not in f:
            print(f"--filter wants column=value, got {f!r}", file=sys.stderr)
            return 2
        k, _, v = f.partition("=")
        filters[k] = v
    spec = PlotSpec(out_path=args.out, series_by=args.series_by,
                    filters=filters,
                    series=args.series.split(",") if args.series else None,
                    title=args.title, x_col=args.x_col,
                    x_label=args.x_label)
    emit_plot(args.results, spec)
    print(f"wrote {args.out}")
    return 0


def _cmd_report(args):
    cfg = SweepConfig(name="data_table", seed=args.seed or 0,
                      table_systems=args.systems)
    _, text = run_table_report(cfg, args.out)
    print(text)
    return 0


def _cmd_selftest(args):
    return 0 if run_selftest() else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="rollerr",
        description="compounding-error studies of one-step dynamics models")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a trajectory dataset CSV")
    g.add_argument("--system", default="statespace",
                   choices=["statespace", "lorenz", "cartpole"])
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n-traj", type=int, default=100)
    g.add_argument("--horizon", type=int, default=100)
    g.add_argument("--pole", type=float, default=0.5)
    g.add_argument("--dim", type=int, default=3)
    g.add_argument("--noise-mult", type=float, default=1.0)
    g.add_argument("--regularized", action="store_true")
    g.add_argument("--zero-inputs", action="store_true")
    g.add_argument("--resample-systems", action="store_true")
    g.add_argument("--policy", default="random", choices=["random", "zero"])
    g.add_argument("--init-lo", type=float, default=5.0)
    g.add_argument("--init-hi", type=float, default=10.0)
    g.set_defaults(fn=_cmd_generate)

    t = sub.add_parser("train", help="train a model on a trajectory CSV")
    t.add_argument("--data", required=True)
    t.add_argument("--model", default="det_delta")
    t.add_argument("--out", required=True)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--epochs", type=int, default=20)
    t.add_argument("--hidden", default="")
    t.add_argument("--ensemble-size", type=int, default=5)
    t.add_argument("--no-normalization", action="store_true")
    t.set_defaults(fn=_cmd_train)

    e = sub.add_parser("eval", help="evaluate a model on logged trajectories")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(fn=_cmd_eval)

    s = sub.add_parser("sweep", help="run a preset or config-file sweep")
    s.add_argument("--preset")
    s.add_argument("--config")
    s.add_argument("--out", default="out")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--cells", help="comma-separated cell indices to re-run")
    s.add_argument("--list-presets", action="store_true")
    s.set_defaults(fn=_cmd_sweep)

    pl = sub.add_parser("plot", help="render an SVG from a results CSV")
    pl.add_argument("--results", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--series-by", default="model")
    pl.add_argument("--filter", action="append")
    pl.add_argument("--series")
    pl.add_argument("--title", default="")
    pl.add_argument("--x-col", default="step")
    pl.add_argument("--x-label", default="prediction step")
    pl.set_defaults(fn=_cmd_plot)

    r = sub.add_parser("report", help="transient-decay / label-statistics table")
    r.add_argument("--out", default="out")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--systems", type=int, default=1000)
    r.set_defaults(fn=_cmd_report)

    st = sub.add_parser("selftest", help="run the built-in oracle checks")
    st.set_defaults(fn=_cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
