"""Command-line interface: generate / train / predict / experiment / landscape.

Config files are JSON keyed by the usual hyperparameter names (N, F0, nu,
chi, p_mut, delta, theta_GA, theta_del, theta_sub, theta_exp, tau, P_hash,
doCSSubsumption, doGASubsumption, r0, m0, Tol_sub, s0, ...); command-line
flags override file values.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .data import load_csv
from .engine import EngineConfig
from .experiment import (ExperimentConfig, ModelSnapshot, export_rules,
                         run_experiment)
from .metrics import kurtosis_landscape, landscape_to_csv
from .problems import generate, parse_problem

_CONFIG_KEYS = {
    "N": "n_max",
    "F0": "f0",
    "nu": "nu",
    "chi": "chi",
    "p_mut": "p_mut",
    "delta": "delta",
    "theta_GA": "theta_ga",
    "theta_del": "theta_del",
    "theta_sub": "theta_sub",
    "theta_exp": "theta_exp",
    "tau": "tau",
    "P_hash": "p_hash",
    "doCSSubsumption": "do_cs_subsumption",
    "doGASubsumption": "do_ga_subsumption",
    "r0": "r0",
    "m0": "m0",
    "Tol_sub": "tol_sub",
    "s0": "s0",
    "crispification": "crispification",
    "representation": "representation",
    "epochs": "epochs",
}


def load_engine_config(path=None, overrides: dict | None = None) -> EngineConfig:
    kwargs = {}
    if path is not None:
        with open(path) as fh:
            raw = json.load(fh)
        for key, value in raw.items():
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[_CONFIG_KEYS[key]] = value
    if overrides:
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return EngineConfig(**kwargs)


def _add_engine_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON hyperparameter file")
    p.add_argument("--representation", choices=["fbr", "rect", "tri"])
    p.add_argument("--epochs", type=int)
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--s0", type=float)
    p.add_argument("--no-crispification", dest="crispification",
                   action="store_false", default=None)


def _engine_from_args(args) -> EngineConfig:
    overrides = {name: getattr(args, name, None)
                 for name in ("representation", "epochs", "n_max", "s0",
                              "crispification")}
    return load_engine_config(args.config, overrides)


def _add_data_flags(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem", help="synthetic problem name, e.g. mux20")
    src.add_argument("--data", type=Path, help="CSV dataset path")
    p.add_argument("--label-col", type=int, default=-1)
    p.add_argument("--header", action="store_true")
    p.add_argument("--samples", type=int, default=6000)
    p.add_argument("--protocol", default="shuffle",
                   choices=["shuffle", "stratified_shuffle", "kfold", "all"])
    p.add_argument("--ratio", type=float, default=0.9)
    p.add_argument("--k", type=int, default=10)


def _experiment_config(args, runs: int) -> ExperimentConfig:
    return ExperimentConfig(
        engine=_engine_from_args(args),
        problem=args.problem,
        dataset_path=None if args.data is None else str(args.data),
        label_col=args.label_col,
        header=args.header,
        n_samples=args.samples,
        protocol=args.protocol,
        ratio=args.ratio,
        k=args.k,
        runs=runs,
        seed=args.seed,
    )


def cmd_generate(args) -> int:
    spec = parse_problem(args.problem)
    ds = generate(spec, args.samples, args.seed)
    with open(args.out, "w") as fh:
        for x, y in zip(ds.features, ds.labels):
            fh.write(",".join(f"{v:.8f}" for v in x) + f",{ds.class_names[y]}\n")
    print(f"wrote {ds.n_instances} instances to {args.out}")
    return 0


def cmd_train(args) -> int:
    from .experiment import run_one
    cfg = _experiment_config(args, runs=1)
    res = run_one(cfg, 0)
    res.snapshot.save(args.out)
    rep = res.report
    print(f"test accuracy {rep.accuracy:.4f}  macro F1 {rep.macro_f1:.4f}  "
          f"rules {rep.macro_rules}/{rep.micro_rules}")
    if args.rules_out:
        with open(args.rules_out, "w") as fh:
            fh.write(export_rules(res.snapshot, denormalize=args.denormalize))
    return 0


def cmd_predict(args) -> int:
    snap = ModelSnapshot.load(args.model)
    ds = load_csv(args.data, label_col=args.label_col, header=args.header)
    pred = snap.predict(ds.features)
    names = snap.class_names
    for p in pred:
        print(names[p] if p < len(names) else p)
    hits = (pred == ds.labels).mean()
    print(f"# accuracy vs file labels: {hits:.4f}", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args, runs=args.runs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = run_experiment(cfg, out_dir)
    agg = summary["aggregate"]
    acc = agg["accuracy"]
    print(f"{cfg.runs} runs: accuracy {acc['mean']:.4f} ± {acc['ci95']:.4f}  "
          f"macro F1 {agg['macro_f1']['mean']:.4f}")
    return 0


def cmd_landscape(args) -> int:
    snap = ModelSnapshot.load(args.model)
    grid = kurtosis_landscape(snap.to_model(), resolution=args.resolution)
    landscape_to_csv(grid, args.out)
    print(f"wrote {args.resolution}x{args.resolution} landscape to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beta4",
        description="Fuzzy classifier system with beta-shaped membership functions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a synthetic dataset as CSV")
    p.add_argument("--problem", required=True)
    p.add_argument("--samples", type=int, default=6000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train one model and save it")
    _add_data_flags(p)
    _add_engine_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--rules-out", type=Path)
    p.add_argument("--denormalize", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify a CSV with a saved model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--label-col", type=int, default=-1)
    p.add_argument("--header", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("experiment", help="multi-run experiment with reports")
    _add_data_flags(p)
    _add_engine_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("landscape", help="kurtosis landscape of a 2-D model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_landscape)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
