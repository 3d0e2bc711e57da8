#!/usr/bin/env python3
"""Run the synthetic benchmark table: every problem with the default
beta representation, a chosen number of seeds, reports to out/<problem>/."""

import argparse
from pathlib import Path

from beta4ucs.engine import EngineConfig
from beta4ucs.experiment import ExperimentConfig, run_experiment

PROBLEMS = ["mux20", "chk3x5", "cmx3x3", "maj11", "carry12"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--epochs", type=int, default=50)
    ap.add_argument("--out", type=Path, default=Path("bench_out"))
    ap.add_argument("--problems", nargs="*", default=PROBLEMS)
    args = ap.parse_args()

    for name in args.problems:
        cfg = ExperimentConfig(problem=name, runs=args.runs, seed=args.seed,
                               engine=EngineConfig(epochs=args.epochs))
        out_dir = args.out / name
        out_dir.mkdir(parents=True, exist_ok=True)
        summary = run_experiment(cfg, out_dir)
        acc = summary["aggregate"]["accuracy"]
        f1 = summary["aggregate"]["macro_f1"]
        print(f"{name:8s} accuracy {acc['mean']:.4f} ± {acc['ci95']:.4f}   "
              f"macro F1 {f1['mean']:.4f} ± {f1['ci95']:.4f}")


if __name__ == "__main__":
    main()
