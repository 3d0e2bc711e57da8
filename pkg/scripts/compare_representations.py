#!/usr/bin/env python3
"""Compare rule representations on one problem: beta with and without
crispification, frozen rectangles, and the triangular baseline."""

import argparse
from pathlib import Path

from beta4ucs.engine import EngineConfig
from beta4ucs.experiment import ExperimentConfig, run_experiment

VARIANTS = {
    "beta-crisp": dict(representation="fbr", crispification=True),
    "beta": dict(representation="fbr", crispification=False),
    "rect": dict(representation="rect"),
    "tri": dict(representation="tri"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--problem", default="mux20")
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--epochs", type=int, default=50)
    ap.add_argument("--out", type=Path, default=Path("repr_out"))
    args = ap.parse_args()

    for name, kw in VARIANTS.items():
        cfg = ExperimentConfig(problem=args.problem, runs=args.runs,
                               seed=args.seed,
                               engine=EngineConfig(epochs=args.epochs, **kw))
        out_dir = args.out / args.problem / name
        out_dir.mkdir(parents=True, exist_ok=True)
        summary = run_experiment(cfg, out_dir)
        agg = summary["aggregate"]
        print(f"{args.problem} {name:12s} accuracy "
              f"{agg['accuracy']['mean']:.4f} ± {agg['accuracy']['ci95']:.4f}  "
              f"micro rules {agg['micro_rules']['mean']:.0f}  "
              f"crisp {agg['crisp_fraction']['mean']:.3f}")


if __name__ == "__main__":
    main()
