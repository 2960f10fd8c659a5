#!/usr/bin/env python3
"""Adversarial vs scripted-mover training, scored on unseen random waypoints.

Each seed trains both robots with the same step budget, then evaluates them
on random_waypoint over the faster half of the speed bins.

    python scripts/compare_generalization.py --steps 200000 --seeds 3
"""
import argparse
from pathlib import Path

import numpy as np

from movegrasp.environment import smallest_object
from movegrasp.evaluation import EvalSpec, evaluate
from movegrasp.policy import save_checkpoint
from movegrasp.trainer import TrainConfig, adversarial_train


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--episodes", type=int, default=50)
    ap.add_argument("--out", default="runs/generalization")
    args = ap.parse_args()
    obj = smallest_object().name
    out = Path(args.out)
    wins = 0
    for seed in range(args.seeds):
        sr = {}
        for label, adv_on in (("adversarial", True), ("scripted", False)):
            cfg = TrainConfig(total_steps=args.steps, workers=args.workers, objects=(obj,), adv_on=adv_on)
            res = adversarial_train(cfg, seed=seed)
            path = save_checkpoint(out / f"{label}_seed{seed}.ckpt", res.robot, training_step=res.env_steps)
            table = evaluate(EvalSpec(robot=str(path), patterns=("random_waypoint",), bin_indices=(5, 6, 7, 8, 9, 10),
                                      episodes_per_cell=args.episodes, seeds=(0,), objects=(obj,)))
            sr[label] = float(np.mean([c.sr for c in table.cells]))
        wins += sr["adversarial"] >= sr["scripted"]
        print(f"seed {seed}: adversarial SR {sr['adversarial']:.3f}  scripted SR {sr['scripted']:.3f}", flush=True)
    print(f"adversarial >= scripted on {wins}/{args.seeds} seeds")


if __name__ == "__main__":
    main()
