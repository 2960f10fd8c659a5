#!/usr/bin/env python3
"""Adversarial training on the smallest object; prints the learning curves.

Writes the per-update log and the final robot/mover checkpoints under --out.

    python scripts/training_smoke.py --steps 200000 --workers 4 --seed 0
"""
import argparse
import logging
from pathlib import Path

import numpy as np

from movegrasp.environment import smallest_object
from movegrasp.policy import save_checkpoint
from movegrasp.trainer import TrainConfig, adversarial_train


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scripted", action="store_true", help="train against scripted movers instead")
    ap.add_argument("--out", default="runs/training_smoke")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    out = Path(args.out)
    cfg = TrainConfig(total_steps=args.steps, workers=args.workers, objects=(smallest_object().name,),
                      adv_on=not args.scripted, log_every=25)
    res = adversarial_train(cfg, seed=args.seed, log_path=out / "train_log.csv")
    save_checkpoint(out / "robot.ckpt", res.robot, training_step=res.env_steps)
    if res.mover is not None:
        save_checkpoint(out / "mover.ckpt", res.mover, training_step=res.env_steps)

    eps = res.episodes
    chunk = max(1, len(eps) // 10)
    print("\nepisodes      SR   out_of_plate  mean len")
    for i in range(0, len(eps), chunk):
        part = eps[i:i + chunk]
        print(f"{i:5d}-{i + len(part):<5d} {np.mean([e.success for e in part]):6.3f} "
              f"{np.mean([e.cause == 'out_of_plate' for e in part]):10.3f} {np.mean([e.length for e in part]):9.1f}")
    print(f"\n{res.env_steps} env steps, {len(eps)} episodes -> {out}")


if __name__ == "__main__":
    main()
