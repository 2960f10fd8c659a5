"""Command line entry point: ``movegrasp <subcommand> [options]``.

Exit status is 0 on success, 2 on usage errors and 1 on any other failure,
which is reported as a single ``movegrasp: error: ...`` line on stderr.
Relative output paths are resolved under ``$MOVEGRASP_RUN_ROOT`` when set.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

import numpy as np

from .config import ConfigError, RunConfig, load_config, write_resolved
from .environment import catalog_lookup, trajectory_row, write_trajectory
from .evaluation import (
    EvalSpec,
    episode_seed,
    evaluate,
    export_results,
    make_robot,
    run_episode,
    speed_bins,
)
from .patterns import KINDS
from .policy import load_checkpoint, save_checkpoint
from .trainer import ModelPool, adversarial_train, finetune

RUN_ROOT_ENV = "MOVEGRASP_RUN_ROOT"
REF_COLUMNS = ["ref_x", "ref_y"]

log = logging.getLogger("movegrasp")


def run_root() -> Path:
    return Path(os.environ.get(RUN_ROOT_ENV, "."))


def resolve_out(out: Optional[str], run: RunConfig) -> Path:
    path = Path(out) if out else Path(run.io.run_dir)
    return path if path.is_absolute() else run_root() / path


def _csv_list(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _load_run(args) -> RunConfig:
    return load_config(args.config) if args.config else RunConfig()


def _checkpointer(directory: Path, every: int):
    """``on_round`` hook writing robot checkpoints every ``every`` env steps."""
    state = {"next": every}

    def hook(env_steps, robot, mover):
        while every and env_steps >= state["next"]:
            save_checkpoint(directory / f"robot_{state['next']:09d}.ckpt", robot, training_step=env_steps)
            state["next"] += every

    return hook


def cmd_train(args) -> int:
    run = _load_run(args)
    train = run.train
    if args.steps is not None:
        train = replace(train, total_steps=args.steps)
    if args.workers is not None:
        train = replace(train, workers=args.workers)
    run = replace(run, train=train)
    out = resolve_out(args.out, run)
    write_resolved(run, out)
    res = adversarial_train(train, run.env, run.reward, seed=args.seed, log_path=out / "train_log.csv",
                            on_round=_checkpointer(out / "checkpoints", run.io.checkpoint_every))
    save_checkpoint(out / "robot.ckpt", res.robot, training_step=res.env_steps)
    if res.mover is not None:
        save_checkpoint(out / "mover.ckpt", res.mover, training_step=res.env_steps)
        res.pool.save(out / "pool")
    sr = float(np.mean([e.success for e in res.episodes[-train.rolling_window:]])) if res.episodes else 0.0
    print(f"trained {res.env_steps} env steps, {len(res.episodes)} episodes, rolling SR {sr:.3f} -> {out}")
    return 0


def cmd_finetune(args) -> int:
    run = _load_run(args)
    train = run.train
    if args.steps is not None:
        train = replace(train, finetune_steps=args.steps)
    if args.workers is not None:
        train = replace(train, workers=args.workers)
    run = replace(run, train=train)
    robot, _ = load_checkpoint(args.robot)
    pool = ModelPool.load(args.pool)
    out = resolve_out(args.out, run)
    write_resolved(run, out)
    res = finetune(robot, pool, train, run.env, run.reward, seed=args.seed, log_path=out / "finetune_log.csv",
                   on_round=_checkpointer(out / "checkpoints", run.io.checkpoint_every))
    save_checkpoint(out / "robot_finetuned.ckpt", res.robot, training_step=res.env_steps)
    print(f"finetuned {res.env_steps} env steps against {len(pool)} pool snapshots -> {out}")
    return 0


def cmd_eval(args) -> int:
    run = _load_run(args)
    base = run.eval
    spec = EvalSpec(
        robot=args.robot,
        patterns=_csv_list(args.patterns) if args.patterns else base.patterns,
        bins=args.bins if args.bins is not None else base.bins,
        bin_indices=tuple(int(b) for b in _csv_list(args.bin_indices)) if args.bin_indices else base.bin_indices,
        episodes_per_cell=args.episodes if args.episodes is not None else base.episodes_per_cell,
        max_steps=base.max_steps,
        seeds=tuple(range(args.seeds)) if args.seeds is not None else base.seeds,
        objects=_csv_list(args.objects) if args.objects else base.objects,
    )
    for kind in spec.patterns:
        if kind not in KINDS:
            raise ValueError(f"unknown pattern {kind!r}; expected some of {', '.join(KINDS)}")
    for name in spec.objects:
        catalog_lookup(name)
    out = Path(args.out) if args.out else resolve_out(None, run) / "results.csv"
    if not out.is_absolute():
        out = run_root() / out
    table = evaluate(spec, run.env)
    export_results(table, out)
    for row in table.aggregate():
        print(f"{row['pattern']:>16} ({row['bin_lo']:.1f}, {row['bin_hi']:.1f}]  SR {row['sr']:.3f}  AEL {row['ael']:.1f}")
    print(f"wrote {len(table.cells)} cells -> {out}")
    return 0


def _record_episode(robot_source: str, kind: str, bin_index: int, obj: str, seed: int, episode: int, run: RunConfig):
    robot = make_robot(robot_source, run.env)
    bins = speed_bins(run.eval.bins)
    ss = episode_seed(seed, kind, bin_index, obj, episode)
    record: list = []
    outcome = run_episode(robot, kind, bins[bin_index - 1], obj, ss, run.env, record=record)
    rows = []
    for ws, ev, ref in record:
        ref = (float("nan"), float("nan")) if ref is None else (float(ref[0]), float(ref[1]))
        rows.append(trajectory_row(ws, ev) + list(ref))
    return rows, outcome


def cmd_generate(args) -> int:
    run = _load_run(args)
    if args.kind not in KINDS:
        raise ValueError(f"unknown pattern {args.kind!r}; expected one of {', '.join(KINDS)}")
    catalog_lookup(args.object)
    if not 1 <= args.bin <= run.eval.bins:
        raise ValueError(f"--bin must lie in 1..{run.eval.bins}")
    out = resolve_out(args.out, run)
    for e in range(args.episodes):
        rows, outcome = _record_episode(args.robot, args.kind, args.bin, args.object, args.seed, e, run)
        path = write_trajectory(out / f"{args.kind}_{e:04d}.csv", rows, REF_COLUMNS)
        meta = {"robot": args.robot, "kind": args.kind, "bin": args.bin, "object": args.object,
                "seed": args.seed, "episode": e, "cause": outcome.cause, "steps": outcome.steps,
                "speed_ratio": outcome.speed_ratio}
        path.with_suffix(".json").write_text(json.dumps(meta, indent=1))
    write_resolved(run, out)
    print(f"wrote {args.episodes} {args.kind} trajectories -> {out}")
    return 0


def cmd_replay(args) -> int:
    """Re-simulate a generated trajectory and check it reproduces byte for byte."""
    path = Path(args.trajectory)
    meta_path = path.with_suffix(".json")
    if not path.is_file() or not meta_path.is_file():
        raise FileNotFoundError(f"need both {path} and {meta_path}")
    meta = json.loads(meta_path.read_text())
    cfg_path = path.parent / "config.toml"
    run = load_config(cfg_path) if cfg_path.is_file() else RunConfig()
    rows, _ = _record_episode(meta["robot"], meta["kind"], meta["bin"], meta["object"], meta["seed"],
                              meta["episode"], run)
    tmp = path.with_suffix(".replay.csv")
    write_trajectory(tmp, rows, REF_COLUMNS)
    expected, actual = path.read_text().splitlines(), tmp.read_text().splitlines()
    tmp.unlink()
    if expected == actual:
        print(f"replay matches {len(actual) - 1} rows of {path}")
        return 0
    for i, (a, b) in enumerate(zip(expected, actual)):
        if a != b:
            print(f"replay diverges at row {i} of {path}", file=sys.stderr)
            return 1
    print(f"replay length differs: {len(expected) - 1} recorded vs {len(actual) - 1} replayed rows", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="movegrasp", description="Adversarial move-and-grasp training and evaluation.")
    p.add_argument("--log-level", default="INFO", help="logging level for progress lines (default INFO)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--config", help="TOML run configuration")
        sp.add_argument("--out", help=f"output path (relative paths resolve under ${RUN_ROOT_ENV})")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("train", help="adversarial (or scripted-mover) training from scratch")
    common(t)
    t.add_argument("--steps", type=int, help="override train.total_steps")
    t.add_argument("--workers", type=int, help="override train.workers")
    t.set_defaults(func=cmd_train)

    f = sub.add_parser("finetune", help="finetune a robot against a saved mover pool")
    common(f)
    f.add_argument("--robot", required=True, help="robot checkpoint")
    f.add_argument("--pool", required=True, help="pool directory written by train")
    f.add_argument("--steps", type=int, help="override train.finetune_steps")
    f.add_argument("--workers", type=int, help="override train.workers")
    f.set_defaults(func=cmd_finetune)

    e = sub.add_parser("eval", help="speed-bin evaluation on scripted patterns")
    common(e, seed=False)
    e.add_argument("--robot", required=True, help="checkpoint path or baseline:pursuit")
    e.add_argument("--patterns", help="comma-separated pattern kinds")
    e.add_argument("--bins", type=int, help="number of speed-ratio bins")
    e.add_argument("--bin-indices", help="comma-separated 1-based subset of bins")
    e.add_argument("--episodes", type=int, help="episodes per cell")
    e.add_argument("--seeds", type=int, help="number of global seeds (0..N-1)")
    e.add_argument("--objects", help="comma-separated catalog names")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("generate-trajectories", help="record episodes of one pattern as CSV files")
    common(g)
    g.add_argument("--kind", required=True, help=f"one of {', '.join(KINDS)}")
    g.add_argument("--episodes", type=int, default=1)
    g.add_argument("--robot", default="baseline:pursuit")
    g.add_argument("--bin", type=int, default=1, help="1-based speed-ratio bin")
    g.add_argument("--object", default="rubiks_cube")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("replay", help="re-simulate a generated trajectory and verify it")
    r.add_argument("trajectory", help="CSV written by generate-trajectories")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse already printed usage
        return int(e.code or 0)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO),
                        format="%(asctime)s %(name)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError, OSError) as e:
        msg = str(e).strip("'\"") if isinstance(e, KeyError) else str(e)
        print(f"movegrasp: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
