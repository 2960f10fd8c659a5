"""Speed-ratio-bin evaluation: success rate (SR) and average episode length (AEL).

Per-episode randomness is derived from (global seed, pattern, bin, object,
episode index) only, so cells can be computed in any order or in parallel
and still aggregate to the same table.
"""
from __future__ import annotations

import csv
import json
import zlib
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .baseline import PursuitBaseline
from .environment import (
    GRASPED,
    EnvConfig,
    RobotAction,
    WorldState,
    catalog_lookup,
    object_catalog,
    reset,
    step,
)
from .geometry import robot_observation, mover_observation
from .patterns import TEST_KINDS, PatternMover, sample_pattern
from .policy import HiddenState, PolicyParams, load_checkpoint, policy_step, sample_action

COLUMNS = ["pattern", "bin_lo", "bin_hi", "seed", "object", "episodes", "successes", "sr", "ael"]


def speed_bins(n: int = 10) -> list[tuple[float, float]]:
    """Half-open bins ((i-1)/n, i/n] covering (0, 1]."""
    return [((i - 1) / n, i / n) for i in range(1, n + 1)]


def sample_speed(rng: np.random.Generator, bin_: tuple[float, float]) -> float:
    lo, hi = bin_
    return float(hi - rng.random() * (hi - lo))  # in (lo, hi]


def episode_seed(global_seed: int, pattern: str, bin_index: int, obj: str, episode: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        [int(global_seed), zlib.crc32(pattern.encode()), int(bin_index), zlib.crc32(obj.encode()), int(episode)]
    )


class PolicyRobot:
    """Adapter that drives the environment with a learned robot policy."""

    def __init__(self, params: PolicyParams, deterministic: bool = False):
        self.params = params
        self.deterministic = deterministic
        self.h: Optional[HiddenState] = None
        self.rng: Optional[np.random.Generator] = None

    def reset(self, ws: WorldState, rng: np.random.Generator) -> None:
        self.h = HiddenState.zeros(self.params.descriptor, dtype=self.params.flat.dtype)
        self.rng = rng

    def act(self, ws: WorldState) -> RobotAction:
        dist, _, self.h = policy_step(self.params, robot_observation(ws), self.h)
        return sample_action(dist, self.rng, self.deterministic)[0]


class PolicyMover:
    """Learned mover (e.g. a pool snapshot) behind the scripted-mover interface."""

    def __init__(self, params: PolicyParams, rng: np.random.Generator, deterministic: bool = False):
        self.params = params
        self.rng = rng
        self.deterministic = deterministic
        self.h = HiddenState.zeros(params.descriptor, dtype=params.flat.dtype)

    def act(self, ws: WorldState, t: int):
        dist, _, self.h = policy_step(self.params, mover_observation(ws), self.h)
        return sample_action(dist, self.rng, self.deterministic)[0]


def make_robot(source, env_cfg: EnvConfig = EnvConfig()):
    """``source``: PolicyParams, a checkpoint path, or ``"baseline:pursuit"``."""
    if isinstance(source, PolicyParams):
        return PolicyRobot(source)
    if isinstance(source, (PursuitBaseline, PolicyRobot)):
        return source
    if str(source) == "baseline:pursuit":
        return PursuitBaseline(env_cfg)
    path = Path(source)
    if not path.is_file():
        raise FileNotFoundError(f"robot checkpoint not found: {path}")
    return PolicyRobot(load_checkpoint(path)[0])


@dataclass(frozen=True)
class Outcome:
    success: bool
    steps: int
    cause: str
    speed_ratio: float


def run_episode(robot, pattern: str, bin_: tuple[float, float], obj: str, seed,
                env_cfg: EnvConfig = EnvConfig(), record: Optional[list] = None) -> Outcome:
    """One evaluation episode. ``seed`` is an int or SeedSequence."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    r_speed, r_env, r_pat, r_robot = (np.random.default_rng(s) for s in ss.spawn(4))
    sr = sample_speed(r_speed, bin_)
    cfg = EnvConfig(**{**asdict_shallow(env_cfg), "object": catalog_lookup(obj), "speed_ratio": sr})
    spec = sample_pattern(pattern, r_pat)
    ws = reset(cfg, r_env, plate_center=spec.start)
    mover = PatternMover(spec, cfg, sr)
    robot.reset(ws, r_robot)
    t = 0
    ev = None
    if record is not None:
        record.append((ws, None, mover.reference(0)))
    while ws.terminal is None:
        a1 = robot.act(ws)
        a2 = mover.act(ws, t)
        ws, ev = step(ws, a1, a2, cfg)
        t += 1
        if record is not None:
            record.append((ws, ev, mover.reference(t)))
    return Outcome(ws.terminal == GRASPED, ws.step_index, ws.terminal, sr)


def asdict_shallow(cfg) -> dict:
    return {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}


@dataclass(frozen=True)
class Cell:
    pattern: str
    bin_lo: float
    bin_hi: float
    seed: int
    object: str
    episodes: int
    successes: int
    sr: float
    ael: float


@dataclass
class MetricsTable:
    cells: list[Cell] = field(default_factory=list)

    def aggregate(self) -> list[dict]:
        """Mean SR/AEL per (pattern, bin) across seeds and objects."""
        groups: dict = {}
        for c in self.cells:
            groups.setdefault((c.pattern, c.bin_lo, c.bin_hi), []).append(c)
        return [
            {"pattern": p, "bin_lo": lo, "bin_hi": hi,
             "sr": float(np.mean([c.sr for c in cs])), "ael": float(np.mean([c.ael for c in cs])),
             "cells": len(cs)}
            for (p, lo, hi), cs in groups.items()
        ]

    def select(self, **kw) -> list[Cell]:
        return [c for c in self.cells if all(getattr(c, k) == v for k, v in kw.items())]


def summarize_cell(pattern, bin_, seed, obj, outcomes: Sequence[Outcome], max_steps: int) -> Cell:
    n = len(outcomes)
    succ = sum(o.success for o in outcomes)
    # failures count as a full-length episode
    ael = sum(o.steps if o.success else max_steps for o in outcomes) / n
    return Cell(pattern, bin_[0], bin_[1], int(seed), obj, n, succ, succ / n, ael)


@dataclass(frozen=True)
class EvalSpec:
    robot: object = "baseline:pursuit"
    patterns: tuple[str, ...] = TEST_KINDS
    bins: int = 10
    bin_indices: Optional[tuple[int, ...]] = None  # 1-based subset of bins; None = all
    episodes_per_cell: int = 50
    max_steps: int = 300
    seeds: tuple[int, ...] = (0, 1, 2)
    objects: tuple[str, ...] = tuple(t.name for t in object_catalog())

    def __post_init__(self):
        if self.episodes_per_cell <= 0:
            raise ValueError("episodes_per_cell must be positive")
        if self.bins <= 0 or self.max_steps <= 0:
            raise ValueError("bins and max_steps must be positive")


def evaluate(spec: EvalSpec, env_cfg: EnvConfig = EnvConfig(), progress=None) -> MetricsTable:
    cfg = EnvConfig(**{**asdict_shallow(env_cfg), "max_steps": spec.max_steps})
    robot = make_robot(spec.robot, cfg)
    bins = speed_bins(spec.bins)
    indices = spec.bin_indices or tuple(range(1, spec.bins + 1))
    table = MetricsTable()
    for pattern in spec.patterns:
        for bi in indices:
            for seed in spec.seeds:
                for obj in spec.objects:
                    outs = [
                        run_episode(robot, pattern, bins[bi - 1], obj, episode_seed(seed, pattern, bi, obj, e), cfg)
                        for e in range(spec.episodes_per_cell)
                    ]
                    cell = summarize_cell(pattern, bins[bi - 1], seed, obj, outs, spec.max_steps)
                    table.cells.append(cell)
                    if progress is not None:
                        progress(cell)
    return table


def export_results(table: MetricsTable, path, fmt: Optional[str] = None) -> Path:
    """Write ``csv`` (default) or ``json``; floats are written with repr for exact round trips."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(COLUMNS)
                for c in table.cells:
                    w.writerow([repr(v) if isinstance(v, float) else v for v in (getattr(c, k) for k in COLUMNS)])
        elif fmt == "json":
            path.write_text(json.dumps({"columns": COLUMNS, "cells": [asdict(c) for c in table.cells]}, indent=1))
        else:
            raise ValueError(f"unknown export format {fmt!r}")
    except OSError as e:
        raise OSError(f"cannot write results to {path}: {e}") from e
    return path


def import_results(path) -> MetricsTable:
    path = Path(path)
    if path.suffix == ".json":
        data = json.loads(path.read_text())
        return MetricsTable([Cell(**c) for c in data["cells"]])
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    cells = [
        Cell(r["pattern"], float(r["bin_lo"]), float(r["bin_hi"]), int(r["seed"]), r["object"],
             int(r["episodes"]), int(r["successes"]), float(r["sr"]), float(r["ael"]))
        for r in rows
    ]
    return MetricsTable(cells)
