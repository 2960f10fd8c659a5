"""Adversarial advantage actor-critic training.

Robot and mover learn simultaneously from shared episodes. ``W`` workers
are stepped in lockstep inside one process and their n-step segments are
batched into one synchronous update per agent, so a run is reproducible
from its seed for any worker count.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .environment import EnvConfig, StepEvents, catalog_lookup, object_catalog, reset, step
from .geometry import mover_observation, robot_observation
from .patterns import TRAIN_KINDS, PatternMover, sample_pattern
from .policy import (
    Descriptor,
    HiddenState,
    LossSpec,
    PolicyParams,
    Segment,
    init_policy,
    load_checkpoint,
    loss_and_gradients,
    policy_step,
    raw_to_action,
    sample_raw,
    save_checkpoint,
)
from .rewards import RewardConfig, mover_reward, robot_reward, vanilla_robot_reward, zero_sum_mover_reward

log = logging.getLogger(__name__)

LOG_COLUMNS = ["update", "env_steps", "gamma1", "mean_r1", "mean_r2", "rolling_sr", "rolling_ep_len"]


class NonFiniteLoss(FloatingPointError):
    def __init__(self, update: int, what: str = "loss"):
        super().__init__(f"non-finite {what} at update {update}; update aborted")
        self.update = update


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3
    finetune_lr: float = 1e-4
    gamma1_init: float = 0.5
    gamma1_final: float = 0.96
    gamma1_coeff: float = 5e-6  # per update
    gamma2: float = 0.9
    n_step: int = 20
    entropy_coeff: float = 0.01
    value_coeff: float = 0.5
    grad_clip: float = 40.0
    optimizer: str = "adam"
    workers: int = 16
    pool_snapshot_every: int = 20_000
    total_steps: int = 200_000
    finetune_steps: int = 100_000
    adv_on: bool = True
    ogar_on: bool = True
    collision_check_on: bool = True
    speed_ratio_range: tuple[float, float] = (0.1, 1.0)
    objects: tuple[str, ...] = ()  # empty = whole catalog
    hidden: tuple[int, ...] = (128, 128)
    lstm: int = 128
    obs_scale: float = 20.0  # observation gain ahead of the first tanh layer
    stack_prob: float = 0.5
    stack_max: int = 4
    rolling_window: int = 100
    log_every: int = 10
    select_every: int = 0  # env steps between robot candidates; 0 keeps the final robot
    select_episodes: int = 10
    normalize_advantages: bool = True
    loss_reduction: str = "mean"  # "sum" scales the batch loss by its sample count
    init_log_std: float = -2.0  # initial exploration std exp(-2) in pre-squash units

    def __post_init__(self):
        for name in ("gamma1_init", "gamma1_final", "gamma2"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"train.{name} must lie in (0, 1), got {v}")
        for name in ("lr", "finetune_lr", "n_step", "workers", "grad_clip", "pool_snapshot_every",
                     "total_steps", "stack_max", "rolling_window", "log_every"):
            if not getattr(self, name) > 0:
                raise ValueError(f"train.{name} must be positive, got {getattr(self, name)}")
        if self.gamma1_coeff < 0:
            raise ValueError("train.gamma1_coeff must be non-negative")
        if self.loss_reduction not in ("mean", "sum"):
            raise ValueError(f"train.loss_reduction must be 'mean' or 'sum', got {self.loss_reduction!r}")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"train.optimizer must be 'adam' or 'sgd', got {self.optimizer!r}")
        lo, hi = self.speed_ratio_range
        if not 0 < lo <= hi <= 1:
            raise ValueError(f"train.speed_ratio_range must satisfy 0 < lo <= hi <= 1, got {self.speed_ratio_range}")
        for name in self.objects:
            catalog_lookup(name)

    def descriptor(self, role: str) -> Descriptor:
        return Descriptor(role=role, hidden=self.hidden, lstm=self.lstm, obs_scale=self.obs_scale)

    @property
    def loss_spec(self) -> LossSpec:
        return LossSpec(1.0, self.value_coeff, self.entropy_coeff)


def gamma_schedule(update_step: int, cfg: TrainConfig) -> float:
    """Linearly growing robot discount, capped at ``gamma1_final``."""
    if update_step < 0:
        raise ValueError("update_step must be non-negative")
    return min(cfg.gamma1_final, cfg.gamma1_init + cfg.gamma1_coeff * update_step)


def returns_and_advantages(rewards, values, gamma: float, bootstrap_value, dones=None):
    """Discounted n-step returns R_t = r_t + gamma R_{t+1} and advantages R_t - V_t.

    Arrays are (T,) or (T, B); ``dones[t]`` cuts the recursion after step t.
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if rewards.shape[0] == 0:
        raise ValueError("empty trajectory")
    dones = np.zeros_like(rewards) if dones is None else np.asarray(dones, dtype=np.float64)
    R = np.asarray(bootstrap_value, dtype=np.float64) * np.ones(rewards.shape[1:])
    out = np.empty_like(rewards)
    for t in reversed(range(rewards.shape[0])):
        R = rewards[t] + gamma * (1.0 - dones[t]) * R
        out[t] = R
    return out, out - values


def clip_by_global_norm(g: np.ndarray, max_norm: float) -> tuple[np.ndarray, float]:
    norm = float(np.sqrt(np.sum(np.square(g, dtype=np.float64))))
    if norm > max_norm:
        g = g * (max_norm / norm)
    return g, norm


@dataclass
class Optimizer:
    kind: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    m: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    t: int = 0

    def direction(self, g: np.ndarray) -> np.ndarray:
        if self.kind == "sgd":
            return g
        if self.m is None:
            self.m = np.zeros(g.shape)
            self.v = np.zeros(g.shape)
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * g
        self.v = self.beta2 * self.v + (1 - self.beta2) * g * g
        mhat = self.m / (1 - self.beta1**self.t)
        vhat = self.v / (1 - self.beta2**self.t)
        return mhat / (np.sqrt(vhat) + self.eps)


def a2c_update(params: PolicyParams, seg: Segment, lr: float, cfg: TrainConfig,
               opt: Optional[Optimizer] = None, update_index: int = 0) -> tuple[PolicyParams, dict]:
    """One clipped gradient step on the actor-critic loss of ``seg``."""
    opt = opt or Optimizer("sgd")
    loss, grad = loss_and_gradients(params, cfg.loss_spec, seg)
    if cfg.loss_reduction == "sum":
        n = seg.advantages.size
        loss, grad = loss * n, grad * n
    if not math.isfinite(loss) or not np.all(np.isfinite(grad)):
        raise NonFiniteLoss(update_index)
    grad, norm = clip_by_global_norm(grad.astype(np.float64), cfg.grad_clip)
    new = params.flat.astype(np.float64) - lr * opt.direction(grad)
    return PolicyParams(params.descriptor, new.astype(params.flat.dtype)), {"loss": loss, "grad_norm": norm}


@dataclass(frozen=True)
class Snapshot:
    env_steps: int
    params: PolicyParams


class ModelPool:
    """Append-only archive of mover snapshots."""

    def __init__(self, snapshots=()):
        self.snapshots: list[Snapshot] = list(snapshots)

    def __len__(self):
        return len(self.snapshots)

    def __getitem__(self, i) -> Snapshot:
        return self.snapshots[i]

    def add(self, env_steps: int, params: PolicyParams) -> None:
        self.snapshots.append(Snapshot(env_steps, params.copy()))

    def sample(self, rng: np.random.Generator) -> int:
        if not self.snapshots:
            raise ValueError("model pool is empty")
        return int(rng.integers(len(self.snapshots)))

    def save(self, directory) -> Path:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        with (d / "index.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "env_steps", "file"])
            for i, s in enumerate(self.snapshots):
                name = f"mover_{i:04d}.ckpt"
                save_checkpoint(d / name, s.params, training_step=s.env_steps)
                w.writerow([i, s.env_steps, name])
        return d

    @classmethod
    def load(cls, directory) -> ModelPool:
        d = Path(directory)
        with (d / "index.csv").open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        return cls(Snapshot(int(r["env_steps"]), load_checkpoint(d / r["file"])[0]) for r in rows)


@dataclass
class EpisodeRecord:
    success: bool
    length: int
    cause: str
    return_r1: float
    return_r2: float
    speed_ratio: float
    object: str
    inside_steps: int = 0
    collisions: int = 0


@dataclass
class TrainResult:
    robot: PolicyParams
    mover: Optional[PolicyParams]
    pool: ModelPool
    log: list[dict] = field(default_factory=list)
    episodes: list[EpisodeRecord] = field(default_factory=list)
    updates: int = 0
    env_steps: int = 0


RewardFn = Callable[[StepEvents], float]


def reward_functions(cfg: TrainConfig, rcfg: RewardConfig) -> tuple[RewardFn, RewardFn]:
    if cfg.ogar_on:
        return (lambda ev: robot_reward(ev, rcfg, cfg.collision_check_on)), (lambda ev: mover_reward(ev, rcfg))
    return (lambda ev: vanilla_robot_reward(ev, rcfg)), (lambda ev: zero_sum_mover_reward(ev, rcfg))


class _Slot:
    """Per-worker episode bookkeeping."""

    __slots__ = ("ws", "cfg", "t", "r1", "r2", "inside", "hits", "pattern", "pool_idx", "hold", "mover_h",
                 "mover_raw")

    def __init__(self):
        self.ws = None
        self.cfg = None
        self.t = 0
        self.r1 = self.r2 = 0.0
        self.inside = self.hits = 0
        self.pattern = None
        self.pool_idx = None
        self.hold = 1
        self.mover_h = None
        self.mover_raw = None


class Collector:
    """Lockstep rollout of W environments for one or two learning agents.

    mover_mode: "learned" (shared adversary being trained), "pattern"
    (scripted train-kind movers) or "pool" (frozen snapshots with stacking).
    """

    def __init__(self, cfg: TrainConfig, env_cfg: EnvConfig, rng: np.random.Generator,
                 robot_fn: RewardFn, mover_fn: RewardFn, mover_mode: str, pool: Optional[ModelPool] = None):
        self.cfg, self.env_cfg, self.rng = cfg, env_cfg, rng
        self.robot_fn, self.mover_fn = robot_fn, mover_fn
        self.mover_mode = mover_mode
        self.pool = pool
        self.objects = [catalog_lookup(n) for n in cfg.objects] or object_catalog()
        W = cfg.workers
        self.slots = [_Slot() for _ in range(W)]
        self.robot_h = HiddenState.zeros(cfg.descriptor("robot"), W)
        self.mover_h = HiddenState.zeros(cfg.descriptor("mover"), W)
        self.starts = np.ones(W)
        self.episodes: list[EpisodeRecord] = []
        for i in range(W):
            self._new_episode(i)
        self.starts[:] = 1.0

    def _new_episode(self, i: int) -> None:
        s = self.slots[i]
        rng = self.rng
        obj = self.objects[int(rng.integers(len(self.objects)))]
        lo, hi = self.cfg.speed_ratio_range
        sr = float(rng.uniform(lo, hi)) if hi > lo else lo
        cfg = EnvConfig(**{f: getattr(self.env_cfg, f) for f in self.env_cfg.__dataclass_fields__}
                        | {"object": obj, "speed_ratio": sr})
        seed = int(rng.integers(2**63))
        s.cfg, s.t, s.r1, s.r2 = cfg, 0, 0.0, 0.0
        s.inside = s.hits = 0
        s.pattern = s.pool_idx = None
        s.hold = 1
        if self.mover_mode == "pattern":
            spec = sample_pattern(TRAIN_KINDS[int(rng.integers(len(TRAIN_KINDS)))], rng)
            s.ws = reset(cfg, seed, plate_center=spec.start)
            s.pattern = PatternMover(spec, cfg, sr)
        else:
            s.ws = reset(cfg, seed)
        if self.mover_mode == "pool":
            s.pool_idx = self.pool.sample(rng)
            if rng.random() < self.cfg.stack_prob:
                s.hold = int(rng.integers(1, self.cfg.stack_max + 1))
            d = self.pool[s.pool_idx].params.descriptor
            s.mover_h = HiddenState.zeros(d, dtype=self.pool[s.pool_idx].params.flat.dtype)
            s.mover_raw = None
        self.robot_h.h[i] = 0.0
        self.robot_h.c[i] = 0.0
        self.mover_h.h[i] = 0.0
        self.mover_h.c[i] = 0.0
        self.starts[i] = 1.0

    def _pool_mover_raw(self, s: _Slot) -> np.ndarray:
        if s.mover_raw is None or s.t % s.hold == 0:
            params = self.pool[s.pool_idx].params
            dist, _, s.mover_h = policy_step(params, mover_observation(s.ws), s.mover_h)
            s.mover_raw = sample_raw(dist, self.rng)
        return s.mover_raw

    def collect(self, robot: PolicyParams, mover: Optional[PolicyParams]):
        """Run n_step lockstep steps; returns (robot batch, mover batch or None)."""
        W, T = self.cfg.workers, self.cfg.n_step
        learned = self.mover_mode == "learned"
        rb = _Batch(T, W, self.robot_h)
        mb = _Batch(T, W, self.mover_h) if learned else None
        for t in range(T):
            obs_r = np.stack([robot_observation(s.ws) for s in self.slots]).astype(np.float32)
            dist_r, v_r, self.robot_h = policy_step(robot, obs_r, self.robot_h)
            raw_r = sample_raw(dist_r, self.rng)
            rb.record(t, obs_r, raw_r, v_r, self.starts)
            if learned:
                obs_m = np.stack([mover_observation(s.ws) for s in self.slots]).astype(np.float32)
                dist_m, v_m, self.mover_h = policy_step(mover, obs_m, self.mover_h)
                raw_m = sample_raw(dist_m, self.rng)
                mb.record(t, obs_m, raw_m, v_m, self.starts)
            self.starts = np.zeros(W)
            for i, s in enumerate(self.slots):
                a1 = raw_to_action(raw_r[i], "robot")
                if learned:
                    a2 = raw_to_action(raw_m[i], "mover")
                elif self.mover_mode == "pattern":
                    a2 = s.pattern.act(s.ws, s.t)
                else:
                    a2 = raw_to_action(self._pool_mover_raw(s), "mover")
                s.ws, ev = step(s.ws, a1, a2, s.cfg)
                s.t += 1
                r1, r2 = self.robot_fn(ev), self.mover_fn(ev)
                s.r1 += r1
                s.r2 += r2
                s.inside += ev.inside_bbox
                s.hits += ev.collided
                rb.rewards[t, i] = r1
                rb.dones[t, i] = float(ev.terminal)
                if learned:
                    mb.rewards[t, i] = r2
                    mb.dones[t, i] = float(ev.terminal)
                rb.r2[t, i] = r2
                if ev.terminal:
                    self.episodes.append(EpisodeRecord(ev.grasped_now, s.ws.step_index, s.ws.terminal,
                                                       s.r1, s.r2, s.ws.speed_ratio, s.cfg.object.name,
                                                       s.inside, s.hits))
                    self._new_episode(i)
        obs_r = np.stack([robot_observation(s.ws) for s in self.slots]).astype(np.float32)
        rb.bootstrap = policy_step(robot, obs_r, self.robot_h)[1]
        if learned:
            obs_m = np.stack([mover_observation(s.ws) for s in self.slots]).astype(np.float32)
            mb.bootstrap = policy_step(mover, obs_m, self.mover_h)[1]
        return rb, mb


class _Batch:
    def __init__(self, T: int, W: int, h0: HiddenState):
        self.h0 = h0.copy()
        self.obs = np.zeros((T, W, 31), np.float32)
        self.raw = [None] * T
        self.values = np.zeros((T, W))
        self.rewards = np.zeros((T, W))
        self.r2 = np.zeros((T, W))
        self.dones = np.zeros((T, W))
        self.starts = np.zeros((T, W))
        self.bootstrap = np.zeros(W)

    def record(self, t, obs, raw, value, starts):
        self.obs[t] = obs
        self.raw[t] = raw
        self.values[t] = value
        self.starts[t] = starts

    def segment(self, gamma: float, normalize: bool = False) -> Segment:
        R, A = returns_and_advantages(self.rewards, self.values, gamma, self.bootstrap, self.dones)
        if normalize:
            A = (A - A.mean()) / (A.std() + 1e-8)
        return Segment(self.obs, np.stack(self.raw), A, R, self.h0, self.starts)


def _rolling(episodes: list[EpisodeRecord], window: int) -> tuple[float, float]:
    recent = episodes[-window:]
    if not recent:
        return 0.0, 0.0
    return float(np.mean([e.success for e in recent])), float(np.mean([e.length for e in recent]))


class _LogWriter:
    def __init__(self, path: Optional[Path]):
        self.path = Path(path) if path else None
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w", newline="") as fh:
                csv.writer(fh).writerow(LOG_COLUMNS)

    def write(self, row: dict) -> None:
        if self.path:
            with self.path.open("a", newline="") as fh:
                csv.writer(fh).writerow([repr(row[k]) if isinstance(row[k], float) else row[k] for k in LOG_COLUMNS])


def adversarial_train(cfg: TrainConfig, env_cfg: EnvConfig = EnvConfig(), reward_cfg: RewardConfig = RewardConfig(),
                      seed: int = 0, log_path=None, robot_init: Optional[PolicyParams] = None,
                      mover_init: Optional[PolicyParams] = None,
                      reward_fns: Optional[tuple[RewardFn, RewardFn]] = None,
                      max_updates: Optional[int] = None,
                      on_round: Optional[Callable[[int, PolicyParams, Optional[PolicyParams]], None]] = None,
                      ) -> TrainResult:
    """Simultaneous robot/mover training (or scripted movers when ``adv_on`` is off).

    ``on_round(env_steps, robot, mover)`` runs after every synchronous update.
    """
    rng = np.random.default_rng(seed)
    robot = robot_init or init_policy(cfg.descriptor("robot"), rng.integers(2**63), log_std_init=cfg.init_log_std)
    mover = mover_init or init_policy(cfg.descriptor("mover"), rng.integers(2**63), log_std_init=cfg.init_log_std)
    robot_fn, mover_fn = reward_fns or reward_functions(cfg, reward_cfg)
    mode = "learned" if cfg.adv_on else "pattern"
    col = Collector(cfg, env_cfg, rng, robot_fn, mover_fn, mode)
    opt_r, opt_m = Optimizer(cfg.optimizer), Optimizer(cfg.optimizer)
    pool = ModelPool()
    writer = _LogWriter(log_path)
    result = TrainResult(robot, mover if cfg.adv_on else None, pool)
    candidates: list[tuple[int, PolicyParams]] = []
    next_snap, next_cand = cfg.pool_snapshot_every, cfg.select_every
    # Each worker segment counts as one update, matching an asynchronous learner
    # where every worker pushes its own gradient; gamma1 is thus independent of W.
    env_steps, update, rounds = 0, 0, 0
    acc = [0.0, 0.0, 0]
    while env_steps < cfg.total_steps and (max_updates is None or rounds < max_updates):
        rb, mb = col.collect(robot, mover if cfg.adv_on else None)
        env_steps += cfg.n_step * cfg.workers
        gamma1 = gamma_schedule(update, cfg)
        robot, info = a2c_update(robot, rb.segment(gamma1, cfg.normalize_advantages), cfg.lr, cfg, opt_r, update)
        if cfg.adv_on:
            mover, _ = a2c_update(mover, mb.segment(cfg.gamma2, cfg.normalize_advantages), cfg.lr, cfg, opt_m, update)
        update += cfg.workers
        rounds += 1
        if on_round is not None:
            on_round(env_steps, robot, mover if cfg.adv_on else None)
        acc[0] += float(rb.rewards.sum())
        acc[1] += float(rb.r2.sum())
        acc[2] += rb.rewards.size
        while cfg.adv_on and env_steps >= next_snap:
            pool.add(next_snap, mover)
            next_snap += cfg.pool_snapshot_every
        while cfg.select_every and env_steps >= next_cand:
            candidates.append((next_cand, robot.copy()))
            next_cand += cfg.select_every
        if rounds % cfg.log_every == 0:
            sr, ep_len = _rolling(col.episodes, cfg.rolling_window)
            row = {"update": update, "env_steps": env_steps, "gamma1": gamma1,
                   "mean_r1": acc[0] / acc[2], "mean_r2": acc[1] / acc[2],
                   "rolling_sr": sr, "rolling_ep_len": ep_len}
            result.log.append(row)
            writer.write(row)
            log.info("update %d steps %d gamma1 %.4f r1 %.4f r2 %.4f sr %.3f len %.1f",
                     update, env_steps, gamma1, row["mean_r1"], row["mean_r2"], sr, ep_len)
            acc = [0.0, 0.0, 0]
    if cfg.adv_on:
        pool.add(env_steps, mover)
    if candidates:
        candidates.append((env_steps, robot))
        robot = select_best_robot([p for _, p in candidates], env_cfg, cfg.select_episodes, seed)
    result.robot, result.mover = robot, (mover if cfg.adv_on else None)
    result.episodes = col.episodes
    result.updates, result.env_steps = update, env_steps
    return result


def select_best_robot(candidates: list[PolicyParams], env_cfg: EnvConfig, episodes: int, seed: int) -> PolicyParams:
    """Highest success rate on the scripted training patterns; ties go to the later candidate."""
    from .evaluation import PolicyRobot, run_episode  # evaluation depends on policy only

    objects = [t.name for t in object_catalog()]
    best, best_sr = candidates[-1], -1.0
    for params in reversed(candidates):
        robot = PolicyRobot(params)
        wins = 0
        for e in range(episodes):
            ss = np.random.SeedSequence([seed, 7919, e])
            kind = TRAIN_KINDS[e % len(TRAIN_KINDS)]
            obj = objects[e % len(objects)]
            wins += run_episode(robot, kind, (0.0, 1.0), obj, ss, env_cfg).success
        sr = wins / episodes
        if sr > best_sr:
            best, best_sr = params, sr
    return best


def finetune(robot: PolicyParams, pool: ModelPool, cfg: TrainConfig, env_cfg: EnvConfig = EnvConfig(),
             reward_cfg: RewardConfig = RewardConfig(), seed: int = 0, log_path=None,
             steps: Optional[int] = None,
             on_round: Optional[Callable[[int, PolicyParams, Optional[PolicyParams]], None]] = None) -> TrainResult:
    """Robot-only updates against movers drawn from the pool, with hold-factor stacking."""
    if len(pool) == 0:
        raise ValueError("cannot finetune against an empty model pool")
    rng = np.random.default_rng(seed)
    robot_fn, mover_fn = reward_functions(cfg, reward_cfg)
    col = Collector(cfg, env_cfg, rng, robot_fn, mover_fn, "pool", pool)
    opt = Optimizer(cfg.optimizer)
    writer = _LogWriter(log_path)
    result = TrainResult(robot, None, pool)
    budget = cfg.finetune_steps if steps is None else steps
    gamma1 = cfg.gamma1_final
    env_steps, update, rounds = 0, 0, 0
    acc = [0.0, 0.0, 0]
    while env_steps < budget:
        rb, _ = col.collect(robot, None)
        env_steps += cfg.n_step * cfg.workers
        robot, _ = a2c_update(robot, rb.segment(gamma1, cfg.normalize_advantages), cfg.finetune_lr, cfg, opt, update)
        update += cfg.workers
        rounds += 1
        if on_round is not None:
            on_round(env_steps, robot, None)
        acc[0] += float(rb.rewards.sum())
        acc[1] += float(rb.r2.sum())
        acc[2] += rb.rewards.size
        if rounds % cfg.log_every == 0:
            sr, ep_len = _rolling(col.episodes, cfg.rolling_window)
            row = {"update": update, "env_steps": env_steps, "gamma1": gamma1,
                   "mean_r1": acc[0] / acc[2], "mean_r2": acc[1] / acc[2],
                   "rolling_sr": sr, "rolling_ep_len": ep_len}
            result.log.append(row)
            writer.write(row)
            acc = [0.0, 0.0, 0]
    result.robot = robot
    result.episodes = col.episodes
    result.updates, result.env_steps = update, env_steps
    return result
