"""Robot and mover reward functions.

``robot_reward`` is the geometry-aware shaping (box bonus, collision and
time penalties); ``vanilla_robot_reward`` is the distance-only variant used
by the plain RL baseline and the no-shaping ablation, whose mover then gets
the exact negation (``zero_sum_mover_reward``).
"""
from __future__ import annotations

from dataclasses import dataclass

from .environment import StepEvents


@dataclass(frozen=True)
class RewardConfig:
    R_s: float = 10.0
    P_out: float = -0.1
    R_b: float = 0.1
    P_coll: float = -0.1
    P_time: float = -0.005
    d_safe: float = 0.2
    P_close: float = -0.2

    def __post_init__(self):
        if not (self.R_s > 0 and self.R_b > 0):
            raise ValueError("reward.R_s and reward.R_b must be positive")
        for name in ("P_out", "P_coll", "P_time"):
            if not getattr(self, name) < 0:
                raise ValueError(f"reward.{name} must be negative, got {getattr(self, name)}")
        if not self.d_safe > 0:
            raise ValueError("reward.d_safe must be positive")
        if abs(self.P_close + self.d_safe) > 1e-12:
            raise ValueError(f"reward.P_close must equal -d_safe ({-self.d_safe}), got {self.P_close}")


def robot_reward(ev: StepEvents, cfg: RewardConfig, collision_check: bool = True) -> float:
    if ev.grasped_now:
        return cfg.R_s
    if ev.out_of_plate:
        return cfg.P_out
    r = cfg.R_b if ev.inside_bbox else -ev.d12
    if collision_check and ev.collided:
        r += cfg.P_coll
    return r + cfg.P_time


def mover_reward(ev: StepEvents, cfg: RewardConfig) -> float:
    r = ev.d12
    if ev.d12 < cfg.d_safe:
        r += cfg.P_close
    return r


def vanilla_robot_reward(ev: StepEvents, cfg: RewardConfig) -> float:
    if ev.grasped_now:
        return cfg.R_s
    if ev.out_of_plate:
        return cfg.P_out
    return -ev.d12


def zero_sum_mover_reward(ev: StepEvents, cfg: RewardConfig) -> float:
    return -vanilla_robot_reward(ev, cfg)
