"""Non-learning pursuit baseline.

A constant-velocity Kalman filter predicts the plate-borne object, a
proportional controller hovers the gripper above the prediction, and once
the horizontal error stays small the gripper descends, closes and lifts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .environment import EnvConfig, RobotAction, WorldState
from .geometry import contains, point_in_frame, wrap_angle


@dataclass(frozen=True)
class FilterState:
    mean: np.ndarray  # x, y, vx, vy
    cov: np.ndarray
    process_noise: float = 1e-3  # white-acceleration spectral density
    measurement_noise: float = 1e-6  # position variance, m^2


def filter_init(xy, process_noise: float = 1e-3, measurement_noise: float = 1e-6,
                velocity_var: float = 0.04) -> FilterState:
    mean = np.array([xy[0], xy[1], 0.0, 0.0])
    cov = np.diag([measurement_noise, measurement_noise, velocity_var, velocity_var])
    return FilterState(mean, cov, process_noise, measurement_noise)


def _symmetrize(P: np.ndarray) -> np.ndarray:
    return 0.5 * (P + P.T)


def filter_predict(fs: FilterState, dt: float) -> FilterState:
    F = np.eye(4)
    F[0, 2] = F[1, 3] = dt
    q = fs.process_noise
    Q1 = q * np.array([[dt**3 / 3, dt**2 / 2], [dt**2 / 2, dt]])
    Q = np.zeros((4, 4))
    Q[np.ix_([0, 2], [0, 2])] = Q1
    Q[np.ix_([1, 3], [1, 3])] = Q1
    return replace(fs, mean=F @ fs.mean, cov=_symmetrize(F @ fs.cov @ F.T + Q))


def innovation(fs: FilterState, z) -> np.ndarray:
    return np.asarray(z, dtype=float) - fs.mean[:2]


def filter_update(fs: FilterState, z) -> FilterState:
    z = np.asarray(z, dtype=float)
    if z.shape != (2,) or not np.all(np.isfinite(z)):
        raise ValueError(f"measurement must be two finite numbers, got {z}")
    H = np.zeros((2, 4))
    H[0, 0] = H[1, 1] = 1.0
    R = fs.measurement_noise * np.eye(2)
    S = H @ fs.cov @ H.T + R
    K = np.linalg.solve(S, H @ fs.cov).T
    mean = fs.mean + K @ (z - H @ fs.mean)
    I_KH = np.eye(4) - K @ H
    cov = I_KH @ fs.cov @ I_KH.T + K @ R @ K.T  # Joseph form keeps P PSD
    return replace(fs, mean=mean, cov=_symmetrize(cov))


@dataclass(frozen=True)
class PursuitConfig:
    hover: float = 0.05  # above the box top while tracking
    trigger: float = 0.01  # horizontal error that counts as locked on
    hold_steps: int = 3
    gain: float = 1.0
    lead_steps: float = 1.0
    grasp_depth: float = 0.02  # below the box top before closing
    yaw_tolerance: float = 0.05
    process_noise: float = 1e-3
    measurement_noise: float = 1e-6


class PursuitBaseline:
    """Scripted robot: track above the predicted object, then top-down grasp."""

    name = "baseline:pursuit"

    def __init__(self, env_cfg: EnvConfig, cfg: PursuitConfig = PursuitConfig()):
        self.env_cfg = env_cfg
        self.cfg = cfg
        self.filter: Optional[FilterState] = None
        self.phase = "track"
        self.locked = 0

    def reset(self, ws: WorldState, rng=None) -> None:
        self.filter = None
        self.phase = "track"
        self.locked = 0

    def _observe(self, ws: WorldState) -> np.ndarray:
        z = (ws.object.center.x, ws.object.center.y)
        if self.filter is None:
            self.filter = filter_init(z, self.cfg.process_noise, self.cfg.measurement_noise)
        else:
            self.filter = filter_update(filter_predict(self.filter, self.env_cfg.dt), z)
        m = self.filter.mean
        return m[:2] + self.cfg.lead_steps * self.env_cfg.dt * m[2:]

    def _grasp_yaw(self, ws: WorldState) -> float:
        hx, hy, _ = ws.object.half_extents
        return 0.0 if 2 * hy <= self.env_cfg.gripper_max_opening else math.pi / 2

    def act(self, ws: WorldState) -> RobotAction:
        cfg = self.cfg
        obj = ws.object
        pred = self._observe(ws)
        g = ws.gripper
        theta = self._grasp_yaw(ws)
        yaw_err = abs(wrap_angle(obj.center.yaw + theta - g.yaw))
        err = math.hypot(pred[0] - g.x, pred[1] - g.y)
        top = obj.top_z

        if self.phase == "lift" and not ws.attached:
            self.phase, self.locked = "track", 0
        if self.phase == "track":
            self.locked = self.locked + 1 if (err < cfg.trigger and yaw_err < cfg.yaw_tolerance) else 0
            if self.locked >= cfg.hold_steps:
                self.phase = "descend"
        elif self.phase == "descend":
            if err > min(obj.half_extents[:2]):
                self.phase, self.locked = "track", 0

        close = False
        if self.phase == "track":
            tz = top + cfg.hover
        elif self.phase == "descend":
            tz = max(top - cfg.grasp_depth, obj.center.z)
            if contains(obj, g.position) and g.z <= top - 0.5 * cfg.grasp_depth and ws.entry_legal:
                close = True
                self.phase = "lift"
        if self.phase == "lift":
            close = True
            tz = g.z + 0.3
        tx = g.x + cfg.gain * (pred[0] - g.x)
        ty = g.y + cfg.gain * (pred[1] - g.y)
        if self.phase == "lift":
            tx, ty = g.x, g.y
        rel = point_in_frame(obj.center, (tx, ty, tz))
        return RobotAction(rel[0], rel[1], rel[2], theta, close).clipped()
