"""Yaw-only poses, frame transforms, oriented boxes and agent observations.

Everything here is a pure function over immutable values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .environment import WorldState

OBS_DIM = 31

# corner sign order: (-,-,-), (-,-,+), (-,+,-), ... , (+,+,+)
CORNER_SIGNS = np.array(
    [(sx, sy, sz) for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float
)


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.remainder(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    return a


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "yaw", wrap_angle(self.yaw))

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.yaw])


IDENTITY = Pose()


def compose(a: Pose, b: Pose) -> Pose:
    """Return a∘b, i.e. pose ``b`` given in frame ``a`` expressed in a's parent frame."""
    c, s = math.cos(a.yaw), math.sin(a.yaw)
    return Pose(
        a.x + c * b.x - s * b.y,
        a.y + s * b.x + c * b.y,
        a.z + b.z,
        a.yaw + b.yaw,
    )


def inverse(p: Pose) -> Pose:
    c, s = math.cos(p.yaw), math.sin(p.yaw)
    return Pose(-(c * p.x + s * p.y), -(-s * p.x + c * p.y), -p.z, -p.yaw)


def relative_to(frame: Pose, target: Pose) -> Pose:
    """Express ``target`` in ``frame`` (the agent-centric coordinate converter)."""
    return compose(inverse(frame), target)


def point_in_frame(frame: Pose, p: Sequence[float]) -> tuple[float, float, float]:
    """Coordinates of a world point in ``frame``."""
    c, s = math.cos(frame.yaw), math.sin(frame.yaw)
    dx, dy, dz = p[0] - frame.x, p[1] - frame.y, p[2] - frame.z
    return (c * dx + s * dy, -s * dx + c * dy, dz)


@dataclass(frozen=True)
class Obb:
    """Box with a world-aligned vertical axis, rotated by ``center.yaw``."""

    center: Pose
    half_extents: tuple[float, float, float]

    def __post_init__(self):
        he = tuple(float(h) for h in self.half_extents)
        if len(he) != 3 or not all(h > 0 for h in he):
            raise ValueError(f"half_extents must be three positive numbers, got {self.half_extents}")
        object.__setattr__(self, "half_extents", he)

    def corners(self) -> np.ndarray:
        """8x3 world-frame corners in the fixed sign order."""
        local = CORNER_SIGNS * np.asarray(self.half_extents)
        return _transform_points(self.center, local)

    @property
    def top_z(self) -> float:
        return self.center.z + self.half_extents[2]


def _transform_points(frame: Pose, pts: np.ndarray) -> np.ndarray:
    c, s = math.cos(frame.yaw), math.sin(frame.yaw)
    out = np.empty_like(pts)
    out[:, 0] = frame.x + c * pts[:, 0] - s * pts[:, 1]
    out[:, 1] = frame.y + s * pts[:, 0] + c * pts[:, 1]
    out[:, 2] = frame.z + pts[:, 2]
    return out


def _points_in_frame(frame: Pose, pts: np.ndarray) -> np.ndarray:
    c, s = math.cos(frame.yaw), math.sin(frame.yaw)
    d = pts - np.array([frame.x, frame.y, frame.z])
    out = np.empty_like(pts)
    out[:, 0] = c * d[:, 0] + s * d[:, 1]
    out[:, 1] = -s * d[:, 0] + c * d[:, 1]
    out[:, 2] = d[:, 2]
    return out


def obb_keypoints(obb: Obb, in_frame: Pose = IDENTITY) -> np.ndarray:
    """9x3 array: the 8 corners then the center, expressed in ``in_frame``."""
    world = np.vstack([obb.corners(), obb.center.position])
    return _points_in_frame(in_frame, world)


def contains(obb: Obb, p: Sequence[float], tol: float = 1e-12) -> bool:
    """Closed-box membership test (points on a face count as inside)."""
    u, v, w = point_in_frame(obb.center, p)
    hx, hy, hz = obb.half_extents
    return abs(u) <= hx + tol and abs(v) <= hy + tol and abs(w) <= hz + tol


def gripper_object_distance(gripper: Pose, obb: Obb) -> float:
    """Distance from the gripper center to the top-center of the box (d12)."""
    return math.sqrt(
        (gripper.x - obb.center.x) ** 2
        + (gripper.y - obb.center.y) ** 2
        + (gripper.z - obb.top_z) ** 2
    )


def robot_observation(world: WorldState) -> np.ndarray:
    ego = relative_to(world.robot_base, world.gripper).as_array()
    kp = obb_keypoints(world.object, world.gripper)
    return np.concatenate([ego, kp.ravel()])


def mover_observation(world: WorldState) -> np.ndarray:
    ego = relative_to(world.object.center, world.gripper).as_array()
    kp = obb_keypoints(world.object, world.object.center)
    return np.concatenate([ego, kp.ravel()])
