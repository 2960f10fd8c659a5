"""Kinematic move-and-grasp simulator.

A point gripper with a yaw and a parallel-jaw opening chases a box that
rides on a plate steered by the mover. Both agents act simultaneously;
there is no rigid-body physics, only speed limits, workspace clamps and a
push rule for lateral contact.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .geometry import (
    Obb,
    Pose,
    compose,
    contains,
    gripper_object_distance,
    point_in_frame,
    relative_to,
    wrap_angle,
)

ROBOT_X = (0.2, 0.6)
ROBOT_Y = (-0.5, 0.5)
ROBOT_Z = (0.055, 0.3)
MOVER_X = (0.25, 0.55)
MOVER_Y = (-0.45, 0.45)

GRASPED, OUT_OF_PLATE, TIMEOUT = "grasped", "out_of_plate", "timeout"
TERMINAL_CAUSES = (GRASPED, OUT_OF_PLATE, TIMEOUT)

# object is nudged this far past the contact face so the gripper ends outside
_PUSH_CLEARANCE = 1e-6


class ContractViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class ObjectTemplate:
    name: str
    half_extents: tuple[float, float, float]


def object_catalog() -> list[ObjectTemplate]:
    """Six box stand-ins for the benchmark objects.

    Dimensions are approximate and chosen by hand; only their relation to
    the 0.08 m gripper opening matters.
    """
    return [
        ObjectTemplate("rubiks_cube", (0.0285, 0.0285, 0.0285)),
        ObjectTemplate("potted_meat_can", (0.05, 0.03, 0.042)),
        ObjectTemplate("tomato_soup_can", (0.033, 0.033, 0.0505)),
        ObjectTemplate("sugar_box", (0.045, 0.019, 0.0875)),
        ObjectTemplate("mustard_bottle", (0.0475, 0.029, 0.095)),
        ObjectTemplate("power_drill", (0.09, 0.03, 0.09)),
    ]


def catalog_lookup(name: str) -> ObjectTemplate:
    for t in object_catalog():
        if t.name == name:
            return t
    raise KeyError(f"unknown object {name!r}")


def smallest_object() -> ObjectTemplate:
    return min(object_catalog(), key=lambda t: float(np.prod(t.half_extents)))


@dataclass(frozen=True)
class EnvConfig:
    dt: float = 0.1
    robot_speed: float = 0.15
    robot_yaw_rate: float = 0.75
    speed_ratio: float = 0.5
    plate_radius: float = 0.1
    plate_height: float = 0.02
    lift_threshold: float = 0.1
    max_steps: int = 300
    gripper_max_opening: float = 0.08
    object: ObjectTemplate = field(default_factory=lambda: object_catalog()[0])

    def __post_init__(self):
        for name in ("dt", "robot_speed", "robot_yaw_rate", "speed_ratio", "plate_radius",
                     "lift_threshold", "max_steps", "gripper_max_opening"):
            if not getattr(self, name) > 0:
                raise ValueError(f"env.{name} must be positive, got {getattr(self, name)}")
        if self.plate_height < 0:
            raise ValueError("env.plate_height must be non-negative")
        if self.speed_ratio > 1:
            raise ValueError(f"env.speed_ratio must be <= 1, got {self.speed_ratio}")
        if not all(h > 0 for h in self.object.half_extents):
            raise ValueError(f"object {self.object.name} has non-positive extents")

    @property
    def step_length(self) -> float:
        return self.robot_speed * self.dt


@dataclass(frozen=True)
class RobotAction:
    """Gripper target relative to the object; ``g1`` True means close."""

    x1: float = 0.0
    y1: float = 0.0
    z1: float = 0.0
    theta1: float = 0.0
    g1: bool = False

    def clipped(self) -> RobotAction:
        return RobotAction(
            float(np.clip(self.x1, -0.3, 0.3)),
            float(np.clip(self.y1, -0.3, 0.3)),
            float(np.clip(self.z1, 0.0, 0.3)),
            float(np.clip(self.theta1, -math.pi / 2, math.pi / 2)),
            bool(self.g1),
        )


@dataclass(frozen=True)
class MoverAction:
    x2: float = 0.0
    y2: float = 0.0
    theta2: float = 0.0

    def clipped(self) -> MoverAction:
        return MoverAction(*(float(np.clip(v, -1.0, 1.0)) for v in (self.x2, self.y2, self.theta2)))


@dataclass(frozen=True)
class StepEvents:
    d12: float
    inside_bbox: bool = False
    collided: bool = False
    grasped_now: bool = False
    out_of_plate: bool = False
    timeout: bool = False

    @property
    def terminal(self) -> bool:
        return self.grasped_now or self.out_of_plate or self.timeout


@dataclass(frozen=True)
class WorldState:
    robot_base: Pose
    gripper: Pose
    gripper_closed: bool
    object: Obb
    object_offset: tuple[float, float]  # plate frame
    plate_center: tuple[float, float]
    plate_yaw: float
    attached: bool
    initial_object_z: float
    step_index: int
    terminal: Optional[str] = None
    speed_ratio: float = 0.5
    object_name: str = ""
    object_yaw_offset: float = 0.0
    grasp_offset: Optional[Pose] = None  # object pose in gripper frame while attached
    entry_legal: bool = False  # gripper is inside the box after entering through the top


def _clamp(v: float, lo_hi: tuple[float, float]) -> float:
    return min(max(v, lo_hi[0]), lo_hi[1])


def object_on_plate(plate_center, plate_yaw, offset, yaw_offset, half_extents, plate_height) -> Obb:
    c, s = math.cos(plate_yaw), math.sin(plate_yaw)
    x = plate_center[0] + c * offset[0] - s * offset[1]
    y = plate_center[1] + s * offset[0] + c * offset[1]
    return Obb(Pose(x, y, plate_height + half_extents[2], plate_yaw + yaw_offset), half_extents)


def reset(cfg: EnvConfig, seed, plate_center: Optional[tuple[float, float]] = None,
          speed_ratio: Optional[float] = None) -> WorldState:
    """Fresh episode. ``seed`` may be an int, a SeedSequence or a Generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    px, py = rng.uniform(MOVER_X[0], MOVER_X[1]), rng.uniform(MOVER_Y[0], MOVER_Y[1])
    plate_yaw = rng.uniform(-math.pi, math.pi)
    gx, gy = rng.uniform(*ROBOT_X), rng.uniform(*ROBOT_Y)
    gyaw = rng.uniform(-math.pi, math.pi)
    if plate_center is not None:
        px, py = _clamp(plate_center[0], MOVER_X), _clamp(plate_center[1], MOVER_Y)
    sr = cfg.speed_ratio if speed_ratio is None else float(speed_ratio)
    if not 0 < sr <= 1:
        raise ValueError(f"speed_ratio must lie in (0, 1], got {sr}")
    he = cfg.object.half_extents
    obj = object_on_plate((px, py), plate_yaw, (0.0, 0.0), 0.0, he, cfg.plate_height)
    return WorldState(
        robot_base=Pose(),
        gripper=Pose(gx, gy, ROBOT_Z[1], gyaw),
        gripper_closed=False,
        object=obj,
        object_offset=(0.0, 0.0),
        plate_center=(px, py),
        plate_yaw=wrap_angle(plate_yaw),
        attached=False,
        initial_object_z=obj.center.z,
        step_index=0,
        speed_ratio=sr,
        object_name=cfg.object.name,
    )


def closing_extent(gripper: Pose, obb: Obb) -> float:
    """Horizontal width of the box measured along the gripper's closing axis."""
    rel = obb.center.yaw - gripper.yaw
    hx, hy, _ = obb.half_extents
    return 2.0 * (hx * abs(math.sin(rel)) + hy * abs(math.cos(rel)))


def detect_grasp(ws: WorldState, a1: RobotAction, cfg: EnvConfig) -> bool:
    """True when this command closes the jaws around the object and it attaches."""
    if ws.attached or ws.gripper_closed or not a1.g1:
        return False
    if not ws.entry_legal or not contains(ws.object, ws.gripper.position):
        return False
    return closing_extent(ws.gripper, ws.object) <= cfg.gripper_max_opening


def lift_success(ws: WorldState, cfg: EnvConfig) -> bool:
    return ws.attached and ws.object.center.z >= ws.initial_object_z + cfg.lift_threshold - 1e-12


def classify_entry(p0, p1, half_extents) -> Optional[str]:
    """How the segment p0->p1 (box frame) enters the box, if it ends inside.

    Returns None when no entry happens, "top" for a descent through the top
    face, "inside" when p0 was already inside, else "side" (or "bottom").
    """
    hx, hy, hz = half_extents
    h = (hx, hy, hz)
    inside1 = all(abs(p1[i]) <= h[i] for i in range(3))
    if not inside1:
        return None
    if all(abs(p0[i]) <= h[i] for i in range(3)):
        return "inside"
    t_enter, axis = 0.0, -1
    for i in range(3):
        d = p1[i] - p0[i]
        if d == 0.0:
            continue
        t_a, t_b = (-h[i] - p0[i]) / d, (h[i] - p0[i]) / d
        t_lo = min(t_a, t_b)
        if t_lo > t_enter:
            t_enter, axis = t_lo, i
    if axis == 2:
        return "top" if p1[2] < p0[2] else "bottom"
    return "side"


def detect_collision(prev_ws: WorldState, ws: WorldState) -> tuple[bool, Optional[str], tuple[float, float]]:
    """Lateral entry check on the gripper path relative to the (moving) box.

    Returns (collided, entry kind, push vector in the world frame).
    """
    if prev_ws.attached or ws.attached:
        return False, None, (0.0, 0.0)
    p0 = point_in_frame(prev_ws.object.center, prev_ws.gripper.position)
    p1 = point_in_frame(ws.object.center, ws.gripper.position)
    kind = classify_entry(p0, p1, ws.object.half_extents)
    if kind not in ("side", "bottom"):
        return False, kind, (0.0, 0.0)
    if kind == "bottom":
        return True, kind, (0.0, 0.0)
    hx, hy, _ = ws.object.half_extents
    # contact face: whichever lateral slab the segment crossed last
    du, dv = p1[0] - p0[0], p1[1] - p0[1]
    tu = ((hx if p0[0] > 0 else -hx) - p0[0]) / du if abs(p0[0]) > hx and du != 0 else -math.inf
    tv = ((hy if p0[1] > 0 else -hy) - p0[1]) / dv if abs(p0[1]) > hy and dv != 0 else -math.inf
    if tu >= tv:
        sign = 1.0 if p0[0] > 0 else -1.0
        push_local = (-sign * (hx - sign * p1[0] + _PUSH_CLEARANCE), 0.0)
    else:
        sign = 1.0 if p0[1] > 0 else -1.0
        push_local = (0.0, -sign * (hy - sign * p1[1] + _PUSH_CLEARANCE))
    c, s = math.cos(ws.object.center.yaw), math.sin(ws.object.center.yaw)
    push = (c * push_local[0] - s * push_local[1], s * push_local[0] + c * push_local[1])
    return True, kind, push


def _move_toward(cur: float, target: float, limit: float) -> float:
    d = target - cur
    return target if abs(d) <= limit else cur + math.copysign(limit, d)


def step(ws: WorldState, a1: RobotAction, a2: MoverAction, cfg: EnvConfig) -> tuple[WorldState, StepEvents]:
    if ws.terminal is not None:
        raise ContractViolation(f"step() called on terminal state ({ws.terminal})")
    a1, a2 = a1.clipped(), a2.clipped()
    he = ws.object.half_extents
    obj_before = ws.object

    # jaws act at the current gripper location, before anything moves
    attached, grasp_offset = ws.attached, ws.grasp_offset
    offset, yaw_offset = ws.object_offset, ws.object_yaw_offset
    released = False
    if detect_grasp(ws, a1, cfg):
        attached, grasp_offset = True, relative_to(ws.gripper, ws.object.center)
    elif attached and not a1.g1:
        attached, grasp_offset, released = False, None, True
        rel = point_in_frame(Pose(*ws.plate_center, 0.0, ws.plate_yaw), ws.object.center.position)
        offset = (rel[0], rel[1])
        yaw_offset = wrap_angle(ws.object.center.yaw - ws.plate_yaw)

    # mover
    vm_step = ws.speed_ratio * cfg.robot_speed * cfg.dt
    dx, dy = a2.x2 * vm_step, a2.y2 * vm_step
    n = math.hypot(dx, dy)
    if n > vm_step:
        dx, dy = dx * vm_step / n, dy * vm_step / n
    plate_center = (_clamp(ws.plate_center[0] + dx, MOVER_X), _clamp(ws.plate_center[1] + dy, MOVER_Y))
    plate_yaw = wrap_angle(ws.plate_yaw + a2.theta2 * ws.speed_ratio * cfg.robot_yaw_rate * cfg.dt)

    # robot: target relative to the object pose it observed
    oc = obj_before.center
    c, s = math.cos(oc.yaw), math.sin(oc.yaw)
    tx, ty, tz = oc.x + c * a1.x1 - s * a1.y1, oc.y + s * a1.x1 + c * a1.y1, oc.z + a1.z1
    g = ws.gripper
    ddx, ddy, ddz = tx - g.x, ty - g.y, tz - g.z
    dist = math.sqrt(ddx * ddx + ddy * ddy + ddz * ddz)
    lim = cfg.robot_speed * cfg.dt
    if dist > lim:
        k = lim / dist
        ddx, ddy, ddz = ddx * k, ddy * k, ddz * k
    yaw_err = wrap_angle(oc.yaw + a1.theta1 - g.yaw)
    dyaw = max(-cfg.robot_yaw_rate * cfg.dt, min(cfg.robot_yaw_rate * cfg.dt, yaw_err))
    gripper = Pose(
        _clamp(g.x + ddx, ROBOT_X), _clamp(g.y + ddy, ROBOT_Y), _clamp(g.z + ddz, ROBOT_Z), g.yaw + dyaw
    )

    if attached:
        obj = Obb(compose(gripper, grasp_offset), he)
    else:
        obj = object_on_plate(plate_center, plate_yaw, offset, yaw_offset, he, cfg.plate_height)

    new = replace(
        ws,
        gripper=gripper,
        gripper_closed=bool(a1.g1),
        object=obj,
        object_offset=offset,
        object_yaw_offset=yaw_offset,
        plate_center=plate_center,
        plate_yaw=plate_yaw,
        attached=attached,
        grasp_offset=grasp_offset,
        step_index=ws.step_index + 1,
    )

    # events: collision, grasp, lift, out-of-plate, timeout
    collided, kind, push = detect_collision(ws, new) if not released else (False, None, (0.0, 0.0))
    if collided and push != (0.0, 0.0):
        cp, sp = math.cos(plate_yaw), math.sin(plate_yaw)
        offset = (offset[0] + cp * push[0] + sp * push[1], offset[1] - sp * push[0] + cp * push[1])
        obj = object_on_plate(plate_center, plate_yaw, offset, yaw_offset, he, cfg.plate_height)
        new = replace(new, object=obj, object_offset=offset)
    if attached:
        entry_legal = True
    elif kind == "top":
        entry_legal = True
    elif kind == "inside":
        entry_legal = ws.entry_legal or released
    else:
        entry_legal = False
    new = replace(new, entry_legal=entry_legal)

    grasped = lift_success(new, cfg)
    out = (not attached) and math.hypot(*offset) > cfg.plate_radius
    timeout = (not grasped and not out) and new.step_index >= cfg.max_steps
    terminal = GRASPED if grasped else OUT_OF_PLATE if out else TIMEOUT if timeout else None
    new = replace(new, terminal=terminal)
    ev = StepEvents(
        d12=gripper_object_distance(new.gripper, new.object),
        inside_bbox=contains(new.object, new.gripper.position),
        collided=collided,
        grasped_now=grasped,
        out_of_plate=out,
        timeout=timeout,
    )
    return new, ev


def hold_action(ws: WorldState) -> RobotAction:
    """Robot command that keeps the gripper where it is (within action bounds)."""
    rel = point_in_frame(ws.object.center, ws.gripper.position)
    return RobotAction(rel[0], rel[1], rel[2], wrap_angle(ws.gripper.yaw - ws.object.center.yaw),
                       ws.gripper_closed).clipped()


class Env:
    """Stateful wrapper around :func:`reset` / :func:`step` for rollouts."""

    def __init__(self, cfg: EnvConfig):
        self.cfg = cfg
        self.state: Optional[WorldState] = None

    def reset(self, seed, **kw) -> WorldState:
        self.state = reset(self.cfg, seed, **kw)
        return self.state

    def step(self, a1: RobotAction, a2: MoverAction) -> tuple[WorldState, StepEvents]:
        self.state, ev = step(self.state, a1, a2, self.cfg)
        return self.state, ev


TRAJECTORY_COLUMNS = [
    "step_index",
    "gripper_x", "gripper_y", "gripper_z", "gripper_yaw",
    "object_x", "object_y", "object_z", "object_yaw",
    "plate_x", "plate_y",
    "inside_bbox", "collided", "grasped", "out_of_plate", "timeout", "d12",
]


def trajectory_row(ws: WorldState, ev: Optional[StepEvents]) -> list:
    g, o = ws.gripper, ws.object.center
    if ev is None:
        ev = StepEvents(d12=gripper_object_distance(g, ws.object),
                        inside_bbox=contains(ws.object, g.position))
    return [
        ws.step_index, g.x, g.y, g.z, g.yaw, o.x, o.y, o.z, o.yaw, *ws.plate_center,
        int(ev.inside_bbox), int(ev.collided), int(ev.grasped_now), int(ev.out_of_plate),
        int(ev.timeout), ev.d12,
    ]


def write_trajectory(path, rows: Iterable[list], extra_columns: Iterable[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_COLUMNS + list(extra_columns))
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return path


def read_trajectory(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]
