"""Scripted mover policies: the seven motion patterns.

Each pattern is a mover policy, emitting :class:`MoverAction` commands
through the same speed clamp as the learned adversary. The curve kinds
(line, sine, circle, arc, oval) steer the plate along a reference path
parametrized by arc length; the two random kinds generate their path on
the fly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .environment import MOVER_X, MOVER_Y, EnvConfig, MoverAction, WorldState

KINDS = ("line", "sine", "circle", "arc", "oval", "random_waypoint", "random_action")
TRAIN_KINDS = ("line", "sine", "circle")
TEST_KINDS = ("arc", "oval", "random_waypoint", "random_action")
CLOSED_KINDS = ("circle", "oval")

Area = tuple[tuple[float, float], tuple[float, float]]
MOVER_AREA: Area = (MOVER_X, MOVER_Y)

_RESOLUTION = 0.001  # reference polyline spacing, meters
_MIN_OPEN_LENGTH = 0.15


@dataclass(frozen=True)
class PatternRanges:
    sine_amplitude: tuple[float, float] = (0.05, 0.2)
    sine_omega: tuple[float, float] = (0.5, 2.0)  # rad per meter along the sine axis
    radius: tuple[float, float] = (0.05, 0.15)
    arc_span: tuple[float, float] = (math.pi / 2, 3 * math.pi / 2)
    oval_axes: tuple[float, float] = (0.05, 0.2)
    heading_jitter: float = 0.3  # rad/step, random_action
    train_rotation: tuple[float, float] = (-0.5, 0.5)  # constant yaw-rate command
    test_rotation_mean: tuple[float, float] = (-0.3, 0.3)
    test_rotation_std: float = 0.3


@dataclass(frozen=True)
class PatternSpec:
    kind: str
    params: dict = field(default_factory=dict)
    rotation_mode: str = "constant"
    rotation_mean: float = 0.0
    rotation_std: float = 0.0
    seed: int = 0

    @property
    def start(self) -> tuple[float, float]:
        return tuple(self.params["start"])


def _inside(p, area: Area, margin: float = 0.0) -> bool:
    (x0, x1), (y0, y1) = area
    return x0 + margin <= p[0] <= x1 - margin and y0 + margin <= p[1] <= y1 - margin


def _uniform_point(rng, area: Area, margin: float = 0.0) -> tuple[float, float]:
    (x0, x1), (y0, y1) = area
    return (float(rng.uniform(x0 + margin, x1 - margin)), float(rng.uniform(y0 + margin, y1 - margin)))


def _truncate_inside(pts: np.ndarray, area: Area) -> np.ndarray:
    (x0, x1), (y0, y1) = area
    ok = (pts[:, 0] >= x0) & (pts[:, 0] <= x1) & (pts[:, 1] >= y0) & (pts[:, 1] <= y1)
    n = len(pts) if ok.all() else int(np.argmin(ok))
    return pts[:n]


def _polyline_length(pts: np.ndarray) -> float:
    return float(np.sum(np.hypot(*np.diff(pts, axis=0).T))) if len(pts) > 1 else 0.0


def _line_points(start, heading, length=2.0):
    s = np.arange(0.0, length, _RESOLUTION)
    return np.column_stack([start[0] + s * math.cos(heading), start[1] + s * math.sin(heading)])


def _sine_points(start, heading, amplitude, omega, length=2.0):
    s = np.arange(0.0, length, _RESOLUTION)
    u, v = s, amplitude * np.sin(omega * s)
    c, sn = math.cos(heading), math.sin(heading)
    return np.column_stack([start[0] + c * u - sn * v, start[1] + sn * u + c * v])


def _ellipse_points(center, a, b, rot, phase, direction, span=2 * math.pi):
    n = max(int(span * max(a, b) / _RESOLUTION), 16)
    t = phase + direction * np.linspace(0.0, span, n + 1)
    u, v = a * np.cos(t), b * np.sin(t)
    c, s = math.cos(rot), math.sin(rot)
    return np.column_stack([center[0] + c * u - s * v, center[1] + s * u + c * v])


def sample_pattern(kind: str, rng: np.random.Generator, area: Area = MOVER_AREA,
                   ranges: PatternRanges = PatternRanges(), rotation_mode: Optional[str] = None) -> PatternSpec:
    """Draw one randomized pattern whose reference path stays inside ``area``."""
    if kind not in KINDS:
        raise ValueError(f"unknown pattern kind {kind!r}; expected one of {KINDS}")
    if rotation_mode is None:
        rotation_mode = "constant" if kind in TRAIN_KINDS else "gaussian"
    if rotation_mode == "constant":
        rot_mean, rot_std = float(rng.uniform(*ranges.train_rotation)), 0.0
    elif rotation_mode == "gaussian":
        rot_mean, rot_std = float(rng.uniform(*ranges.test_rotation_mean)), ranges.test_rotation_std
    else:
        raise ValueError(f"rotation_mode must be 'constant' or 'gaussian', got {rotation_mode!r}")
    seed = int(rng.integers(2**31))
    params: dict
    if kind in ("line", "sine"):
        for _ in range(1000):
            start = _uniform_point(rng, area)
            heading = float(rng.uniform(0.0, 2 * math.pi))
            if kind == "line":
                params = {"start": start, "heading": heading}
            else:
                params = {"start": start, "heading": heading,
                          "amplitude": float(rng.uniform(*ranges.sine_amplitude)),
                          "omega": float(rng.uniform(*ranges.sine_omega))}
            if _polyline_length(_truncate_inside(_curve_points(kind, params), area)) >= _MIN_OPEN_LENGTH:
                break
    elif kind in ("circle", "arc"):
        r = float(rng.uniform(*ranges.radius))
        center = _uniform_point(rng, area, margin=r)
        phase = float(rng.uniform(-math.pi, math.pi))
        direction = 1.0 if rng.random() < 0.5 else -1.0
        params = {"center": center, "radius": r, "phase": phase, "direction": direction}
        if kind == "arc":
            params["span"] = float(rng.uniform(*ranges.arc_span))
    elif kind == "oval":
        (x0, x1), (y0, y1) = area
        for _ in range(1000):
            a, b = (float(v) for v in rng.uniform(*ranges.oval_axes, size=2))
            rot = float(rng.uniform(0.0, math.pi))
            ex = math.sqrt((a * math.cos(rot)) ** 2 + (b * math.sin(rot)) ** 2)
            ey = math.sqrt((a * math.sin(rot)) ** 2 + (b * math.cos(rot)) ** 2)
            if 2 * ex < x1 - x0 and 2 * ey < y1 - y0:
                break
        center = (float(rng.uniform(x0 + ex, x1 - ex)), float(rng.uniform(y0 + ey, y1 - ey)))
        params = {"center": center, "a": a, "b": b, "rotation": rot,
                  "phase": float(rng.uniform(-math.pi, math.pi)),
                  "direction": 1.0 if rng.random() < 0.5 else -1.0}
    elif kind == "random_waypoint":
        params = {"start": _uniform_point(rng, area)}
    else:
        params = {"start": _uniform_point(rng, area), "heading": float(rng.uniform(0.0, 2 * math.pi))}
    if kind in ("circle", "arc", "oval"):
        params["start"] = tuple(float(v) for v in _curve_points(kind, params)[0])
    return PatternSpec(kind, params, rotation_mode, rot_mean, rot_std, seed)


def _curve_points(kind: str, p: dict) -> np.ndarray:
    if kind == "line":
        return _line_points(p["start"], p["heading"])
    if kind == "sine":
        return _sine_points(p["start"], p["heading"], p["amplitude"], p["omega"])
    if kind == "circle":
        return _ellipse_points(p["center"], p["radius"], p["radius"], 0.0, p["phase"], p["direction"])
    if kind == "arc":
        return _ellipse_points(p["center"], p["radius"], p["radius"], 0.0, p["phase"], p["direction"], p["span"])
    if kind == "oval":
        return _ellipse_points(p["center"], p["a"], p["b"], p["rotation"], p["phase"], p["direction"])
    raise ValueError(f"{kind} has no fixed reference curve")


def reference_path(spec: PatternSpec, area: Area = MOVER_AREA) -> tuple[np.ndarray, bool]:
    """Dense reference polyline and whether it is traversed cyclically."""
    pts = _curve_points(spec.kind, spec.params)
    if spec.kind in ("line", "sine"):
        pts = _truncate_inside(pts, area)
    else:
        (x0, x1), (y0, y1) = area
        pts = np.column_stack([np.clip(pts[:, 0], x0, x1), np.clip(pts[:, 1], y0, y1)])
    return pts, spec.kind in CLOSED_KINDS


class _ArcLengthPath:
    def __init__(self, pts: np.ndarray, closed: bool):
        self.pts = pts
        self.cum = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))])
        self.length = float(self.cum[-1])
        self.closed = closed

    def at(self, s: float) -> np.ndarray:
        L = self.length
        if L == 0.0:
            return self.pts[0].copy()
        if self.closed:
            s = s % L
        else:
            s = s % (2 * L)
            if s > L:
                s = 2 * L - s  # back and forth
        return np.array([np.interp(s, self.cum, self.pts[:, 0]), np.interp(s, self.cum, self.pts[:, 1])])


class PatternMover:
    """Per-episode scripted mover. Not shareable between episodes."""

    def __init__(self, spec: PatternSpec, env_cfg: EnvConfig, speed_ratio: float,
                 area: Area = MOVER_AREA, ranges: PatternRanges = PatternRanges()):
        self.spec = spec
        self.area = area
        self.ranges = ranges
        self.step_length = speed_ratio * env_cfg.robot_speed * env_cfg.dt
        self.rng = np.random.default_rng(spec.seed)
        self.path = _ArcLengthPath(*reference_path(spec, area)) if spec.kind not in (
            "random_waypoint", "random_action") else None
        self.waypoint = _uniform_point(self.rng, area) if spec.kind == "random_waypoint" else None
        self.heading = spec.params.get("heading", 0.0)

    def reference(self, t: int) -> Optional[np.ndarray]:
        return None if self.path is None else self.path.at(t * self.step_length)

    def _rotation(self) -> float:
        if self.spec.rotation_mode == "constant":
            return self.spec.rotation_mean
        return float(np.clip(self.rng.normal(self.spec.rotation_mean, self.spec.rotation_std), -1.0, 1.0))

    def act(self, ws: WorldState, t: int) -> MoverAction:
        plate = np.asarray(ws.plate_center, dtype=float)
        h = self.step_length
        if self.spec.kind == "random_waypoint":
            if math.dist(plate, self.waypoint) <= h:
                self.waypoint = _uniform_point(self.rng, self.area)
            cmd = (np.asarray(self.waypoint) - plate) / h
        elif self.spec.kind == "random_action":
            self.heading += float(self.rng.uniform(-self.ranges.heading_jitter, self.ranges.heading_jitter))
            (x0, x1), (y0, y1) = self.area
            nxt = plate + h * np.array([math.cos(self.heading), math.sin(self.heading)])
            if not x0 <= nxt[0] <= x1:
                self.heading = math.pi - self.heading
            if not y0 <= nxt[1] <= y1:
                self.heading = -self.heading
            cmd = np.array([math.cos(self.heading), math.sin(self.heading)])
        else:
            cmd = (self.path.at((t + 1) * h) - plate) / h
        n = float(np.hypot(*cmd))
        if n > 1.0:
            cmd = cmd / n
        return MoverAction(float(cmd[0]), float(cmd[1]), self._rotation())


def pattern_action(mover: PatternMover, ws: WorldState, t: int) -> MoverAction:
    return mover.act(ws, t)
