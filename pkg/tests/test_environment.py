import math
from dataclasses import replace

import numpy as np
import pytest

from movegrasp.environment import (
    GRASPED,
    MOVER_X,
    MOVER_Y,
    OUT_OF_PLATE,
    ROBOT_X,
    ROBOT_Y,
    ROBOT_Z,
    TIMEOUT,
    ContractViolation,
    EnvConfig,
    MoverAction,
    ObjectTemplate,
    RobotAction,
    catalog_lookup,
    closing_extent,
    detect_grasp,
    hold_action,
    object_catalog,
    object_on_plate,
    read_trajectory,
    reset,
    step,
    trajectory_row,
    write_trajectory,
)
from movegrasp.geometry import Pose, contains, gripper_object_distance

STILL = MoverAction(0.0, 0.0, 0.0)


def above(ws, height, yaw=0.0, close=False):
    """Command that targets a point ``height`` above the object center."""
    return RobotAction(0.0, 0.0, height, yaw, close)


def descend_close_lift(ws, cfg, horizon=200):
    """Scripted oracle: hover, drop through the top face, close, lift."""
    top = ws.object.half_extents[2]
    phase = "hover"
    ev = None
    while ws.terminal is None:
        g, o = ws.gripper, ws.object
        horiz = math.hypot(g.x - o.center.x, g.y - o.center.y)
        aligned = abs(math.remainder(g.yaw - o.center.yaw, 2 * math.pi)) < 1e-9
        if phase == "hover" and horiz < 1e-9 and abs(g.z - (o.top_z + 0.03)) < 1e-9 and aligned:
            phase = "descend"
        if phase == "descend" and contains(o, g.position) and g.z <= o.top_z - 0.01:
            phase = "close"
        if phase == "hover":
            a = above(ws, top + 0.03)
        elif phase == "descend":
            a = above(ws, top - 0.015)
        else:
            a = above(ws, 0.3, close=True)
        ws, ev = step(ws, a, STILL, cfg)
    return ws, ev


def test_reset_is_deterministic():
    cfg = EnvConfig()
    assert reset(cfg, 11) == reset(cfg, 11)


def test_reset_ranges():
    cfg = EnvConfig()
    for s in range(10_000):
        ws = reset(cfg, s)
        x, y = ws.plate_center
        assert MOVER_X[0] <= x <= MOVER_X[1] and MOVER_Y[0] <= y <= MOVER_Y[1]
        assert ws.gripper.z == ROBOT_Z[1] and not ws.gripper_closed and not ws.attached
        assert gripper_object_distance(ws.gripper, ws.object) > 0


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        EnvConfig(speed_ratio=1.5)
    with pytest.raises(ValueError):
        EnvConfig(dt=0.0)


def test_hold_is_a_fixed_point():
    cfg = EnvConfig()
    ws = reset(cfg, 3)
    ws = replace(ws, gripper=replace(ws.gripper, yaw=ws.object.center.yaw + 0.3))  # holdable yaw
    nxt, _ = step(ws, hold_action(ws), STILL, cfg)
    assert replace(nxt, step_index=ws.step_index) == ws
    assert nxt.step_index == 1


def test_robot_speed_limit():
    cfg = EnvConfig()
    ws = reset(cfg, 4)
    ws = replace(ws, gripper=Pose(0.4, 0.0, 0.2, 0.0))
    ws = replace(ws, object=object_on_plate((0.4, 0.1), 0.0, (0, 0), 0.0, ws.object.half_extents, cfg.plate_height),
                 plate_center=(0.4, 0.1), plate_yaw=0.0)
    a = RobotAction(0.0, 0.0, 0.2 - ws.object.center.z, 0.0, False)  # target 0.10 m away in +y
    nxt, _ = step(ws, a, STILL, cfg)
    assert math.dist(nxt.gripper.position, ws.gripper.position) == pytest.approx(0.015, abs=1e-12)
    assert nxt.gripper.y - ws.gripper.y == pytest.approx(0.015, abs=1e-12)


def test_mover_speed_scales_with_ratio():
    cfg = EnvConfig(speed_ratio=0.5)
    ws = reset(cfg, 5, plate_center=(0.4, 0.0))
    nxt, _ = step(ws, hold_action(ws), MoverAction(1.0, 0.0, 0.0), cfg)
    assert nxt.plate_center[0] - 0.4 == pytest.approx(0.0075, abs=1e-12)
    assert nxt.plate_center[1] == pytest.approx(0.0, abs=1e-12)


def test_stepping_terminal_state_is_rejected():
    cfg = EnvConfig()
    ws = replace(reset(cfg, 0), terminal=TIMEOUT)
    with pytest.raises(ContractViolation):
        step(ws, hold_action(ws), STILL, cfg)


def test_catalog():
    cat = object_catalog()
    assert len(cat) == 6 and len({t.half_extents for t in cat}) == 6
    assert all(h > 0 for t in cat for h in t.half_extents)
    assert any(2 * max(t.half_extents[:2]) > 0.08 for t in cat)
    drill = catalog_lookup("power_drill")
    assert [2 * h <= 0.08 for h in drill.half_extents[:2]].count(True) == 1
    with pytest.raises(KeyError):
        catalog_lookup("anvil")


def placed(cfg, he, gripper, yaw=0.0):
    ws = reset(cfg, 0, plate_center=(0.4, 0.0))
    obj = object_on_plate((0.4, 0.0), yaw, (0, 0), 0.0, he, cfg.plate_height)
    return replace(ws, object=obj, plate_yaw=yaw, gripper=gripper, entry_legal=True)


def test_grasp_width_rule():
    cfg = EnvConfig()
    narrow = placed(cfg, (0.05, 0.03, 0.04), Pose(0.4, 0.0, 0.07, 0.0))
    assert closing_extent(narrow.gripper, narrow.object) == pytest.approx(0.06)
    assert detect_grasp(narrow, above(narrow, 0.03, close=True), cfg)
    wide = placed(cfg, (0.02, 0.06, 0.04), Pose(0.4, 0.0, 0.07, 0.0))
    assert closing_extent(wide.gripper, wide.object) == pytest.approx(0.12)
    assert not detect_grasp(wide, above(wide, 0.03, close=True), cfg)


def test_grasp_needs_top_entry():
    cfg = EnvConfig()
    ws = replace(placed(cfg, (0.03, 0.03, 0.03), Pose(0.4, 0.0, 0.06, 0.0)), entry_legal=False)
    assert not detect_grasp(ws, above(ws, 0.0, close=True), cfg)


def test_vertical_descent_is_not_a_collision():
    cfg = EnvConfig()
    ws = placed(cfg, (0.03, 0.03, 0.03), Pose(0.4, 0.0, 0.09, 0.0))
    ws = replace(ws, entry_legal=False)
    for _ in range(3):
        ws, ev = step(ws, above(ws, 0.0), STILL, cfg)
        assert not ev.collided
    assert ev.inside_bbox and ws.entry_legal


def test_side_entry_collides_and_pushes():
    cfg = EnvConfig()
    ws = placed(cfg, (0.03, 0.03, 0.03), Pose(0.36, 0.0, 0.05, 0.0))
    ws, ev = step(ws, RobotAction(0.0, 0.0, 0.0, 0.0, False), STILL, cfg)
    assert ev.collided and not ws.entry_legal
    assert ws.object_offset[0] > 0  # pushed away from the gripper
    assert not contains(ws.object, ws.gripper.position)


def test_accumulated_push_drops_object():
    cfg = EnvConfig()
    ws = placed(cfg, (0.03, 0.03, 0.03), Pose(0.36, 0.0, 0.05, 0.0))
    ws = replace(ws, object_offset=(0.095, 0.0),
                 object=object_on_plate((0.4, 0.0), 0.0, (0.095, 0.0), 0.0, (0.03, 0.03, 0.03), cfg.plate_height),
                 gripper=Pose(0.4 + 0.095 - 0.04, 0.0, 0.05, 0.0))
    ws, ev = step(ws, RobotAction(0.0, 0.0, 0.0, 0.0, False), STILL, cfg)
    assert ev.collided and ev.out_of_plate and ws.terminal == OUT_OF_PLATE
    assert math.hypot(*ws.object_offset) > cfg.plate_radius


def test_lift_reaches_success():
    cfg = EnvConfig(object=ObjectTemplate("box", (0.03, 0.03, 0.03)))
    ws = reset(cfg, 1, plate_center=(0.4, 0.0))
    ws, ev = descend_close_lift(ws, cfg)
    assert ws.terminal == GRASPED and ev.grasped_now
    assert ws.object.center.z >= ws.initial_object_z + cfg.lift_threshold - 1e-12


def test_scripted_oracle_static_object():
    cfg = EnvConfig(object=catalog_lookup("rubiks_cube"))
    wins = 0
    for s in range(50):
        ws, _ = descend_close_lift(reset(cfg, s), cfg)
        wins += ws.terminal == GRASPED
    assert wins == 50


def check_invariants(prev, ws, ev, cfg):
    g = ws.gripper
    assert ROBOT_X[0] <= g.x <= ROBOT_X[1] and ROBOT_Y[0] <= g.y <= ROBOT_Y[1] and ROBOT_Z[0] <= g.z <= ROBOT_Z[1]
    px, py = ws.plate_center
    assert MOVER_X[0] <= px <= MOVER_X[1] and MOVER_Y[0] <= py <= MOVER_Y[1]
    if ws.terminal != OUT_OF_PLATE:
        assert math.hypot(*ws.object_offset) <= cfg.plate_radius + 1e-12
    assert ws.step_index <= cfg.max_steps
    assert math.dist(g.position, prev.gripper.position) <= cfg.robot_speed * cfg.dt + 1e-12
    assert math.dist(ws.plate_center, prev.plate_center) <= ws.speed_ratio * cfg.robot_speed * cfg.dt + 1e-12
    flags = [ev.grasped_now, ev.out_of_plate, ev.timeout]
    assert sum(flags) <= 1
    assert (ws.terminal is not None) == any(flags)
    if ev.grasped_now:
        assert ws.terminal == GRASPED and not ev.out_of_plate


def random_actions(rng, ws):
    if ws.attached:  # keep hold and lift
        return RobotAction(0.0, 0.0, 0.3, 0.0, bool(rng.random() < 0.97))
    if rng.random() < 0.5:  # bias toward the object so grasps and pushes happen
        return RobotAction(*rng.normal(0, 0.03, 2), float(rng.uniform(0, 0.08)),
                           float(rng.uniform(-1.5, 1.5)), bool(rng.random() < 0.5))
    return RobotAction(*rng.uniform(-0.4, 0.4, 2), float(rng.uniform(-0.1, 0.4)),
                       float(rng.uniform(-2, 2)), bool(rng.random() < 0.5))


def test_fuzz_invariants():
    rng = np.random.default_rng(0)
    causes = {GRASPED: 0, OUT_OF_PLATE: 0, TIMEOUT: 0}
    n = 0
    while n < 100_000:
        obj = object_catalog()[int(rng.integers(6))]
        cfg = EnvConfig(object=obj, speed_ratio=float(rng.uniform(0.05, 1.0)), max_steps=int(rng.integers(20, 300)))
        ws = reset(cfg, rng)
        while ws.terminal is None:
            a2 = MoverAction(*rng.uniform(-1.5, 1.5, 3))
            nxt, ev = step(ws, random_actions(rng, ws), a2, cfg)
            check_invariants(ws, nxt, ev, cfg)
            ws = nxt
            n += 1
        causes[ws.terminal] += 1
        with pytest.raises(ContractViolation):
            step(ws, hold_action(ws), STILL, cfg)
    assert all(v > 0 for v in causes.values()), causes


def test_trajectory_round_trip(tmp_path):
    cfg = EnvConfig()
    ws = reset(cfg, 2)
    rows = [trajectory_row(ws, None)]
    for _ in range(5):
        ws, ev = step(ws, above(ws, 0.1), MoverAction(0.3, -0.2, 0.1), cfg)
        rows.append(trajectory_row(ws, ev))
    back = read_trajectory(write_trajectory(tmp_path / "t.csv", rows))
    assert len(back) == 6
    assert [list(r.values()) for r in back] == [[float(v) for v in r] for r in rows]
