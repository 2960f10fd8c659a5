import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from movegrasp.environment import ROBOT_X, ROBOT_Y, ROBOT_Z, StepEvents
from movegrasp.rewards import (
    RewardConfig,
    mover_reward,
    robot_reward,
    vanilla_robot_reward,
    zero_sum_mover_reward,
)

CFG = RewardConfig()
D_MAX = math.dist((ROBOT_X[0], ROBOT_Y[0], ROBOT_Z[0]), (ROBOT_X[1], ROBOT_Y[1], ROBOT_Z[1]))


def ev(**kw):
    return StepEvents(**{"d12": 0.1, **kw})


@st.composite
def events(draw):
    d12 = draw(st.floats(0.0, D_MAX, allow_nan=False))
    cause = draw(st.sampled_from([None, "grasped", "out_of_plate", "timeout"]))
    return StepEvents(
        d12=d12,
        inside_bbox=draw(st.booleans()),
        collided=draw(st.booleans()) and cause != "grasped",
        grasped_now=cause == "grasped",
        out_of_plate=cause == "out_of_plate",
        timeout=cause == "timeout",
    )


def test_terminal_values():
    assert robot_reward(ev(grasped_now=True, inside_bbox=True), CFG) == 10
    assert robot_reward(ev(out_of_plate=True, collided=True), CFG) == -0.1
    assert vanilla_robot_reward(ev(grasped_now=True), CFG) == 10


@pytest.mark.parametrize("event, expected", [
    (ev(inside_bbox=True), 0.095),
    (ev(d12=0.2), -0.205),
    (ev(d12=0.2, collided=True), -0.305),
])
def test_robot_reward_non_terminal(event, expected):
    assert abs(robot_reward(event, CFG) - expected) <= 1e-12


def test_collision_switch_removes_penalty():
    assert robot_reward(ev(d12=0.2, collided=True), CFG, collision_check=False) == pytest.approx(-0.205, abs=1e-12)


@pytest.mark.parametrize("d12, expected", [(0.5, 0.5), (0.15, -0.05), (0.2, 0.2)])
def test_mover_reward(d12, expected):
    assert abs(mover_reward(ev(d12=d12), CFG) - expected) <= 1e-12


def test_vanilla_ignores_box_bonus():
    assert vanilla_robot_reward(ev(d12=0.3), CFG) == -0.3
    assert vanilla_robot_reward(ev(d12=0.02, inside_bbox=True), CFG) == -0.02
    assert zero_sum_mover_reward(ev(grasped_now=True), CFG) == -10


@given(events())
def test_zero_sum_and_bounds(e):
    assert vanilla_robot_reward(e, CFG) + zero_sum_mover_reward(e, CFG) == 0
    if not (e.grasped_now or e.out_of_plate):
        assert -D_MAX - 0.105 - 1e-12 <= robot_reward(e, CFG) <= 0.095 + 1e-12


def test_case_exclusivity_fuzz():
    rng = np.random.default_rng(0)
    for _ in range(100_000):
        d12 = float(rng.uniform(0, D_MAX))
        cause = rng.integers(4)
        e = StepEvents(d12, bool(rng.integers(2)), bool(rng.integers(2)) and cause != 1,
                       cause == 1, cause == 2, cause == 3)
        r = robot_reward(e, CFG)
        branches = [e.grasped_now, e.out_of_plate, not (e.grasped_now or e.out_of_plate)]
        assert sum(branches) == 1
        if e.grasped_now:
            assert r == CFG.R_s
        elif e.out_of_plate:
            assert r == CFG.P_out
        else:
            base = CFG.R_b if e.inside_bbox else -d12
            assert r == base + (CFG.P_coll if e.collided else 0.0) + CFG.P_time


@given(st.floats(0.2, 2.0), st.floats(0.2, 2.0))
def test_mover_reward_monotone_beyond_safe_distance(a, b):
    lo, hi = sorted((a, b))
    assert mover_reward(ev(d12=lo), CFG) <= mover_reward(ev(d12=hi), CFG)


@pytest.mark.parametrize("bad", [{"R_s": -1}, {"R_b": 0}, {"P_time": 0.01}, {"P_close": -0.3}])
def test_config_invariants(bad):
    with pytest.raises(ValueError):
        RewardConfig(**bad)
