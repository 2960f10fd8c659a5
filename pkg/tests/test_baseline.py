import math

import numpy as np
import pytest

from movegrasp.baseline import (
    PursuitBaseline,
    filter_init,
    filter_predict,
    filter_update,
    innovation,
)
from movegrasp.environment import GRASPED, EnvConfig, MoverAction, catalog_lookup, reset, step
from movegrasp.evaluation import episode_seed, run_episode
from movegrasp.policy import ROBOT_BOUNDS


def assert_valid_cov(fs):
    P = fs.cov
    assert np.max(np.abs(P - P.T)) <= 1e-12
    assert np.all(np.diag(P) > 0)
    assert np.all(np.linalg.eigvalsh(P) > 0)


def track(fs, positions, dt=0.1):
    for z in positions:
        fs = filter_update(filter_predict(fs, dt), z)
        assert_valid_cov(fs)
    return fs


def test_stationary_velocity_converges_to_zero():
    fs = track(filter_init((0.4, 0.1)), [(0.4, 0.1)] * 50)
    assert np.all(np.abs(fs.mean[2:]) < 1e-6)


def test_constant_velocity_is_recovered():
    positions = [(0.3 + 0.1 * 0.1 * k, -0.2) for k in range(1, 51)]
    fs = track(filter_init((0.3, -0.2)), positions)
    assert np.allclose(fs.mean[2:], (0.1, 0.0), atol=1e-3)


def test_zero_dt_predict_keeps_mean():
    fs = filter_init((0.2, 0.3))
    assert np.array_equal(filter_predict(fs, 0.0).mean, fs.mean)


@pytest.mark.parametrize("bad", [(math.nan, 0.0), (0.0, math.inf)])
def test_non_finite_measurement_rejected(bad):
    with pytest.raises(ValueError):
        filter_update(filter_init((0, 0)), bad)


def test_innovation_is_zero_mean():
    rng = np.random.default_rng(0)
    sigma_m = 1e-3
    fs = filter_init((0.3, 0.0), measurement_noise=sigma_m**2)
    n, innov, scale = 2000, [], []
    for k in range(1, n + 1):
        truth = np.array([0.3 + 0.005 * k, 0.002 * k])
        fs = filter_predict(fs, 0.1)
        z = truth + rng.normal(0, sigma_m, 2)
        if k > 20:  # past the initial transient
            innov.append(innovation(fs, z))
            scale.append(math.sqrt(fs.cov[0, 0] + sigma_m**2))
        fs = filter_update(fs, z)
    innov = np.array(innov)
    bound = 3 * np.mean(scale) / math.sqrt(len(innov))
    assert np.all(np.abs(innov.mean(axis=0)) < bound)


def test_static_object_always_grasped():
    for obj in ("rubiks_cube", "mustard_bottle", "power_drill"):
        cfg = EnvConfig(object=catalog_lookup(obj))
        for s in range(20):
            ws = reset(cfg, s)
            bot = PursuitBaseline(cfg)
            bot.reset(ws)
            while ws.terminal is None:
                ws, _ = step(ws, bot.act(ws), MoverAction(0, 0, 0), cfg)
            assert ws.terminal == GRASPED, (obj, s)


def test_slow_line_success_rate():
    bot = PursuitBaseline(EnvConfig())
    wins = sum(run_episode(bot, "line", (0.09, 0.1), "rubiks_cube", episode_seed(0, "line", 1, "cube", e)).success
               for e in range(50))
    assert wins / 50 >= 0.9


def test_hover_height_and_action_bounds():
    cfg = EnvConfig(object=catalog_lookup("sugar_box"), speed_ratio=0.6)
    bot = PursuitBaseline(cfg)
    rng = np.random.default_rng(1)
    for s in range(10):
        ws = reset(cfg, s)
        bot.reset(ws)
        descended = False
        while ws.terminal is None:
            a = bot.act(ws)
            vals = np.array([a.x1, a.y1, a.z1, a.theta1])
            assert np.all(vals >= ROBOT_BOUNDS[:, 0]) and np.all(vals <= ROBOT_BOUNDS[:, 1])
            descended |= bot.phase != "track"
            if not descended:
                assert ws.gripper.z >= ws.object.top_z + bot.cfg.hover - 1e-9
            ws, _ = step(ws, a, MoverAction(*rng.uniform(-1, 1, 3)), cfg)
