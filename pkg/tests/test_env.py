"""
Differential-drive environment: kinematics, reward, reset sampling and lidar.
"""

import math

import numpy as np
import pytest

from models.navigation import Action, EnvConfig, RobotPose, TerminalKind
from models.world import Vec2
from services.env_service import EnvService, NavigationEnv
from services.world_service import WorldService
from utils.errors import ConfigurationError, DomainError, UsageError

from tests.conftest import SQUARE_ROOM


# ----------------------------------------------------------------------------
# kinematics
# ----------------------------------------------------------------------------

def test_integrate_straight():
    pose = EnvService.integrate(RobotPose(0, 0, 0), Action(2), EnvConfig())
    assert pose.x == pytest.approx(0.015, abs=1e-12)
    assert pose.y == pytest.approx(0.0, abs=1e-12)
    assert pose.theta == pytest.approx(0.0, abs=1e-12)


def test_integrate_turn_uses_old_heading():
    pose = EnvService.integrate(RobotPose(0, 0, 0), Action(4), EnvConfig())
    assert pose.x == pytest.approx(0.015, abs=1e-12)
    assert pose.y == pytest.approx(0.0, abs=1e-12)
    assert pose.theta == pytest.approx(0.15, abs=1e-12)


def test_heading_stays_wrapped():
    pose = RobotPose(0, 0, math.pi - 0.05)
    for _ in range(10):
        pose = EnvService.integrate(pose, Action(4), EnvConfig())
        assert -math.pi < pose.theta <= math.pi


@pytest.mark.parametrize('index', [-1, 5, 7])
def test_action_out_of_range(index):
    with pytest.raises(DomainError):
        Action(index)


# ----------------------------------------------------------------------------
# reward
# ----------------------------------------------------------------------------

@pytest.mark.parametrize('d_t', [0.249, 0.25, 0.251])
@pytest.mark.parametrize('min_x', [0.119, 0.12, 0.121])
@pytest.mark.parametrize('step_index', [499, 500])
def test_reward_boundaries(d_t, min_x, step_index):
    reward, terminal = EnvService.compute_reward(d_t, min_x, step_index, EnvConfig())
    if d_t < 0.25:
        assert (reward, terminal) == (200.0, TerminalKind.ARRIVED)
    elif min_x < 0.12:
        assert (reward, terminal) == (-20.0, TerminalKind.COLLIDED)
    elif step_index == 500:
        assert (reward, terminal) == (0.0, TerminalKind.IDLE)
    else:
        assert (reward, terminal) == (0.0, TerminalKind.NONE)


def test_reward_arrival_beats_collision():
    assert EnvService.compute_reward(0.1, 0.05, 10, EnvConfig()) == (200.0, TerminalKind.ARRIVED)


# ----------------------------------------------------------------------------
# observation
# ----------------------------------------------------------------------------

def test_observation_heading_error():
    cfg = EnvConfig()
    ranges = np.full(24, 3.5)
    ahead = EnvService.assemble_observation(RobotPose(0, 0, 0), Vec2(1, 0), ranges, cfg, 5.0)
    behind = EnvService.assemble_observation(RobotPose(0, 0, 0), Vec2(-1, 0), ranges, cfg, 5.0)
    left = EnvService.assemble_observation(RobotPose(0, 0, 0), Vec2(0, 1), ranges, cfg, 5.0)
    assert ahead.heading_error == 0.0
    assert abs(behind.heading_error) == pytest.approx(1.0)
    assert left.heading_error == pytest.approx(0.5)
    assert ahead.dist_to_goal == pytest.approx(0.2)
    np.testing.assert_array_equal(ahead.lidar, np.ones(24))


def test_observation_is_bounded():
    obs = EnvService.assemble_observation(RobotPose(0, 0, 0), Vec2(30, 0), np.full(24, 9.0), EnvConfig(), 5.0)
    assert obs.dist_to_goal == 1.0
    assert obs.lidar.max() == 1.0
    assert obs.to_array().shape == (26,)


def test_lidar_scan_square_room_center(square_world):
    scan = EnvService.lidar_scan(square_world, RobotPose(0, 0, 0), EnvConfig())
    assert scan.shape == (24,)
    for k in (0, 6, 12, 18):
        assert scan[k] == pytest.approx(2.0, abs=1e-9)
    assert scan[3] == pytest.approx(2 * math.sqrt(2), abs=1e-9)


def test_lidar_rotation_permutes_beams(stage_worlds):
    world = stage_worlds[2]
    cfg = EnvConfig()
    theta = 0.3
    first = EnvService.lidar_scan(world, RobotPose(0.15, -0.1, theta), cfg)
    turned = EnvService.lidar_scan(world, RobotPose(0.15, -0.1, theta + 2 * math.pi / 24), cfg)
    np.testing.assert_allclose(turned, np.roll(first, -1), atol=1e-9)


# ----------------------------------------------------------------------------
# reset and goal sampling
# ----------------------------------------------------------------------------

def test_reset_is_deterministic(stage_worlds):
    env = NavigationEnv(stage_worlds[1])
    first = env.reset(seed=7)
    pose, goal = env.pose, env.goal
    assert env.reset(seed=7) == first
    assert env.pose == pose and env.goal == goal


def test_reset_spawn_clearance(stage_worlds):
    env = NavigationEnv(stage_worlds[0])
    cfg = env.cfg
    for seed in range(1000):
        obs = env.reset(seed=seed)
        assert obs.lidar.min() * cfg.lidar_max_range > cfg.c_o
        assert (env.goal - env.pose.position).norm() >= cfg.c_d


def test_sample_goal_clearance(stage_worlds):
    rng = np.random.default_rng(3)
    for world in stage_worlds:
        for _ in range(200):
            goal = EnvService.sample_goal(world, rng)
            assert world.goal_region.contains(goal)
            assert WorldService.min_obstacle_distance(world, goal) > 0.25


def test_sample_goal_is_reproducible(stage_worlds):
    a = [EnvService.sample_goal(stage_worlds[2], np.random.default_rng(9)) for _ in range(3)]
    b = [EnvService.sample_goal(stage_worlds[2], np.random.default_rng(9)) for _ in range(3)]
    assert a == b


def test_sample_goal_degenerate_region():
    world = WorldService.world_from_dict(dict(SQUARE_ROOM, circles=[[1.0, 1.0, 0.4]],
                                              goal_region=[0.9, 0.9, 1.1, 1.1]))
    with pytest.raises(ConfigurationError):
        EnvService.sample_goal(world, np.random.default_rng(0), EnvConfig(max_rejections=50))


def test_reset_fixed_goal_at_start(square_world):
    env = NavigationEnv(square_world)
    with pytest.raises(DomainError):
        env.reset(seed=0, fixed_goal=Vec2(0.0, 0.0), fixed_start=RobotPose(0.0, 0.0, 0.0))


def test_reset_fixed_goal_outside_region(square_world):
    with pytest.raises(DomainError):
        NavigationEnv(square_world).reset(seed=0, fixed_goal=Vec2(1.8, 0.0))


def test_reset_fixed_start_in_obstacle(stage_worlds):
    with pytest.raises(DomainError):
        NavigationEnv(stage_worlds[2]).reset(seed=0, fixed_start=RobotPose(0.8, 0.7, 0.0))


def test_reset_fixed_start_inside_collision_band(square_world):
    env = NavigationEnv(square_world)
    with pytest.raises(DomainError, match='clearance'):
        env.reset(seed=0, fixed_goal=Vec2(-1.0, 0.0), fixed_start=RobotPose(1.95, 0.0, 0.0))
    obs = env.reset(seed=0, fixed_goal=Vec2(-1.0, 0.0), fixed_start=RobotPose(1.87, 0.0, 0.0))
    cfg = EnvConfig()
    assert obs.lidar.min() * cfg.lidar_max_range > cfg.c_o


# ----------------------------------------------------------------------------
# stepping
# ----------------------------------------------------------------------------

def test_step_into_wall_collides(square_world):
    env = NavigationEnv(square_world)
    env.reset(seed=0, fixed_goal=Vec2(-1.0, 0.0), fixed_start=RobotPose(1.87, 0.0, 0.0))
    result = env.step(2)
    assert result.reward == -20.0
    assert result.terminal is TerminalKind.COLLIDED
    assert result.done
    assert result.info.min_x == pytest.approx(0.115, abs=1e-9)


def test_step_through_wall_reports_zero_clearance(square_world):
    env = NavigationEnv(square_world, EnvConfig(dt=10.0))
    obs = env.reset(seed=0, fixed_goal=Vec2(-1.0, 0.0), fixed_start=RobotPose(1.0, 0.0, 0.0))
    assert obs.lidar.min() > 0
    result = env.step(2)
    assert result.terminal is TerminalKind.COLLIDED
    assert result.info.min_x == 0.0
    assert result.observation.lidar.max() < 1e-6


def test_step_reaches_goal(square_world):
    env = NavigationEnv(square_world)
    env.reset(seed=0, fixed_goal=Vec2(0.3, 0.0), fixed_start=RobotPose(0.0, 0.0, 0.0))
    results = [env.step(2) for _ in range(4)]
    assert [r.terminal for r in results[:3]] == [TerminalKind.NONE] * 3
    assert results[3].terminal is TerminalKind.ARRIVED
    assert results[3].reward == 200.0
    assert env.episode_time == pytest.approx(0.4)


def test_step_budget_ends_idle(square_world):
    env = NavigationEnv(square_world, EnvConfig(max_steps=5))
    env.reset(seed=0, fixed_goal=Vec2(-1.2, 1.2), fixed_start=RobotPose(0.0, 0.0, 0.0))
    results = [env.step(4) for _ in range(5)]
    assert all(r.reward == 0.0 for r in results)
    assert results[-1].terminal is TerminalKind.IDLE
    assert len(env.trajectory) == 6


def test_step_after_terminal(square_world):
    env = NavigationEnv(square_world, EnvConfig(max_steps=1))
    env.reset(seed=0)
    env.step(2)
    with pytest.raises(UsageError):
        env.step(2)


def test_step_before_reset(square_world):
    env = NavigationEnv(square_world)
    with pytest.raises(UsageError):
        env.step(0)
    with pytest.raises(UsageError):
        _ = env.pose


def test_random_episodes_respect_reward_image(stage_worlds):
    env = NavigationEnv(stage_worlds[1])
    rng = np.random.default_rng(1)
    for seed in range(20):
        env.reset(seed=seed)
        while True:
            result = env.step(int(rng.integers(5)))
            assert result.reward in (200.0, -20.0, 0.0)
            assert result.info.step_index <= 500
            if result.terminal is TerminalKind.ARRIVED:
                assert result.info.d_t < 0.25
            elif result.terminal is TerminalKind.COLLIDED:
                assert result.info.min_x < 0.12
            if result.done:
                break
        assert env.terminal is not TerminalKind.NONE


def test_same_seed_and_actions_reproduce_episode(stage_worlds):
    actions = np.random.default_rng(4).integers(5, size=200)

    def rollout():
        env = NavigationEnv(stage_worlds[2])
        out = [env.reset(seed=12).to_array()]
        for a in actions:
            r = env.step(int(a))
            out.append(np.append(r.observation.to_array(), r.reward))
            if r.done:
                break
        return out

    first, second = rollout(), rollout()
    assert len(first) == len(second)
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a, b)


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------

def test_env_config_unknown_key():
    with pytest.raises(ConfigurationError, match='warp'):
        EnvConfig.from_dict({'warp': 9})


def test_env_config_casts_values():
    cfg = EnvConfig.from_dict({'max_steps': '300', 'dt': 1})
    assert cfg.max_steps == 300 and isinstance(cfg.max_steps, int)
    assert cfg.dt == 1.0 and isinstance(cfg.dt, float)


def test_env_rejects_inconsistent_thresholds(square_world):
    with pytest.raises(ConfigurationError, match='c_o'):
        NavigationEnv(square_world, EnvConfig(c_o=0.3, c_d=0.25))
