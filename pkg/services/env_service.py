import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np

from models.navigation import (
    LIDAR_BEAMS, Action, EnvConfig, EpisodeState, Observation, RobotPose,
    StepInfo, StepResult, TerminalKind, wrap_angle
)
from models.world import Vec2, World
from services.world_service import WorldService
from utils.errors import ConfigurationError, DomainError, UsageError
from utils.validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

# Scan reported once the robot has left the free space
OUT_OF_FREE_SPACE_RANGE = 1e-6


class EnvService:
    """Pure pieces of the navigation environment"""

    @staticmethod
    def compute_reward(d_t: float, min_x: float, step_index: int, cfg: EnvConfig) -> Tuple[float, TerminalKind]:
        """Arrival, then collision, then the step budget"""
        if d_t < cfg.c_d:
            return cfg.r_arrive, TerminalKind.ARRIVED
        if min_x < cfg.c_o:
            return cfg.r_collide, TerminalKind.COLLIDED
        if step_index >= cfg.max_steps:
            return cfg.r_idle, TerminalKind.IDLE
        return 0.0, TerminalKind.NONE

    @staticmethod
    def assemble_observation(pose: RobotPose, goal: Vec2, raw_lidar: np.ndarray,
                             cfg: EnvConfig, d_max: float) -> Observation:
        """Normalise ranges by the sensor range and goal distance by the arena diagonal d_max"""
        raw_lidar = np.asarray(raw_lidar, dtype=np.float64)
        lidar = np.clip(raw_lidar / cfg.lidar_max_range, 0.0, 1.0)
        dx, dy = goal.x - pose.x, goal.y - pose.y
        dist = min(math.hypot(dx, dy) / d_max, 1.0)
        heading = wrap_angle(math.atan2(dy, dx) - pose.theta) / math.pi
        return Observation(lidar=lidar, dist_to_goal=dist, heading_error=heading)

    @staticmethod
    def beam_angles(theta: float, n_beams: int = LIDAR_BEAMS) -> np.ndarray:
        return theta + 2.0 * np.pi * np.arange(n_beams) / n_beams

    @staticmethod
    def lidar_scan(world: World, pose: RobotPose, cfg: EnvConfig) -> np.ndarray:
        angles = EnvService.beam_angles(pose.theta, cfg.lidar_beams)
        return WorldService.cast_rays(world, pose.position, angles, cfg.lidar_max_range)

    @staticmethod
    def sample_goal(world: World, rng: np.random.Generator, cfg: Optional[EnvConfig] = None) -> Vec2:
        """Uniform point of goal_region with clearance above c_d"""
        cfg = cfg or EnvConfig()
        for attempt in range(cfg.max_rejections):
            goal = world.goal_region.sample(rng)
            if WorldService.min_obstacle_distance(world, goal) > cfg.c_d:
                if attempt:
                    logger.debug("Goal accepted after %d rejections", attempt)
                return goal
        raise ConfigurationError(
            f"No goal with clearance > {cfg.c_d} m found in {cfg.max_rejections} tries "
            f"(goal_region {world.goal_region.to_list()} of '{world.name}')"
        )

    @staticmethod
    def integrate(pose: RobotPose, action: Action, cfg: EnvConfig) -> RobotPose:
        """One unicycle step using the heading at the start of the step"""
        return RobotPose(
            x=pose.x + cfg.v_lin * math.cos(pose.theta) * cfg.dt,
            y=pose.y + cfg.v_lin * math.sin(pose.theta) * cfg.dt,
            theta=pose.theta + action.angular_velocity * cfg.dt
        )


class NavigationEnv:
    """Single-owner episode runner over an immutable World"""

    def __init__(self, world: World, cfg: Optional[EnvConfig] = None):
        self.world = world
        self.cfg = cfg or EnvConfig()
        ok, message = ValidationUtils.validate_env_config(self.cfg)
        if not ok:
            raise ConfigurationError(message)
        self.state: Optional[EpisodeState] = None
        self.rng: Optional[np.random.Generator] = None

    @property
    def pose(self) -> RobotPose:
        return self._require_state().pose

    @property
    def goal(self) -> Vec2:
        return self._require_state().goal

    @property
    def step_index(self) -> int:
        return self._require_state().step_index

    @property
    def terminal(self) -> TerminalKind:
        return self._require_state().terminal

    @property
    def trajectory(self) -> List[RobotPose]:
        """Poses of the current episode, starting with the reset pose"""
        return list(self._require_state().trajectory)

    @property
    def episode_time(self) -> float:
        return self.step_index * self.cfg.dt

    def _require_state(self) -> EpisodeState:
        if self.state is None:
            raise UsageError("Environment has not been reset")
        return self.state

    def _check_fixed_goal(self, goal: Vec2) -> None:
        if not self.world.goal_region.contains(goal):
            raise DomainError(f"Goal ({goal.x}, {goal.y}) is outside goal_region {self.world.goal_region.to_list()}")
        clearance = WorldService.min_obstacle_distance(self.world, goal)
        if clearance <= self.cfg.c_o:
            raise DomainError(f"Goal ({goal.x}, {goal.y}) has clearance {clearance:.3f} m <= c_o")

    def _check_fixed_start(self, start: RobotPose) -> None:
        if not WorldService.in_free_space(self.world, start.position):
            raise DomainError(f"Start ({start.x}, {start.y}) is not in free space")
        clearance = WorldService.min_obstacle_distance(self.world, start.position)
        if clearance <= self.cfg.c_o:
            raise DomainError(f"Start ({start.x}, {start.y}) has clearance {clearance:.3f} m <= c_o")

    def _observe(self, pose: RobotPose, goal: Vec2) -> Tuple[Observation, float]:
        if WorldService.in_free_space(self.world, pose.position):
            raw = EnvService.lidar_scan(self.world, pose, self.cfg)
            min_x = float(raw.min())
        else:
            raw = np.full(self.cfg.lidar_beams, OUT_OF_FREE_SPACE_RANGE)
            min_x = 0.0
        obs = EnvService.assemble_observation(pose, goal, raw, self.cfg, self.world.diagonal)
        return obs, min_x

    def reset(self, seed: Optional[int] = None, fixed_goal: Optional[Vec2] = None,
              fixed_start: Optional[RobotPose] = None) -> Observation:
        """Start an episode; a seed makes the initial observation bit-reproducible"""
        self.rng = np.random.default_rng(seed)
        cfg = self.cfg
        if fixed_goal is not None:
            self._check_fixed_goal(fixed_goal)
        if fixed_start is not None:
            self._check_fixed_start(fixed_start)
        if fixed_goal is not None and fixed_start is not None:
            d = (fixed_goal - fixed_start.position).norm()
            if d < cfg.c_d:
                raise DomainError(f"Goal is {d:.3f} m from the start, closer than c_d = {cfg.c_d}")

        for attempt in range(cfg.max_rejections):
            goal = fixed_goal if fixed_goal is not None else EnvService.sample_goal(self.world, self.rng, cfg)
            if fixed_start is not None:
                pose = fixed_start
            else:
                p = self.world.spawn_region.sample(self.rng)
                pose = RobotPose(p.x, p.y, self.rng.uniform(-math.pi, math.pi))
                if WorldService.min_obstacle_distance(self.world, p) <= cfg.c_o:
                    continue
            if (goal - pose.position).norm() < cfg.c_d:
                continue
            if attempt:
                logger.debug("Start accepted after %d rejections", attempt)
            self.state = EpisodeState(pose=pose, goal=goal, trajectory=[pose])
            obs, _ = self._observe(pose, goal)
            return obs
        raise ConfigurationError(
            f"No start pose found in {cfg.max_rejections} tries (spawn_region {self.world.spawn_region.to_list()})"
        )

    def step(self, action: Union[Action, int]) -> StepResult:
        state = self._require_state()
        if state.terminal.ends_episode:
            raise UsageError(f"Episode already ended ({state.terminal.value}); call reset")
        if not isinstance(action, Action):
            action = Action(action)
        state.pose = EnvService.integrate(state.pose, action, self.cfg)
        state.step_index += 1
        state.trajectory.append(state.pose)
        obs, min_x = self._observe(state.pose, state.goal)
        d_t = (state.goal - state.pose.position).norm()
        reward, terminal = EnvService.compute_reward(d_t, min_x, state.step_index, self.cfg)
        state.terminal = terminal
        return StepResult(observation=obs, reward=reward, terminal=terminal,
                          info=StepInfo(d_t=d_t, min_x=min_x, step_index=state.step_index))
