import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np

from models.world import Vec2
from utils.errors import ConfigurationError, DomainError

# Angular velocity (rad/s) of each discrete action; linear speed is fixed.
ANGULAR_VELOCITIES: Tuple[float, ...] = (-1.5, -0.75, 0.0, 0.75, 1.5)
LINEAR_VELOCITY = 0.15
N_ACTIONS = len(ANGULAR_VELOCITIES)
LIDAR_BEAMS = 24
OBSERVATION_SIZE = LIDAR_BEAMS + 2


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]"""
    wrapped = angle - 2.0 * math.pi * math.floor((angle + math.pi) / (2.0 * math.pi))
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class RobotPose:
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'x', float(self.x))
        object.__setattr__(self, 'y', float(self.y))
        object.__setattr__(self, 'theta', wrap_angle(float(self.theta)))

    @property
    def position(self) -> Vec2:
        return Vec2(self.x, self.y)

    def to_dict(self) -> Dict:
        return {'x': self.x, 'y': self.y, 'theta': self.theta}


@dataclass(frozen=True)
class Action:
    index: int

    def __post_init__(self):
        if not 0 <= int(self.index) < N_ACTIONS:
            raise DomainError(f"Action index must be in [0, {N_ACTIONS - 1}], got {self.index}")
        object.__setattr__(self, 'index', int(self.index))

    @property
    def angular_velocity(self) -> float:
        return ANGULAR_VELOCITIES[self.index]

    @property
    def linear_velocity(self) -> float:
        return LINEAR_VELOCITY


class TerminalKind(str, Enum):
    NONE = 'none'
    ARRIVED = 'arrived'
    COLLIDED = 'collided'
    IDLE = 'idle'

    @property
    def ends_episode(self) -> bool:
        return self is not TerminalKind.NONE


@dataclass(frozen=True, eq=False)
class Observation:
    """Network input: 24 normalised ranges, normalised goal distance, heading error / pi"""
    lidar: np.ndarray
    dist_to_goal: float
    heading_error: float

    def __post_init__(self):
        lidar = np.asarray(self.lidar, dtype=np.float64)
        if lidar.shape != (LIDAR_BEAMS,):
            raise DomainError(f"Expected {LIDAR_BEAMS} lidar readings, got shape {lidar.shape}")
        lidar.setflags(write=False)
        object.__setattr__(self, 'lidar', lidar)

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.lidar, [self.dist_to_goal, self.heading_error]])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Observation):
            return NotImplemented
        return np.array_equal(self.to_array(), other.to_array())


@dataclass(frozen=True)
class StepInfo:
    d_t: float
    min_x: float
    step_index: int


@dataclass(frozen=True, eq=False)
class StepResult:
    observation: Observation
    reward: float
    terminal: TerminalKind
    info: StepInfo

    @property
    def done(self) -> bool:
        return self.terminal.ends_episode


@dataclass
class EnvConfig:
    """Simulation, sensing and reward constants"""
    dt: float = 0.1
    v_lin: float = LINEAR_VELOCITY
    c_d: float = 0.25
    c_o: float = 0.12
    max_steps: int = 500
    lidar_max_range: float = 3.5
    lidar_beams: int = LIDAR_BEAMS
    r_arrive: float = 200.0
    r_collide: float = -20.0
    r_idle: float = 0.0
    max_rejections: int = 1000

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EnvConfig':
        """Defaults overridden key by key; unknown keys are rejected"""
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigurationError(f"Unknown env config key(s): {', '.join(unknown)}")
        values = {}
        for name, value in data.items():
            caster = int if known[name].type in (int, 'int') else float
            try:
                values[name] = caster(value)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"Env config key '{name}' has invalid value {value!r}") from e
        return cls(**values)


@dataclass
class EpisodeState:
    """Mutable bookkeeping of the running episode"""
    pose: RobotPose
    goal: Vec2
    step_index: int = 0
    terminal: TerminalKind = TerminalKind.NONE
    trajectory: list = field(default_factory=list)
