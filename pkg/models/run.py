from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from models.agent import Algo
from models.navigation import TerminalKind


@dataclass
class RunConfig:
    """One training run"""
    scenario_id: int
    algo: Algo
    episodes: int
    seed: int
    output_directory: str
    env_overrides: Dict[str, Any] = field(default_factory=dict)
    agent_overrides: Dict[str, Any] = field(default_factory=dict)
    checkpoint_interval: int = 500
    show_progress: bool = True

    def to_dict(self) -> Dict:
        return {
            'scenario_id': self.scenario_id,
            'algo': self.algo.value,
            'episodes': self.episodes,
            'seed': self.seed,
            'output_directory': self.output_directory,
            'env_overrides': self.env_overrides,
            'agent_overrides': self.agent_overrides,
            'checkpoint_interval': self.checkpoint_interval
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'RunConfig':
        return cls(
            scenario_id=int(data['scenario_id']),
            algo=Algo.parse(data['algo']),
            episodes=int(data['episodes']),
            seed=int(data['seed']),
            output_directory=data.get('output_directory', ''),
            env_overrides=data.get('env_overrides', {}),
            agent_overrides=data.get('agent_overrides', {}),
            checkpoint_interval=int(data.get('checkpoint_interval', 500))
        )


@dataclass
class EpisodeRecord:
    episode_index: int
    total_reward: float
    steps: int
    outcome: TerminalKind
    epsilon_at_end: float
    wall_seconds: float

    def to_row(self) -> Dict:
        return {
            'episode': self.episode_index,
            'reward': self.total_reward,
            'steps': self.steps,
            'outcome': self.outcome.value,
            'epsilon': self.epsilon_at_end,
            'wall_seconds': self.wall_seconds
        }


EPISODE_COLUMNS = ['episode', 'reward', 'steps', 'outcome', 'epsilon', 'wall_seconds']


@dataclass
class TrialRecord:
    """One evaluation trial"""
    trial: int
    goal_index: int
    goal_x: float
    goal_y: float
    outcome: TerminalKind
    steps: int
    episode_time: float
    reward: float

    @property
    def success(self) -> bool:
        return self.outcome is TerminalKind.ARRIVED

    def to_row(self) -> Dict:
        return {
            'trial': self.trial,
            'goal_index': self.goal_index,
            'goal_x': self.goal_x,
            'goal_y': self.goal_y,
            'outcome': self.outcome.value,
            'steps': self.steps,
            'episode_time': self.episode_time,
            'reward': self.reward
        }


TRIAL_COLUMNS = ['trial', 'goal_index', 'goal_x', 'goal_y', 'outcome', 'steps', 'episode_time', 'reward']
TRAJECTORY_COLUMNS = ['trial', 'step', 'x', 'y', 'theta']


@dataclass
class EvalSummary:
    """Success rate and episode-time statistics (time over successful trials only)"""
    scenario_id: int
    algo: str
    trials: int
    successes: int
    success_rate: float
    episode_time_mean: Optional[float] = None
    episode_time_std: Optional[float] = None

    @property
    def has_time_statistics(self) -> bool:
        return self.episode_time_mean is not None

    def to_dict(self) -> Dict:
        return {
            'scenario_id': self.scenario_id,
            'algo': self.algo,
            'trials': self.trials,
            'successes': self.successes,
            'success_rate': self.success_rate,
            'episode_time_mean': self.episode_time_mean,
            'episode_time_std': self.episode_time_std
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'EvalSummary':
        return cls(
            scenario_id=int(data['scenario_id']),
            algo=str(data['algo']),
            trials=int(data['trials']),
            successes=int(data['successes']),
            success_rate=float(data['success_rate']),
            episode_time_mean=data.get('episode_time_mean'),
            episode_time_std=data.get('episode_time_std')
        )
