"""
Data models for the navigation stack.
"""

from .world import Circle, Polygon, Rect, Segment, Vec2, World
from .navigation import (
    Action, EnvConfig, EpisodeState, Observation, RobotPose, StepInfo, StepResult, TerminalKind
)
from .network import AdamState, Gradients, Mlp
from .replay import ReplayBuffer, Transition
from .agent import AgentConfig, Algo, DqnAgent, EpsilonSchedule
from .run import EpisodeRecord, EvalSummary, RunConfig, TrialRecord
from .study import OverestimationConfig, SeedOutcome

__all__ = [
    'Vec2',
    'Segment',
    'Circle',
    'Polygon',
    'Rect',
    'World',
    'RobotPose',
    'Action',
    'TerminalKind',
    'Observation',
    'StepInfo',
    'StepResult',
    'EnvConfig',
    'EpisodeState',
    'Mlp',
    'Gradients',
    'AdamState',
    'Transition',
    'ReplayBuffer',
    'Algo',
    'EpsilonSchedule',
    'AgentConfig',
    'DqnAgent',
    'RunConfig',
    'EpisodeRecord',
    'TrialRecord',
    'EvalSummary',
    'OverestimationConfig',
    'SeedOutcome'
]
