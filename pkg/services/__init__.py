"""
Business logic services for the navigation stack.
"""

from .world_service import WorldService
from .env_service import EnvService, NavigationEnv
from .network_service import NetworkService
from .checkpoint_service import CheckpointService
from .agent_service import AgentService
from .training_service import TrainingService
from .evaluation_service import EvaluationService
from .report_service import ReportService
from .overestimation_service import OverestimationService
from .run_service import RunService

__all__ = [
    'WorldService',
    'EnvService',
    'NavigationEnv',
    'NetworkService',
    'CheckpointService',
    'AgentService',
    'TrainingService',
    'EvaluationService',
    'ReportService',
    'OverestimationService',
    'RunService'
]
