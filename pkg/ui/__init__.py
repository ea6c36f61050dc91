"""
User interface components for the results browser.
"""

from .world_ui import WorldUI
from .training_ui import TrainingUI
from .evaluation_ui import EvaluationUI

__all__ = [
    'WorldUI',
    'TrainingUI',
    'EvaluationUI'
]
