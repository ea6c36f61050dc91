"""
Utility functions for the navigation stack.
"""

from .file_utils import FileUtils
from .logging_utils import LoggingUtils
from .validation_utils import ValidationUtils

__all__ = [
    'FileUtils',
    'LoggingUtils',
    'ValidationUtils'
]
