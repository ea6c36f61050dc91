"""
Exception hierarchy for the navigation stack.
"""


class NavError(Exception):
    """Base class for every error raised by this package"""


class WorldParseError(NavError):
    """World file is not well-formed"""


class WorldValidationError(NavError):
    """World file parsed but violates a geometric invariant"""


class DomainError(NavError):
    """Argument outside the domain of an operation"""


class ConfigurationError(NavError):
    """Invalid or unsatisfiable configuration"""


class UsageError(NavError):
    """Operation called in the wrong state"""


class DimensionError(NavError):
    """Array or network shapes do not match"""


class NotReadyError(NavError):
    """Replay buffer holds too few transitions for the requested batch"""


class CheckpointError(NavError):
    """Base class for checkpoint I/O failures"""


class CheckpointFormatError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointTruncatedError(CheckpointError):
    pass
