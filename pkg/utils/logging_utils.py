import logging
from typing import Union

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class LoggingUtils:
    """Logging setup shared by the CLI entry points"""

    @staticmethod
    def configure(level: Union[int, str] = logging.INFO) -> None:
        if isinstance(level, str):
            level = getattr(logging, level.upper(), logging.INFO)
        root = logging.getLogger()
        # Idempotent: handlers from an earlier call are replaced
        for handler in list(root.handlers):
            root.removeHandler(handler)
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(level)
