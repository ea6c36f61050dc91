import json
import logging
import os
from typing import Any, Dict, List, Optional

import pandas as pd

from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


class FileUtils:
    """Utility functions for file handling"""

    @staticmethod
    def ensure_writable_dir(path: str) -> str:
        """Create the directory if needed and check that it accepts files"""
        try:
            os.makedirs(path, exist_ok=True)
        except OSError as e:
            raise ConfigurationError(f"Cannot create output directory '{path}': {e}") from e
        if not os.access(path, os.W_OK):
            raise ConfigurationError(f"Output directory '{path}' is not writable")
        return path

    @staticmethod
    def read_text(file_path: str) -> str:
        with open(file_path, 'r', encoding='utf-8') as f:
            return f.read()

    @staticmethod
    def write_text(file_path: str, text: str) -> None:
        with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)

    @staticmethod
    def read_json(file_path: str) -> Dict[str, Any]:
        """Read a JSON document, raising ConfigurationError on bad input"""
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ConfigurationError(f"File not found: {file_path}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON in {file_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"{file_path} must contain a JSON object")
        return data

    @staticmethod
    def write_json(file_path: str, data: Dict[str, Any]) -> None:
        with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(data, f, indent=2)
            f.write('\n')

    @staticmethod
    def write_csv(file_path: str, rows: List[Dict[str, Any]], columns: List[str]) -> None:
        """Write rows with a fixed column order; byte output depends only on the rows"""
        df = pd.DataFrame(rows, columns=columns)
        df.to_csv(file_path, index=False, lineterminator='\n', encoding='utf-8')

    @staticmethod
    def read_csv_file(file_path: str) -> Optional[pd.DataFrame]:
        """Read CSV file and return DataFrame, or None when it is missing or unreadable"""
        try:
            return pd.read_csv(file_path)
        except FileNotFoundError:
            return None
        except Exception as e:
            logger.warning("Error reading CSV file %s: %s", file_path, e)
            return None
