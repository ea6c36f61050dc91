import logging
import os
import re
from typing import Dict, List, Optional

import pandas as pd

from models.run import EvalSummary, RunConfig
from services.evaluation_service import SUMMARY_FILE, TRAJECTORIES_FILE, TRIALS_FILE
from services.training_service import EPISODES_FILE, FINAL_CHECKPOINT, RUN_CONFIG_FILE
from utils.errors import NavError
from utils.file_utils import FileUtils

logger = logging.getLogger(__name__)

_CHECKPOINT_RE = re.compile(r'^checkpoint_ep(\d+)\.qnav$')


class RunService:
    """Read-only access to training and evaluation output directories"""

    def __init__(self, runs_dir: str = "runs"):
        self.runs_dir = runs_dir

    def run_path(self, run_name: str) -> str:
        return os.path.join(self.runs_dir, run_name)

    def list_runs(self) -> List[str]:
        """Directories holding a training log or an evaluation summary"""
        try:
            runs = []
            for name in os.listdir(self.runs_dir):
                path = self.run_path(name)
                if os.path.isdir(path) and (os.path.exists(os.path.join(path, EPISODES_FILE))
                                            or os.path.exists(os.path.join(path, SUMMARY_FILE))):
                    runs.append(name)
            return sorted(runs)
        except OSError as e:
            logger.warning("Error listing runs in %s: %s", self.runs_dir, e)
            return []

    def load_run_config(self, run_name: str) -> Optional[Dict]:
        path = os.path.join(self.run_path(run_name), RUN_CONFIG_FILE)
        if not os.path.exists(path):
            return None
        try:
            return FileUtils.read_json(path)
        except NavError as e:
            logger.warning("Error loading run config: %s", e)
            return None

    def load_run(self, run_name: str) -> Optional[RunConfig]:
        config = self.load_run_config(run_name)
        if not config or 'run' not in config:
            return None
        try:
            return RunConfig.from_dict(config['run'])
        except (KeyError, ValueError, NavError) as e:
            logger.warning("Malformed run section in %s: %s", run_name, e)
            return None

    def load_episodes(self, run_name: str) -> Optional[pd.DataFrame]:
        return FileUtils.read_csv_file(os.path.join(self.run_path(run_name), EPISODES_FILE))

    def load_trials(self, run_name: str) -> Optional[pd.DataFrame]:
        return FileUtils.read_csv_file(os.path.join(self.run_path(run_name), TRIALS_FILE))

    def load_trajectories(self, run_name: str) -> Optional[pd.DataFrame]:
        return FileUtils.read_csv_file(os.path.join(self.run_path(run_name), TRAJECTORIES_FILE))

    def load_summary(self, run_name: str) -> Optional[EvalSummary]:
        path = os.path.join(self.run_path(run_name), SUMMARY_FILE)
        if not os.path.exists(path):
            return None
        try:
            return EvalSummary.from_dict(FileUtils.read_json(path))
        except (NavError, KeyError, TypeError, ValueError) as e:
            logger.warning("Error loading evaluation summary %s: %s", path, e)
            return None

    def list_checkpoints(self, run_name: str) -> List[str]:
        """Periodic checkpoints by episode, then final.qnav"""
        path = self.run_path(run_name)
        if not os.path.isdir(path):
            return []
        periodic = sorted((int(m.group(1)), name) for name in os.listdir(path)
                          if (m := _CHECKPOINT_RE.match(name)))
        names = [name for _, name in periodic]
        if os.path.exists(os.path.join(path, FINAL_CHECKPOINT)):
            names.append(FINAL_CHECKPOINT)
        return names

    def get_run_stats(self, run_name: str) -> Dict:
        """Episode count, outcome shares and trailing success rate of a training run"""
        episodes = self.load_episodes(run_name)
        if episodes is None or episodes.empty:
            return {}
        outcomes = episodes['outcome'].value_counts(normalize=True).to_dict()
        tail = episodes.tail(100)
        run = self.load_run(run_name)
        return {
            'scenario_id': run.scenario_id if run else None,
            'algo': run.algo.label if run else None,
            'episodes': int(len(episodes)),
            'total_steps': int(episodes['steps'].sum()),
            'outcome_shares': outcomes,
            'trailing_success_rate': float((tail['outcome'] == 'arrived').mean()),
            'trailing_mean_reward': float(tail['reward'].mean()),
            'checkpoints': len(self.list_checkpoints(run_name))
        }
