import io
import logging
import os
from typing import List, Sequence

import pandas as pd

from models.run import EvalSummary
from services.evaluation_service import SUMMARY_FILE
from utils.errors import ConfigurationError
from utils.file_utils import FileUtils

logger = logging.getLogger(__name__)

ABSENT = '—'
CSV_COLUMNS = ['env', 'algorithm', 'et_mean_s', 'et_std_s', 'sr_percent', 'trials']


class ReportService:
    """Comparison table of evaluation summaries"""

    @staticmethod
    def load_summaries(directories: Sequence[str]) -> List[EvalSummary]:
        summaries = []
        for directory in directories:
            path = os.path.join(directory, SUMMARY_FILE)
            try:
                summaries.append(EvalSummary.from_dict(FileUtils.read_json(path)))
            except (KeyError, TypeError, ValueError) as e:
                raise ConfigurationError(f"Malformed evaluation summary {path}: {e!r}") from e
        return summaries

    @staticmethod
    def env_label(scenario_id: int) -> str:
        return f"Stage {scenario_id}"

    @staticmethod
    def format_time(summary: EvalSummary) -> str:
        if not summary.has_time_statistics:
            return ABSENT
        return f"{summary.episode_time_mean:.2f} ± {summary.episode_time_std:.2f}"

    @staticmethod
    def to_frame(summaries: Sequence[EvalSummary]) -> pd.DataFrame:
        """Numeric table; absent time statistics are NaN"""
        rows = [{
            'env': ReportService.env_label(s.scenario_id),
            'algorithm': s.algo.upper(),
            'et_mean_s': s.episode_time_mean,
            'et_std_s': s.episode_time_std,
            'sr_percent': s.success_rate,
            'trials': s.trials
        } for s in summaries]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)

    @staticmethod
    def format_text(summaries: Sequence[EvalSummary]) -> str:
        table = pd.DataFrame([{
            'Env': ReportService.env_label(s.scenario_id),
            'Algorithm': s.algo.upper(),
            'ET (s)': ReportService.format_time(s),
            'SR (%)': f"{s.success_rate:.1f}"
        } for s in summaries], columns=['Env', 'Algorithm', 'ET (s)', 'SR (%)'])
        return table.to_string(index=False) + '\n'

    @staticmethod
    def format_csv(summaries: Sequence[EvalSummary]) -> str:
        buffer = io.StringIO()
        ReportService.to_frame(summaries).to_csv(buffer, index=False, lineterminator='\n')
        return buffer.getvalue()

    @staticmethod
    def report(summaries: Sequence[EvalSummary], fmt: str = 'text') -> str:
        if not summaries:
            raise ConfigurationError("report needs at least one evaluation summary")
        if fmt == 'csv':
            return ReportService.format_csv(summaries)
        if fmt == 'text':
            return ReportService.format_text(summaries)
        raise ConfigurationError(f"Unknown report format '{fmt}' (expected text or csv)")
