from typing import List

import plotly.graph_objects as go
import streamlit as st

from services.report_service import ReportService
from services.run_service import RunService
from services.world_service import WorldService
from ui.world_ui import WorldUI
from utils.errors import NavError


class EvaluationUI:
    """Success-rate / episode-time comparison and evaluation trajectories"""

    def __init__(self, run_service: RunService):
        self.run_service = run_service

    def render_comparison(self, run_names: List[str]):
        st.markdown("#### Evaluation comparison")
        summaries = [s for s in (self.run_service.load_summary(name) for name in run_names) if s is not None]
        if not summaries:
            st.info("Select runs that contain eval_summary.json")
            return
        st.text(ReportService.format_text(summaries))
        table = ReportService.to_frame(summaries)
        st.dataframe(table, use_container_width=True)
        st.download_button("Download CSV", ReportService.format_csv(summaries),
                           file_name="comparison.csv", mime="text/csv")

    def render_trajectories(self, run_name: str):
        summary = self.run_service.load_summary(run_name)
        trials = self.run_service.load_trials(run_name)
        paths = self.run_service.load_trajectories(run_name)
        if summary is None or trials is None or paths is None:
            st.warning("Evaluation files are missing for this run")
            return
        try:
            world = WorldService.builtin_scenario(summary.scenario_id)
        except NavError as e:
            st.error(f"Cannot load scenario: {e}")
            return

        st.markdown(f"#### Trials - {run_name}")
        col1, col2, col3 = st.columns(3)
        with col1:
            st.metric("Success rate", f"{summary.success_rate:.1f}%")
        with col2:
            st.metric("Trials", summary.trials)
        with col3:
            st.metric("Episode time", ReportService.format_time(summary))

        fig = WorldUI.build_world_figure(world)
        colors = {'arrived': '#2ca02c', 'collided': '#ff4b4b', 'idle': '#ffa500'}
        outcome_by_trial = dict(zip(trials['trial'], trials['outcome']))
        for trial, path in paths.groupby('trial'):
            outcome = outcome_by_trial.get(trial, 'idle')
            fig.add_trace(go.Scatter(x=path['x'], y=path['y'], mode='lines', name=f"trial {trial} ({outcome})",
                                     line=dict(color=colors.get(outcome, '#888888'), width=1.5)))
        goals = trials.drop_duplicates('goal_index')
        fig.add_trace(go.Scatter(x=goals['goal_x'], y=goals['goal_y'], mode='markers', name='goals',
                                 marker=dict(symbol='star', size=14, color='#d62728')))
        st.plotly_chart(fig, use_container_width=True)
        st.dataframe(trials, use_container_width=True)
