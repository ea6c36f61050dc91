import plotly.express as px
import plotly.graph_objects as go
import streamlit as st

from services.run_service import RunService


class TrainingUI:
    """Learning curves of a training run"""

    def __init__(self, run_service: RunService):
        self.run_service = run_service

    def render_training_dashboard(self, run_name: str, window: int = 100):
        st.markdown(f"#### Training - {run_name}")
        episodes = self.run_service.load_episodes(run_name)
        if episodes is None or episodes.empty:
            st.warning("No episode log in this run")
            return

        self._render_overview_metrics(run_name)

        episodes = episodes.copy()
        episodes['reward_ma'] = episodes['reward'].rolling(window, min_periods=1).mean()
        episodes['success_ma'] = (episodes['outcome'] == 'arrived').astype(float).rolling(window, min_periods=1).mean()

        tab1, tab2, tab3 = st.tabs(["Reward", "Success rate", "Outcomes"])
        with tab1:
            fig = go.Figure()
            fig.add_trace(go.Scatter(x=episodes['episode'], y=episodes['reward'], mode='markers',
                                     name='episode reward', marker=dict(size=3, opacity=0.4)))
            fig.add_trace(go.Scatter(x=episodes['episode'], y=episodes['reward_ma'], mode='lines',
                                     name=f'moving average ({window})'))
            fig.update_layout(height=380, xaxis_title='episode', yaxis_title='reward')
            st.plotly_chart(fig, use_container_width=True)
        with tab2:
            fig = px.line(episodes, x='episode', y=['success_ma', 'epsilon'],
                          title=f"Trailing success rate ({window}) and epsilon")
            fig.update_layout(height=380)
            st.plotly_chart(fig, use_container_width=True)
        with tab3:
            counts = episodes['outcome'].value_counts()
            fig = px.pie(values=counts.values, names=counts.index, title="Episode outcomes",
                         color=counts.index,
                         color_discrete_map={'arrived': '#2ca02c', 'collided': '#ff4b4b', 'idle': '#ffa500'})
            fig.update_layout(height=300)
            st.plotly_chart(fig, use_container_width=True)

        with st.expander("Run configuration"):
            config = self.run_service.load_run_config(run_name)
            if config:
                st.json(config)
            else:
                st.info("No run_config.json found")

    def _render_overview_metrics(self, run_name: str):
        stats = self.run_service.get_run_stats(run_name)
        col1, col2, col3, col4 = st.columns(4)
        with col1:
            st.metric("Episodes", stats.get('episodes', 0))
        with col2:
            st.metric("Trailing success", f"{100 * stats.get('trailing_success_rate', 0):.1f}%")
        with col3:
            st.metric("Trailing reward", f"{stats.get('trailing_mean_reward', 0):.1f}")
        with col4:
            st.metric("Checkpoints", stats.get('checkpoints', 0))

