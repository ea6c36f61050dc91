import streamlit as st

from services.run_service import RunService
from services.world_service import WorldService
from ui.evaluation_ui import EvaluationUI
from ui.training_ui import TrainingUI
from ui.world_ui import WorldUI


def configure_page():
    """Configure Streamlit page settings"""
    st.set_page_config(
        page_title="Mapless Navigation Results",
        page_icon="🤖",
        layout="wide",
        initial_sidebar_state="expanded"
    )


def initialize_session_state():
    if 'runs_dir' not in st.session_state:
        st.session_state.runs_dir = 'runs'
    if 'current_view' not in st.session_state:
        st.session_state.current_view = 'Training'


def render_sidebar():
    """Runs folder, view selection and quick help"""
    with st.sidebar:
        st.title("Navigation")
        st.session_state.runs_dir = st.text_input("Runs folder", value=st.session_state.runs_dir)
        st.session_state.current_view = st.radio("Select View:", ["Training", "Evaluation", "Scenarios"],
                                                 key="view_selector")
        st.markdown("---")
        st.markdown("### Quick Help")
        with st.expander("Producing runs"):
            st.markdown("""
            - `python cli.py train --scenario 1 --algo ddqn --episodes 1000 --seed 0 --out runs/s1_ddqn`
            - `python cli.py eval --checkpoint runs/s1_ddqn/final.qnav --scenario 1 --trials-per-goal 5 --seed 0 --out runs/s1_ddqn_eval`
            """)
        with st.expander("Outcomes"):
            st.markdown("""
            - **arrived**: goal closer than 0.25 m (+200)
            - **collided**: closest lidar reading under 0.12 m (-20)
            - **idle**: 500 steps without either (0)
            """)


def main():
    """Read-only browser over training and evaluation outputs"""
    configure_page()
    initialize_session_state()

    run_service = RunService(st.session_state.runs_dir)
    render_sidebar()
    runs = run_service.list_runs()
    view = st.session_state.current_view

    if view == 'Scenarios':
        scenario_id = st.selectbox("Scenario", [1, 2, 3])
        WorldUI().render_world_viewer(WorldService.builtin_scenario(scenario_id))
    elif not runs:
        st.title("Mapless Navigation Results")
        st.info(f"No runs found under '{st.session_state.runs_dir}'")
    elif view == 'Training':
        run_name = st.selectbox("Run", runs)
        TrainingUI(run_service).render_training_dashboard(run_name)
    else:
        evaluation_ui = EvaluationUI(run_service)
        selected = st.multiselect("Runs to compare", runs, default=runs[:2])
        evaluation_ui.render_comparison(selected)
        st.markdown("---")
        run_name = st.selectbox("Trajectories of", runs)
        evaluation_ui.render_trajectories(run_name)


if __name__ == "__main__":
    main()
