import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from models.navigation import (
    ANGULAR_VELOCITIES, N_ACTIONS, OBSERVATION_SIZE, Action, EnvConfig, Observation, RobotPose
)
from models.run import TRAJECTORY_COLUMNS, TRIAL_COLUMNS, EvalSummary, TrialRecord
from models.world import Rect, Vec2, World
from services.agent_service import AgentService
from services.checkpoint_service import CheckpointService
from services.env_service import NavigationEnv
from services.world_service import WorldService
from utils.errors import DimensionError, DomainError
from utils.file_utils import FileUtils

logger = logging.getLogger(__name__)

Policy = Callable[[Observation], Action]

GOAL_INSET = 0.5
SUMMARY_FILE = 'eval_summary.json'
TRIALS_FILE = 'trials.csv'
TRAJECTORIES_FILE = 'trajectories.csv'


class EvaluationService:
    """Greedy evaluation over four fixed goals"""

    @staticmethod
    def evaluation_goals(region: Rect, inset: float = GOAL_INSET) -> List[Vec2]:
        """Corners of the goal region moved inwards by inset, counter-clockwise from (xmin, ymin)"""
        return [Vec2(region.xmin + inset, region.ymin + inset), Vec2(region.xmax - inset, region.ymin + inset),
                Vec2(region.xmax - inset, region.ymax - inset), Vec2(region.xmin + inset, region.ymax - inset)]

    @staticmethod
    def greedy_policy(net) -> Policy:
        def act(obs: Observation) -> Action:
            return AgentService.greedy_action(net, obs.to_array())
        return act

    @staticmethod
    def scripted_goal_seeker(obs: Observation, dt: float = 0.1) -> Action:
        """Turn toward the goal, drive straight once aligned"""
        error = obs.heading_error * math.pi
        residuals = [abs(error - w * dt) for w in ANGULAR_VELOCITIES]
        return Action(int(np.argmin(residuals)))

    @staticmethod
    def run_trial(world: World, cfg: EnvConfig, policy: Policy, trial: int, goal_index: int,
                  goal: Vec2, seed: int) -> Tuple[TrialRecord, List[RobotPose]]:
        env = NavigationEnv(world, cfg)
        obs = env.reset(seed=seed, fixed_goal=goal)
        total = 0.0
        while True:
            result = env.step(policy(obs))
            total += result.reward
            obs = result.observation
            if result.done:
                break
        record = TrialRecord(trial=trial, goal_index=goal_index, goal_x=goal.x, goal_y=goal.y,
                             outcome=result.terminal, steps=env.step_index,
                             episode_time=env.episode_time, reward=total)
        return record, env.trajectory

    @staticmethod
    def evaluate_policy(policy: Policy, world: World, cfg: EnvConfig, goals: List[Vec2],
                        trials_per_goal: int, seed: int, workers: int = 1
                        ) -> Tuple[List[TrialRecord], Dict[int, List[RobotPose]]]:
        """Trials are numbered goal-major; results come back in trial order whatever the worker count"""
        usable = []
        for goal_index, goal in enumerate(goals):
            if not world.goal_region.contains(goal) or WorldService.min_obstacle_distance(world, goal) <= cfg.c_o:
                logger.warning("Evaluation goal %d at (%.2f, %.2f) rejected: not a free point of the goal region",
                               goal_index, goal.x, goal.y)
                continue
            usable.append((goal_index, goal))

        jobs = []
        seeds = np.random.SeedSequence(seed).spawn(len(goals) * trials_per_goal)
        for goal_index, goal in usable:
            for k in range(trials_per_goal):
                trial = goal_index * trials_per_goal + k
                trial_seed = int(seeds[trial].generate_state(1)[0])
                jobs.append((trial, goal_index, goal, trial_seed))

        def run(job):
            trial, goal_index, goal, trial_seed = job
            return EvaluationService.run_trial(world, cfg, policy, trial, goal_index, goal, trial_seed)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(run, jobs))
        else:
            outcomes = [run(job) for job in jobs]

        records = [record for record, _ in outcomes]
        trajectories = {record.trial: path for record, path in outcomes}
        return records, trajectories

    @staticmethod
    def summarize(records: List[TrialRecord], scenario_id: int, algo: str) -> EvalSummary:
        successes = [r for r in records if r.success]
        trials = len(records)
        summary = EvalSummary(
            scenario_id=scenario_id,
            algo=algo,
            trials=trials,
            successes=len(successes),
            success_rate=100.0 * len(successes) / trials if trials else 0.0
        )
        if successes:
            times = np.array([r.episode_time for r in successes])
            summary.episode_time_mean = float(times.mean())
            summary.episode_time_std = float(times.std())
        else:
            logger.warning("No successful trials for %s on scenario %d", algo, scenario_id)
        return summary

    @staticmethod
    def write_results(out_dir: str, summary: EvalSummary, records: List[TrialRecord],
                      trajectories: Dict[int, List[RobotPose]]) -> None:
        FileUtils.ensure_writable_dir(out_dir)
        FileUtils.write_json(os.path.join(out_dir, SUMMARY_FILE), summary.to_dict())
        FileUtils.write_csv(os.path.join(out_dir, TRIALS_FILE), [r.to_row() for r in records], TRIAL_COLUMNS)
        rows = [{'trial': trial, 'step': step, 'x': pose.x, 'y': pose.y, 'theta': pose.theta}
                for trial in sorted(trajectories) for step, pose in enumerate(trajectories[trial])]
        FileUtils.write_csv(os.path.join(out_dir, TRAJECTORIES_FILE), rows, TRAJECTORY_COLUMNS)

    @staticmethod
    def evaluate(checkpoint_path: str, scenario_id: int, trials_per_goal: int, seed: int,
                 out_dir: Optional[str] = None, workers: int = 1) -> EvalSummary:
        """Greedy evaluation of a checkpoint on a builtin scenario"""
        if trials_per_goal < 1:
            raise DomainError(f"trials_per_goal must be >= 1, got {trials_per_goal}")
        world = WorldService.builtin_scenario(scenario_id)
        net, _, meta = CheckpointService.load_checkpoint(checkpoint_path)
        if net.n_inputs != OBSERVATION_SIZE or net.n_outputs != N_ACTIONS:
            raise DimensionError(
                f"Checkpoint network maps {net.n_inputs} inputs to {net.n_outputs} actions; "
                f"the environment needs {OBSERVATION_SIZE} -> {N_ACTIONS}"
            )
        cfg = EnvConfig.from_dict(meta.get('env_config', {}))
        algo = str(meta.get('algo', 'unknown'))
        goals = EvaluationService.evaluation_goals(world.goal_region)
        records, trajectories = EvaluationService.evaluate_policy(
            EvaluationService.greedy_policy(net), world, cfg, goals, trials_per_goal, seed, workers
        )
        summary = EvaluationService.summarize(records, scenario_id, algo)
        logger.info("Evaluated %s on scenario %d: SR %.1f%% over %d trials",
                    algo, scenario_id, summary.success_rate, summary.trials)
        if out_dir:
            EvaluationService.write_results(out_dir, summary, records, trajectories)
        return summary
