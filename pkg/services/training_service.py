import logging
import os
import time
from collections import deque
from typing import List, Tuple

import numpy as np
from tqdm import tqdm

from models.agent import AgentConfig, DqnAgent
from models.navigation import EnvConfig, TerminalKind
from models.replay import ReplayBuffer, Transition
from models.run import EPISODE_COLUMNS, EpisodeRecord, RunConfig
from services.agent_service import AgentService
from services.checkpoint_service import CheckpointService
from services.env_service import NavigationEnv
from services.world_service import WorldService
from utils.errors import ConfigurationError
from utils.file_utils import FileUtils
from utils.validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

RUN_CONFIG_FILE = 'run_config.json'
EPISODES_FILE = 'episodes.csv'
FINAL_CHECKPOINT = 'final.qnav'
TRAILING_WINDOW = 100


class TrainingService:
    """Seeded training runs writing an episode log and checkpoints"""

    @staticmethod
    def resolve_configs(run: RunConfig) -> Tuple[EnvConfig, AgentConfig]:
        """Apply overrides to the defaults and validate everything before any episode runs"""
        ok, message = ValidationUtils.validate_run_config(run)
        if not ok:
            raise ConfigurationError(message)
        env_cfg = EnvConfig.from_dict(dict(run.env_overrides))
        overrides = dict(run.agent_overrides)
        overrides['algo'] = run.algo.value
        agent_cfg = AgentConfig.from_dict(overrides)
        if 'decay_steps' not in dict(overrides.get('epsilon', {})):
            agent_cfg.epsilon.decay_steps = AgentService.default_decay_steps(run.episodes)
        for validate, cfg in ((ValidationUtils.validate_env_config, env_cfg),
                              (ValidationUtils.validate_agent_config, agent_cfg)):
            ok, message = validate(cfg)
            if not ok:
                raise ConfigurationError(message)
        return env_cfg, agent_cfg

    @staticmethod
    def checkpoint_meta(run: RunConfig, env_cfg: EnvConfig, agent: DqnAgent, episodes_done: int) -> dict:
        return {
            'algo': agent.config.algo.value,
            'scenario_id': run.scenario_id,
            'episodes': episodes_done,
            'seed': run.seed,
            'global_step': agent.global_step,
            'env_config': env_cfg.to_dict(),
            'agent_config': agent.config.to_dict()
        }

    @staticmethod
    def run_episode(env: NavigationEnv, agent: DqnAgent, buffer: ReplayBuffer, episode_index: int,
                    episode_seed: int, action_rng: np.random.Generator,
                    replay_rng: np.random.Generator) -> EpisodeRecord:
        """One epsilon-greedy episode with a freshly sampled goal"""
        s = env.reset(seed=episode_seed).to_array()
        total_reward = 0.0
        while True:
            epsilon = AgentService.epsilon_at(agent.config.epsilon, agent.global_step)
            action = AgentService.act(agent, s, epsilon, action_rng)
            result = env.step(action)
            s_next = result.observation.to_array()
            AgentService.observe(agent, Transition(s, action.index, result.reward, s_next, result.done),
                                 buffer, replay_rng)
            total_reward += result.reward
            s = s_next
            if result.done:
                break
        return EpisodeRecord(
            episode_index=episode_index,
            total_reward=total_reward,
            steps=env.step_index,
            outcome=result.terminal,
            epsilon_at_end=AgentService.epsilon_at(agent.config.epsilon, agent.global_step),
            wall_seconds=env.episode_time
        )

    @staticmethod
    def write_episode_log(run_dir: str, records: List[EpisodeRecord]) -> None:
        FileUtils.write_csv(os.path.join(run_dir, EPISODES_FILE), [r.to_row() for r in records], EPISODE_COLUMNS)

    @staticmethod
    def train(run: RunConfig) -> List[EpisodeRecord]:
        env_cfg, agent_cfg = TrainingService.resolve_configs(run)
        run_dir = FileUtils.ensure_writable_dir(run.output_directory)
        world = WorldService.builtin_scenario(run.scenario_id)

        # Independent streams: weights, exploration, replay sampling, episode resets
        init_seq, action_seq, replay_seq, reset_seq = np.random.SeedSequence(run.seed).spawn(4)
        agent = AgentService.create_agent(agent_cfg, np.random.default_rng(init_seq))
        action_rng = np.random.default_rng(action_seq)
        replay_rng = np.random.default_rng(replay_seq)
        reset_rng = np.random.default_rng(reset_seq)
        env = NavigationEnv(world, env_cfg)
        buffer = ReplayBuffer(agent_cfg.buffer_capacity)

        FileUtils.write_json(os.path.join(run_dir, RUN_CONFIG_FILE), {
            'run': run.to_dict(),
            'env': env_cfg.to_dict(),
            'agent': agent_cfg.to_dict()
        })
        logger.info("Training %s on %s for %d episodes (seed %d) into %s",
                    agent_cfg.algo.label, world.name, run.episodes, run.seed, run_dir)

        records: List[EpisodeRecord] = []
        recent = deque(maxlen=TRAILING_WINDOW)
        started = time.perf_counter()
        progress = tqdm(range(1, run.episodes + 1), desc=f"{agent_cfg.algo.label} stage {run.scenario_id}",
                        unit='ep', disable=not run.show_progress)
        for episode in progress:
            episode_seed = int(reset_rng.integers(0, 2 ** 63 - 1))
            record = TrainingService.run_episode(env, agent, buffer, episode, episode_seed, action_rng, replay_rng)
            records.append(record)
            recent.append(record.outcome is TerminalKind.ARRIVED)
            progress.set_postfix(sr=f"{np.mean(recent):.2f}", eps=f"{record.epsilon_at_end:.3f}")

            if episode % run.checkpoint_interval == 0:
                path = os.path.join(run_dir, f'checkpoint_ep{episode}.qnav')
                CheckpointService.save_checkpoint(path, agent.online, agent.adam,
                                                  TrainingService.checkpoint_meta(run, env_cfg, agent, episode))
                TrainingService.write_episode_log(run_dir, records)

        TrainingService.write_episode_log(run_dir, records)
        CheckpointService.save_checkpoint(os.path.join(run_dir, FINAL_CHECKPOINT), agent.online, agent.adam,
                                          TrainingService.checkpoint_meta(run, env_cfg, agent, run.episodes))
        logger.info("Finished %d episodes, %d steps in %.1f s; trailing success rate %.2f",
                    run.episodes, agent.global_step, time.perf_counter() - started, float(np.mean(recent)))
        return records
