import logging
from typing import List

import numpy as np
from tqdm import tqdm

from models.agent import AgentConfig, Algo, EpsilonSchedule
from models.replay import ReplayBuffer, Transition
from models.study import OverestimationConfig, SeedOutcome
from services.agent_service import AgentService
from services.network_service import NetworkService

logger = logging.getLogger(__name__)

N_STATES = 2
START, MIDDLE = 0, 1
STUDY_ACTIONS = 5


class OverestimationService:
    """Max-Q bias of DQN versus Double DQN on a chain whose true values are all zero"""

    @staticmethod
    def one_hot(state: int) -> np.ndarray:
        x = np.zeros(N_STATES)
        x[state] = 1.0
        return x

    @staticmethod
    def agent_config(cfg: OverestimationConfig, algo: Algo) -> AgentConfig:
        """Linear Q-function over one-hot states, uniform behaviour"""
        return AgentConfig(
            algo=algo,
            gamma=cfg.gamma,
            batch_size=cfg.batch_size,
            target_sync_interval=cfg.target_sync_interval,
            epsilon=EpsilonSchedule(eps_start=1.0, eps_end=1.0, decay_steps=1),
            learning_rate=cfg.learning_rate,
            warmup=cfg.warmup,
            buffer_capacity=cfg.buffer_capacity,
            hidden_dims=[]
        )

    @staticmethod
    def run_seed(cfg: OverestimationConfig, algo: Algo, seed: int) -> float:
        """Mean max_a Q(start) over the last cfg.measure_last steps"""
        init_seq, action_seq, reward_seq, replay_seq = np.random.SeedSequence(seed).spawn(4)
        agent = AgentService.create_agent(OverestimationService.agent_config(cfg, algo),
                                          np.random.default_rng(init_seq),
                                          obs_dim=N_STATES, n_actions=STUDY_ACTIONS)
        action_rng = np.random.default_rng(action_seq)
        reward_rng = np.random.default_rng(reward_seq)
        replay_rng = np.random.default_rng(replay_seq)
        buffer = ReplayBuffer(cfg.buffer_capacity)

        start, middle, terminal = (OverestimationService.one_hot(START), OverestimationService.one_hot(MIDDLE),
                                   np.zeros(N_STATES))
        uniform = np.zeros(STUDY_ACTIONS)
        state = START
        measured: List[float] = []
        for step in range(cfg.steps):
            action = AgentService.select_action(uniform, 1.0, action_rng)
            if state == START:
                transition = Transition(start, action.index, 0.0, middle, False)
                state = MIDDLE
            else:
                reward = float(reward_rng.normal(0.0, cfg.noise_std))
                transition = Transition(middle, action.index, reward, terminal, True)
                state = START
            AgentService.observe(agent, transition, buffer, replay_rng)
            if step >= cfg.steps - cfg.measure_last:
                measured.append(float(np.max(NetworkService.forward(agent.online, start))))
        return float(np.mean(measured))

    @staticmethod
    def run_study(cfg: OverestimationConfig, show_progress: bool = False) -> List[SeedOutcome]:
        outcomes = []
        for seed in tqdm(cfg.seeds, desc='overestimation', unit='seed', disable=not show_progress):
            outcome = SeedOutcome(
                seed=seed,
                dqn_max_q=OverestimationService.run_seed(cfg, Algo.DQN, seed),
                ddqn_max_q=OverestimationService.run_seed(cfg, Algo.DDQN, seed)
            )
            logger.info("Seed %d: DQN max Q %.4f, DDQN max Q %.4f", seed, outcome.dqn_max_q, outcome.ddqn_max_q)
            outcomes.append(outcome)
        wins = sum(o.dqn_higher for o in outcomes)
        logger.info("DQN estimate above DDQN in %d of %d seeds", wins, len(outcomes))
        return outcomes
