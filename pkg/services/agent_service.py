import logging
from typing import List, Optional, Sequence

import numpy as np

from models.agent import AgentConfig, Algo, DqnAgent, EpsilonSchedule
from models.navigation import N_ACTIONS, OBSERVATION_SIZE, Action
from models.network import AdamState, Mlp
from models.replay import ReplayBuffer, Transition
from services.network_service import NetworkService
from utils.errors import ConfigurationError, DomainError
from utils.validation_utils import ValidationUtils

logger = logging.getLogger(__name__)

# Nominal episode length used to plan the epsilon decay
PLANNED_STEPS_PER_EPISODE = 150
DECAY_FRACTION = 0.3


class AgentService:
    """DQN / Double DQN learning rules"""

    @staticmethod
    def create_agent(config: AgentConfig, rng: np.random.Generator,
                     obs_dim: int = OBSERVATION_SIZE, n_actions: int = N_ACTIONS) -> DqnAgent:
        ok, message = ValidationUtils.validate_agent_config(config)
        if not ok:
            raise ConfigurationError(message)
        dims = [obs_dim] + list(config.hidden_dims) + [n_actions]
        online = NetworkService.create_network(dims, rng)
        target = Mlp.create(dims)
        NetworkService.copy_weights(online, target)
        adam = AdamState.create(online, lr=config.learning_rate, beta1=config.beta1,
                                beta2=config.beta2, eps=config.adam_eps)
        return DqnAgent(config=config, online=online, target=target, adam=adam)

    @staticmethod
    def default_decay_steps(episodes: int) -> int:
        return max(1, int(DECAY_FRACTION * episodes * PLANNED_STEPS_PER_EPISODE))

    @staticmethod
    def epsilon_at(schedule: EpsilonSchedule, global_step: int) -> float:
        if global_step < 0:
            raise DomainError(f"global_step must be >= 0, got {global_step}")
        frac = min(global_step / schedule.decay_steps, 1.0)
        return schedule.eps_start + frac * (schedule.eps_end - schedule.eps_start)

    @staticmethod
    def select_action(q_values: np.ndarray, epsilon: float, rng: np.random.Generator) -> Action:
        """Epsilon-greedy; np.argmax resolves ties to the lowest index"""
        q_values = np.asarray(q_values, dtype=np.float64)
        if epsilon > 0.0 and rng.random() < epsilon:
            return Action(int(rng.integers(0, len(q_values))))
        return Action(int(np.argmax(q_values)))

    @staticmethod
    def greedy_action(net: Mlp, obs: np.ndarray) -> Action:
        return Action(int(np.argmax(NetworkService.forward(net, obs))))

    @staticmethod
    def act(agent: DqnAgent, obs: np.ndarray, epsilon: float, rng: np.random.Generator) -> Action:
        """select_action on the online net; the forward pass only runs on the greedy branch"""
        if epsilon > 0.0 and rng.random() < epsilon:
            return Action(int(rng.integers(0, agent.online.n_outputs)))
        return AgentService.greedy_action(agent.online, obs)

    # TD targets

    @staticmethod
    def dqn_target(r: float, done: bool, q_target_next: Sequence[float], gamma: float) -> float:
        if done:
            return float(r)
        return float(r + gamma * np.max(q_target_next))

    @staticmethod
    def ddqn_target(r: float, done: bool, q_online_next: Sequence[float],
                    q_target_next: Sequence[float], gamma: float) -> float:
        """Online net selects the next action, target net evaluates it"""
        if done:
            return float(r)
        a_star = int(np.argmax(q_online_next))
        return float(r + gamma * np.asarray(q_target_next, dtype=np.float64)[a_star])

    @staticmethod
    def dqn_targets(rewards: np.ndarray, dones: np.ndarray, q_target_next: np.ndarray, gamma: float) -> np.ndarray:
        bootstrap = rewards + gamma * q_target_next.max(axis=1)
        return np.where(dones, rewards, bootstrap)

    @staticmethod
    def ddqn_targets(rewards: np.ndarray, dones: np.ndarray, q_online_next: np.ndarray,
                     q_target_next: np.ndarray, gamma: float) -> np.ndarray:
        a_star = q_online_next.argmax(axis=1)
        evaluated = q_target_next[np.arange(len(a_star)), a_star]
        return np.where(dones, rewards, rewards + gamma * evaluated)

    @staticmethod
    def compute_targets(agent: DqnAgent, batch: List[Transition]) -> np.ndarray:
        rewards = np.array([t.r for t in batch], dtype=np.float64)
        dones = np.array([t.done for t in batch], dtype=bool)
        s_next = np.stack([t.s_next for t in batch])
        q_target_next = NetworkService.forward(agent.target, s_next)
        gamma = agent.config.gamma
        if agent.config.algo is Algo.DDQN:
            q_online_next = NetworkService.forward(agent.online, s_next)
            return AgentService.ddqn_targets(rewards, dones, q_online_next, q_target_next, gamma)
        return AgentService.dqn_targets(rewards, dones, q_target_next, gamma)

    @staticmethod
    def train_step(agent: DqnAgent, batch: List[Transition]) -> float:
        """One averaged Adam step of the online net; returns the mean squared TD error"""
        if not batch:
            raise DomainError("train_step needs a non-empty batch")
        targets = AgentService.compute_targets(agent, batch)
        states = np.stack([t.s for t in batch])
        actions = [t.a for t in batch]
        loss, grads = NetworkService.backward_batch(agent.online, states, actions, targets)
        NetworkService.clip_gradients(grads, agent.config.max_grad_norm)
        NetworkService.adam_step(agent.online, grads, agent.adam)
        return loss

    @staticmethod
    def maybe_sync_target(agent: DqnAgent, global_step: int) -> bool:
        if global_step % agent.config.target_sync_interval != 0:
            return False
        NetworkService.copy_weights(agent.online, agent.target)
        logger.debug("Synced target network at step %d", global_step)
        return True

    @staticmethod
    def observe(agent: DqnAgent, transition: Transition, buffer: ReplayBuffer,
                rng: np.random.Generator) -> Optional[float]:
        """Store a transition, train once when the buffer is warm, then count the step"""
        buffer.push(transition)
        loss = None
        if buffer.is_ready(agent.config.warmup):
            batch = buffer.sample_batch(agent.config.batch_size, rng)
            loss = AgentService.train_step(agent, batch)
        agent.global_step += 1
        AgentService.maybe_sync_target(agent, agent.global_step)
        return loss
